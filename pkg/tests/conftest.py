import sys

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from statemaps.duality import SuperOperator
from statemaps.sampling import ginibre, rng_for

# Derandomized so that repeated runs are byte-identical.
settings.register_profile("repro", derandomize=True, deadline=None, max_examples=40, print_blob=False)
settings.load_profile("repro")


def random_superop(rng, d_in, d_out):
    return SuperOperator(d_in, d_out, ginibre(rng, d_out**2, d_in**2))


def brute_force_j(m, d1, d2):
    out = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for i in range(d1):
        for j in range(d1):
            for a in range(d2):
                for b in range(d2):
                    out[i * d2 + b, j * d2 + a] = m[i * d1 + j, b * d2 + a]
    return out


def brute_force_jt(m, d1, d2):
    out = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for i in range(d1):
        for j in range(d1):
            for a in range(d2):
                for b in range(d2):
                    out[i * d2 + a, j * d2 + b] = m[i * d1 + j, b * d2 + a]
    return out


dims = st.integers(min_value=1, max_value=4)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def superops(draw, max_dim=4):
    d_in = draw(st.integers(1, max_dim))
    d_out = draw(st.integers(1, max_dim))
    return random_superop(rng_for(draw(seeds)), d_in, d_out)


@pytest.fixture
def rng():
    return rng_for(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.SUMMARY:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.SUMMARY):
        terminalreporter.write_line(mod.SUMMARY[num])
