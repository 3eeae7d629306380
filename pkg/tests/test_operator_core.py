import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from statemaps.operator_core import (
    ShapeError,
    as_matrix,
    bar_operator,
    dual_conjugate,
    hs_inner,
    inverse_permutation,
    matrix_from_json,
    matrix_to_json,
    norm,
    numerical_rank,
    permute_factors,
    rank_one,
    schmidt_decompose,
    singular_values,
    vector_from_json,
    vector_to_json,
)
from statemaps.sampling import ginibre, rng_for

from conftest import seeds


def test_as_matrix_rejects_bad_input():
    with pytest.raises(ShapeError):
        as_matrix(np.zeros(3))
    with pytest.raises(ShapeError):
        as_matrix(np.zeros((2, 3)), square=True)
    with pytest.raises(ValueError):
        as_matrix([[np.nan]])


def test_dual_conjugate_and_bar():
    v = np.array([1 + 2j, -3j])
    assert np.array_equal(dual_conjugate(v), v.conj())
    a = np.array([[1j, 2], [3, 4 - 1j]])
    assert np.array_equal(bar_operator(a), a.conj())


def test_hs_inner_matches_trace_formula(rng):
    a, b = ginibre(rng, 3, 4), ginibre(rng, 3, 4)
    assert abs(hs_inner(a, b) - np.trace(a.conj().T @ b)) < 1e-12


@pytest.mark.parametrize("kind,expected", [("hs", np.sqrt(2)), ("trace", 2.0), ("operator", 1.0)])
def test_norms_of_identity(kind, expected):
    assert norm(np.eye(2), kind) == pytest.approx(expected, abs=1e-15)


def test_norm_unknown_kind():
    with pytest.raises(ValueError):
        norm(np.eye(2), "frobenius")


@given(seeds)
def test_norm_ordering(seed):
    a = ginibre(rng_for(seed), 4, 3)
    op, hs, tr = norm(a, "operator"), norm(a, "hs"), norm(a, "trace")
    assert op <= hs * (1 + 1e-12)
    assert hs <= tr * (1 + 1e-12)


def test_zero_row_compression_is_exact(rng):
    a = np.zeros((6, 5), dtype=complex)
    a[[0, 3], 1:3] = ginibre(rng, 2, 2)
    assert np.allclose(singular_values(a)[:2], np.linalg.svd(a[[0, 3]][:, 1:3], compute_uv=False))
    assert norm(a, "trace") == pytest.approx(np.linalg.svd(a, compute_uv=False).sum(), rel=1e-13)


def test_numerical_rank():
    assert numerical_rank(np.diag([1.0, 1e-3, 1e-12])) == 2
    assert numerical_rank(np.zeros((3, 3))) == 0


@given(seeds)
def test_schmidt_decomposition_reconstructs(seed):
    a = ginibre(rng_for(seed), 3, 4)
    sd = schmidt_decompose(a)
    assert sd.rank == 3
    assert np.allclose(sd.reconstruct(), a, atol=1e-12)
    assert np.all(np.diff(sd.coefficients) <= 0)


@given(st.permutations(range(4)), seeds)
def test_permute_factors_inverse(perm, seed):
    dims = (2, 3, 1, 2)
    t = ginibre(rng_for(seed), 12, 1).ravel()
    moved = permute_factors(t, dims, perm)
    back = permute_factors(moved, tuple(dims[p] for p in perm), inverse_permutation(perm))
    assert np.array_equal(back, t)


def test_rank_one():
    x, y = np.array([1, 1j]), np.array([2, 1j])
    assert np.array_equal(rank_one(x, y), np.outer(x, y.conj()))


@given(seeds)
def test_matrix_json_roundtrip_bit_exact(seed):
    a = ginibre(rng_for(seed), 3, 2)
    back = matrix_from_json(json.loads(json.dumps(matrix_to_json(a))))
    assert back.tobytes() == a.tobytes()


def test_matrix_json_rejects_length_mismatch():
    with pytest.raises(ValueError):
        matrix_from_json({"rows": 2, "cols": 2, "data": [[1.0, 0.0]] * 3})


def test_vector_json_roundtrip():
    v = np.array([1, 2j, 3, 4 - 1j])
    x, d1, d2 = vector_from_json(vector_to_json(v, 2, 2))
    assert (d1, d2) == (2, 2)
    assert np.array_equal(x, v)
