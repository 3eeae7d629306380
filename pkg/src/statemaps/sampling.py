"""Seeded random objects used by the searches, the harness and the tests."""
from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator for ``(seed, *stream)``; restart ``r`` uses ``rng_for(seed, r)``."""
    return np.random.default_rng([int(seed), *map(int, stream)])


def ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = ginibre(rng, dim, 1)[:, 0]
    return v / np.linalg.norm(v)


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return unitary_group.rvs(dim, random_state=rng)


def isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Random ``rows x cols`` matrix with orthonormal columns (QR of a Ginibre matrix)."""
    q, r = np.linalg.qr(ginibre(rng, rows, cols))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def density_matrix(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    """Trace-one PSD matrix ``G G^dagger / Tr`` of the given rank (full by default)."""
    g = ginibre(rng, dim, dim if rank is None else rank)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = ginibre(rng, dim, dim)
    return (g + g.conj().T) / 2


def unit_operator_norm(rng: np.random.Generator, dim: int) -> np.ndarray:
    """``U D W^dagger`` with Haar ``U, W`` and a random diagonal whose largest modulus is exactly 1."""
    d = ginibre(rng, dim, 1)[:, 0]
    d = d / np.max(np.abs(d))
    return (haar_unitary(rng, dim) * d) @ haar_unitary(rng, dim).conj().T
