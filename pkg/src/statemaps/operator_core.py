"""Dense complex-matrix substrate.

Operators ``A: H2 -> H1`` are plain 2-D ``complex128`` numpy arrays with entry
``A[r, c] = <e_r, A f_c>`` in the standard bases. Vectors are 1-D arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_TOL = 1e-10

NORM_KINDS = ("hs", "trace", "operator")


class ShapeError(ValueError):
    """Raised when operand shapes or dimensions are incompatible."""


class ComputationError(RuntimeError):
    """Raised when a numerical factorization fails to converge."""


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_vector(v) -> np.ndarray:
    x = np.asarray(v, dtype=complex)
    if x.ndim != 1:
        raise ShapeError(f"expected a 1-D vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite entries")
    return x


def dual_conjugate(v) -> np.ndarray:
    """Map a ket to its bra: the entrywise conjugate, read as a row."""
    return np.conj(as_vector(v))


def bar_operator(a) -> np.ndarray:
    """Conjugate operator ``bar(A) = (A^dagger)^*`` acting on the dual space.

    In the standard basis this is the entrywise complex conjugate, and unlike
    the adjoint it respects composition: ``bar(AB) = bar(A) bar(B)``.
    """
    return np.conj(as_matrix(a, square=True))


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``Tr(A^dagger B)``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def _compress(a: np.ndarray) -> np.ndarray:
    # Dropping all-zero rows and columns leaves the nonzero singular values intact.
    rows = np.any(a != 0, axis=1)
    cols = np.any(a != 0, axis=0)
    return a[np.ix_(rows, cols)]


def singular_values(a) -> np.ndarray:
    """All nonzero-block singular values of ``a``, non-increasing."""
    m = _compress(as_matrix(a))
    if m.size == 0:
        return np.zeros(0)
    try:
        return np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ComputationError(str(exc)) from exc


def norm(a, kind: str = "hs") -> float:
    """Schatten norm of ``a``: ``hs`` (p=2), ``trace`` (p=1) or ``operator`` (p=inf)."""
    if kind == "hs":
        return float(np.linalg.norm(as_matrix(a)))
    if kind not in NORM_KINDS:
        raise ValueError(f"unknown norm kind {kind!r}; expected one of {NORM_KINDS}")
    s = singular_values(a)
    if s.size == 0:
        return 0.0
    if kind == "trace":
        return float(np.sum(s))
    return float(s[0])


def numerical_rank(a, tol: float = DEFAULT_TOL) -> int:
    """Number of singular values strictly above ``tol`` times the largest."""
    s = singular_values(a)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


@dataclass(frozen=True)
class SchmidtDecomposition:
    """``A = sum_j coefficients[j] * left[:, j] right[:, j]^dagger``."""

    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.coefficients.size)

    def reconstruct(self) -> np.ndarray:
        return (self.left_vectors * self.coefficients) @ self.right_vectors.conj().T


def schmidt_decompose(a, tol: float = DEFAULT_TOL) -> SchmidtDecomposition:
    """SVD of ``a`` keeping singular values strictly above ``tol * s_max``.

    ``tol=0`` keeps every strictly positive singular value.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    m = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ComputationError(str(exc)) from exc
    keep = s > tol * s[0] if s[0] > 0 else np.zeros(s.shape, dtype=bool)
    return SchmidtDecomposition(
        coefficients=s[keep].copy(),
        left_vectors=u[:, keep].copy(),
        right_vectors=vh[keep].conj().T.copy(),
    )


def permute_factors(t, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Permute the tensor factors of a flat tensor.

    ``t`` is read row-major with factor dimensions ``dims``. Output factor ``m``
    is input factor ``perm[m]`` (0-based), so the output is indexed by
    ``(k[perm[0]], ..., k[perm[n-1]])``. Pure data movement.
    """
    t = np.asarray(t)
    dims = tuple(int(d) for d in dims)
    perm = tuple(int(p) for p in perm)
    if t.ndim != 1:
        raise ShapeError("permute_factors expects a flat tensor")
    if sorted(perm) != list(range(len(dims))):
        raise ShapeError(f"{perm} is not a permutation of {len(dims)} factors")
    if int(np.prod(dims)) != t.size:
        raise ShapeError(f"dims {dims} do not match tensor length {t.size}")
    return np.ascontiguousarray(t.reshape(dims).transpose(perm)).reshape(-1)


def inverse_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for m, p in enumerate(perm):
        inv[p] = m
    return tuple(inv)


def rank_one(x, y) -> np.ndarray:
    """The operator ``x (x) ybar``, i.e. ``|x><y|``."""
    return np.outer(as_vector(x), np.conj(as_vector(y)))


# JSON wire format: {"rows", "cols", "data": [[re, im], ...]} row-major.

def _pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in values.reshape(-1)]


def _from_pairs(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("data must be a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def matrix_to_json(a) -> dict:
    m = as_matrix(a)
    return {"rows": m.shape[0], "cols": m.shape[1], "data": _pairs(m)}


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    values = _from_pairs(obj["data"]) if obj["data"] else np.zeros(0, dtype=complex)
    if values.size != rows * cols:
        raise ValueError(f"data has {values.size} entries, expected {rows * cols}")
    return as_matrix(values.reshape(rows, cols))


def vector_to_json(v, dim1: int, dim2: int) -> dict:
    x = as_vector(v)
    if x.size != dim1 * dim2:
        raise ShapeError(f"vector length {x.size} != {dim1}*{dim2}")
    return {"dim1": int(dim1), "dim2": int(dim2), "data": _pairs(x)}


def vector_from_json(obj: dict) -> tuple[np.ndarray, int, int]:
    dim1, dim2 = int(obj["dim1"]), int(obj["dim2"])
    if dim1 < 1 or dim2 < 1:
        raise ValueError("dim1 and dim2 must be positive")
    x = _from_pairs(obj["data"])
    if x.size != dim1 * dim2:
        raise ValueError(f"data has {x.size} entries, expected {dim1 * dim2}")
    return as_vector(x), dim1, dim2
