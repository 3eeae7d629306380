"""Schmidt rank of vectors and states, and a convex-roof Schmidt measure search."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .duality import ChoiOperator, TwistedChoiOperator, twisted_jamiolkowski_inverse
from .operator_core import DEFAULT_TOL, ShapeError, as_vector, numerical_rank, vector_from_json, vector_to_json
from .positivity import DensityState
from .sampling import isometry, rng_for

PURE_TOL = 1e-10
WEIGHT_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class BipartiteVector:
    """Vector of ``H1 (x) H2``, composite index ``(i, a) -> i*d2 + a``."""

    dim1: int
    dim2: int
    amplitudes: np.ndarray

    def __post_init__(self):
        x = as_vector(self.amplitudes)
        if x.size != self.dim1 * self.dim2:
            raise ShapeError(f"{x.size} amplitudes for dims ({self.dim1}, {self.dim2})")
        x = x.copy()
        x.flags.writeable = False
        object.__setattr__(self, "amplitudes", x)

    @classmethod
    def product(cls, x, y) -> "BipartiteVector":
        x, y = as_vector(x), as_vector(y)
        return cls(x.size, y.size, np.kron(x, y))

    def coefficient_matrix(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dim1, self.dim2)

    def normalized(self) -> "BipartiteVector":
        n = np.linalg.norm(self.amplitudes)
        if n == 0:
            raise ValueError("zero vector has no normalization")
        return BipartiteVector(self.dim1, self.dim2, self.amplitudes / n)

    def projector(self) -> TwistedChoiOperator:
        """The pure state ``|phi><phi| / <phi|phi>`` on ``H1 (x) H2``."""
        v = self.normalized().amplitudes
        return TwistedChoiOperator(self.dim1, self.dim2, np.outer(v, v.conj()))

    def to_json(self) -> dict:
        return vector_to_json(self.amplitudes, self.dim1, self.dim2)

    @classmethod
    def from_json(cls, obj: dict) -> "BipartiteVector":
        x, d1, d2 = vector_from_json(obj)
        return cls(d1, d2, x)


def schmidt_rank_vector(phi: BipartiteVector, tol: float = DEFAULT_TOL) -> int:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if not np.any(phi.amplitudes):
        raise ValueError("the zero vector has no Schmidt rank")
    return numerical_rank(phi.coefficient_matrix(), tol)


def schmidt_rank_state(rho: ChoiOperator, tol: float = DEFAULT_TOL) -> int:
    """Operator rank of the superoperator ``Jt^{-1}(rho)``.

    For a pure state of a vector with Schmidt rank ``m`` this is ``m**2``.
    """
    return numerical_rank(twisted_jamiolkowski_inverse(rho).matrix, tol)


@dataclass(frozen=True, eq=False)
class MeasureResult:
    """Best decomposition ``rho = sum_j weights[j] |vectors[:, j]><vectors[:, j]|`` found."""

    value: float
    weights: np.ndarray
    vectors: np.ndarray
    ranks: tuple[int, ...]
    dims: tuple[int, int]
    tol: float
    restarts_used: int

    @property
    def shifted(self) -> float:
        """Roof value minus one, which vanishes on separable states."""
        return self.value - 1.0

    def to_json(self) -> dict:
        d1, d2 = self.dims
        return {
            "value": self.value,
            "shifted": self.shifted,
            "tol": self.tol,
            "restarts_used": self.restarts_used,
            "decomposition": [
                {"weight": float(w), "schmidt_rank": r, "vector": vector_to_json(self.vectors[:, j], d1, d2)}
                for j, (w, r) in enumerate(zip(self.weights, self.ranks))
            ],
        }


def _ranks_and_weights(vecs: np.ndarray, dims, tol):
    d1, d2 = dims
    q = np.sum(np.abs(vecs) ** 2, axis=0)
    ranks = [
        numerical_rank(vecs[:, j].reshape(d1, d2), tol) if q[j] > WEIGHT_FLOOR else 0
        for j in range(vecs.shape[1])
    ]
    return q, ranks


def _roof_value(vecs: np.ndarray, dims, tol) -> float:
    q, ranks = _ranks_and_weights(vecs, dims, tol)
    keep = q > WEIGHT_FLOOR
    return float(np.sum(q[keep] * np.asarray(ranks)[keep]) / np.sum(q[keep]))


def _minor_polynomial(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Coefficients ``(c0, c1, c2)`` of every 2x2 minor of ``f + t g``, one row per minor."""
    r1, r2 = np.triu_indices(f.shape[0], 1)
    c1, c2 = np.triu_indices(f.shape[1], 1)
    r1, c1 = np.meshgrid(r1, c1, indexing="ij")
    r2, c2 = np.meshgrid(r2, c2, indexing="ij")
    f11, f12, f21, f22 = f[r1, c1], f[r1, c2], f[r2, c1], f[r2, c2]
    g11, g12, g21, g22 = g[r1, c1], g[r1, c2], g[r2, c1], g[r2, c2]
    return np.stack([
        f11 * f22 - f12 * f21,
        f11 * g22 + g11 * f22 - f12 * g21 - g12 * f21,
        g11 * g22 - g12 * g21,
    ], axis=-1).reshape(-1, 3)


def _product_directions(f: np.ndarray, g: np.ndarray) -> list[complex]:
    """Candidate ``t`` with ``f + t g`` of rank one.

    A common root of all minors is a root of the dominant one, so its (at most
    two) roots are the only candidates.
    """
    poly = _minor_polynomial(f, g)
    if poly.size == 0:
        return []
    top = poly[int(np.argmax(np.linalg.norm(poly, axis=1)))]
    if not np.any(top):
        return []
    return [complex(t) for t in np.roots(top[::-1])]


def _pair_cost(a, b, dims, tol) -> float:
    q, ranks = _ranks_and_weights(np.stack([a, b], axis=1), dims, tol)
    return float(q[0] * ranks[0] + q[1] * ranks[1])


def _refine(vecs: np.ndarray, dims, tol, sweeps: int = 4):
    """Greedy pairwise unitary mixing of decomposition vectors.

    For each pair the mixing is chosen so that one of the two new vectors is a
    product vector, when such a combination exists. The represented state is
    unchanged. Yields the decomposition after every accepted move.
    """
    m = vecs.shape[1]
    for _ in range(sweeps):
        improved = False
        for j in range(m):
            for k in range(j + 1, m):
                vj, vk = vecs[:, j], vecs[:, k]
                current = _pair_cost(vj, vk, dims, tol)
                best = None
                for t in _product_directions(vj.reshape(dims), vk.reshape(dims)):
                    n = np.sqrt(1 + abs(t) ** 2)
                    a = (vj + t * vk) / n
                    b = (vk - np.conj(t) * vj) / n
                    cost = _pair_cost(a, b, dims, tol)
                    if cost < current * (1 - 1e-12) and (best is None or cost < best[0]):
                        best = (cost, a, b)
                if best is not None:
                    vecs = vecs.copy()
                    vecs[:, j], vecs[:, k] = best[1], best[2]
                    improved = True
                    yield vecs
        if not improved:
            return


def schmidt_measure(
    rho: DensityState,
    dim1: int,
    dim2: int,
    tol: float = DEFAULT_TOL,
    restarts: int = 8,
    mix_dim: int | None = None,
    seed: int = 0,
) -> MeasureResult:
    """Upper bound on the convex-roof Schmidt measure of ``rho``.

    Writes ``rho = sum_k p_k |psi_k><psi_k|`` and searches decompositions
    ``sqrt(q_j) phi_j = sum_k V_jk sqrt(p_k) psi_k`` for isometries ``V``
    (``mix_dim x rank``). Restart 0 starts from the spectral decomposition,
    later ones from random isometries; each is refined by pairwise rotations.
    The objective is ``sum_j q_j S(phi_j)`` with ``S`` the ``tol``-thresholded
    Schmidt rank, so the result lies in ``[1, min(d1, d2)]``.
    """
    if not isinstance(rho, DensityState):
        rho = DensityState(rho)
    if rho.dim != dim1 * dim2:
        raise ShapeError(f"state of dimension {rho.dim} does not match ({dim1}, {dim2})")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    dims = (dim1, dim2)
    p, psi = np.linalg.eigh(rho.matrix)
    p, psi = p[::-1], psi[:, ::-1]
    keep = p > tol * p[0]
    p, psi = p[keep], psi[:, keep]
    rank = p.size
    if mix_dim is None:
        mix_dim = min(2 * rank, rank + 4)
    if mix_dim < rank:
        raise ValueError(f"mix_dim={mix_dim} is below the rank {rank} of the state")
    w = psi * np.sqrt(p)

    def result(vecs, used):
        q, ranks = _ranks_and_weights(vecs, dims, tol)
        sel = q > WEIGHT_FLOOR
        return MeasureResult(
            value=_roof_value(vecs, dims, tol),
            weights=q[sel] / np.sum(q[sel]),
            vectors=vecs[:, sel] / np.sqrt(q[sel]),
            ranks=tuple(r for r, s in zip(ranks, sel) if s),
            dims=dims,
            tol=tol,
            restarts_used=used,
        )

    if rank == 1 or (p.size > 1 and p[1] < PURE_TOL):
        return result(w[:, :1], 0)

    best_vecs, best_val = None, np.inf
    for r in range(restarts):
        if r == 0:
            v = np.eye(mix_dim, rank)
        else:
            v = isometry(rng_for(seed, r), mix_dim, rank)
        vecs = w @ v.T
        candidates = [vecs]
        if _roof_value(vecs, dims, tol) > 1.0:
            candidates.extend(_refine(vecs, dims, tol))
        for c in candidates:
            val = _roof_value(c, dims, tol)
            if val < best_val:
                best_vecs, best_val = c, val
        if best_val == 1.0:
            return result(best_vecs, r + 1)
    return result(best_vecs, restarts)
