"""Concrete maps: ``M_A^B``, Kraus sums and the Choi map."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .duality import ChoiOperator, SuperOperator
from .operator_core import (
    DEFAULT_TOL,
    ComputationError,
    ShapeError,
    as_matrix,
    matrix_from_json,
    matrix_to_json,
    norm,
)
from .sampling import rng_for, unit_operator_norm


def make_map(a, b) -> SuperOperator:
    """Superoperator of ``rho -> A rho B^dagger``; entries ``A[i, a] * conj(B[j, b])``."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"A and B must share a shape, got {a.shape} and {b.shape}")
    d1, d2 = a.shape
    return SuperOperator(d2, d1, np.kron(a, b.conj()))


def kraus_map(a) -> SuperOperator:
    return make_map(a, a)


def apply(phi: SuperOperator, rho) -> np.ndarray:
    return phi.apply(rho)


def identity_map(d: int) -> SuperOperator:
    return SuperOperator(d, d, np.eye(d * d))


def transpose_map(d: int) -> SuperOperator:
    # matrix[(i, j), (a, b)] = delta_ib delta_ja
    t = np.zeros((d, d, d, d))
    for i in range(d):
        for j in range(d):
            t[i, j, j, i] = 1.0
    return SuperOperator(d, d, t.reshape(d * d, d * d))


def zero_map(dim_in: int, dim_out: int) -> SuperOperator:
    return SuperOperator(dim_in, dim_out, np.zeros((dim_out**2, dim_in**2)))


def tensor_maps(phi: SuperOperator, psi: SuperOperator) -> SuperOperator:
    """``phi (x) psi`` acting on ``L(H2 (x) K2) -> L(H1 (x) K1)``."""
    d1, d2 = phi.dim_out, phi.dim_in
    e1, e2 = psi.dim_out, psi.dim_in
    t = np.einsum("ijab,pqrs->ipjqarbs", phi.tensor(), psi.tensor())
    return SuperOperator(d2 * e2, d1 * e1, t.reshape((d1 * e1) ** 2, (d2 * e2) ** 2))


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """``rho -> sum_k weight_k A_k rho B_k^dagger``."""

    dim_in: int
    dim_out: int
    pairs: tuple = field(default=())

    def __post_init__(self):
        pairs = []
        for a, b, w in self.pairs:
            a, b = as_matrix(a), as_matrix(b)
            if a.shape != (self.dim_out, self.dim_in) or b.shape != a.shape:
                raise ShapeError(
                    f"Kraus pair shapes {a.shape}, {b.shape} != {(self.dim_out, self.dim_in)}"
                )
            pairs.append((a, b, complex(w)))
        object.__setattr__(self, "pairs", tuple(pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def apply(self, rho) -> np.ndarray:
        rho = as_matrix(rho)
        if rho.shape != (self.dim_in, self.dim_in):
            raise ShapeError(f"expected a {self.dim_in}x{self.dim_in} input, got {rho.shape}")
        out = np.zeros((self.dim_out, self.dim_out), dtype=complex)
        for a, b, w in self.pairs:
            out += w * (a @ rho @ b.conj().T)
        return out

    def to_superoperator(self) -> SuperOperator:
        m = np.zeros((self.dim_out**2, self.dim_in**2), dtype=complex)
        for a, b, w in self.pairs:
            m += w * np.kron(a, b.conj())
        return SuperOperator(self.dim_in, self.dim_out, m)

    def to_json(self) -> dict:
        return {
            "dim_in": self.dim_in,
            "dim_out": self.dim_out,
            "pairs": [
                {"A": matrix_to_json(a), "B": matrix_to_json(b), "weight": [w.real, w.imag]}
                for a, b, w in self.pairs
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "KrausChannel":
        pairs = [
            (matrix_from_json(p["A"]), matrix_from_json(p["B"]), complex(*p["weight"]))
            for p in obj["pairs"]
        ]
        return cls(int(obj["dim_in"]), int(obj["dim_out"]), tuple(pairs))


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # Largest-modulus entry made real positive (first one on ties).
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k]) if v[k] != 0 else v


def choi_map(t: ChoiOperator, tol: float = DEFAULT_TOL) -> KrausChannel:
    """Factor ``T = sum_k mu_k |A_k><B_k|`` and return ``rho -> sum_k mu_k A_k rho B_k^dagger``.

    Hermitian ``T`` (within ``tol``) is eigendecomposed, so ``A_k = B_k`` and the
    weights are the real eigenvalues; anything else goes through the SVD.
    Terms with ``|mu_k| <= tol * max|mu|`` are dropped. Each unit vector is
    reshaped to a ``d1 x d2`` matrix with the ``(i, b) -> i*d2 + b`` contract.
    """
    d1, d2 = t.dim1, t.dim2
    m = t.matrix
    scale = norm(m, "operator")
    if scale == 0:
        return KrausChannel(d2, d1, ())
    pairs = []
    try:
        if norm(m - m.conj().T, "operator") <= tol * scale:
            mu, vecs = np.linalg.eigh((m + m.conj().T) / 2)
            for k in np.argsort(-np.abs(mu), kind="stable"):
                if abs(mu[k]) <= tol * scale:
                    continue
                a = _fix_phase(vecs[:, k]).reshape(d1, d2)
                pairs.append((a, a, complex(mu[k])))
        else:
            u, s, vh = np.linalg.svd(m)
            for k in range(s.size):
                if s[k] <= tol * scale:
                    break
                # Rotate both factors by the same phase so u s v^dagger is unchanged.
                k_max = int(np.argmax(np.abs(u[:, k])))
                ph = abs(u[k_max, k]) / u[k_max, k]
                a = (u[:, k] * ph).reshape(d1, d2)
                b = (vh[k].conj() * ph).reshape(d1, d2)
                pairs.append((a, b, complex(s[k])))
    except np.linalg.LinAlgError as exc:
        raise ComputationError(str(exc)) from exc
    return KrausChannel(d2, d1, tuple(pairs))


def channel_norm_bound_check(a, b, trials: int = 200, seed: int = 0) -> tuple[float, float]:
    """Sample ``||A rho B^dagger||_1`` over ``||rho||_inf = 1``.

    Returns ``(largest observed, ||A||_2 ||B||_2)``; the first never exceeds the second.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"A and B must share a shape, got {a.shape} and {b.shape}")
    rng = rng_for(seed)
    worst = 0.0
    for _ in range(trials):
        rho = unit_operator_norm(rng, a.shape[1])
        worst = max(worst, norm(a @ rho @ b.conj().T, "trace"))
    return worst, norm(a, "hs") * norm(b, "hs")
