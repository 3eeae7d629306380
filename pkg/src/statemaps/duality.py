"""Jamiolkowski isomorphisms as index permutations.

Index conventions (standard bases ``x_i`` of H1 with ``d1 = dim_out`` and
``y_a`` of H2 with ``d2 = dim_in``):

* ``SuperOperator.matrix[(i, j), (a, b)]`` is the ``E_ij`` coefficient of
  ``phi(E_ab)``, with composite indices ``i*d1 + j`` and ``a*d2 + b``.
  Equivalently ``vec(phi(rho)) = matrix @ vec(rho)`` with row-major ``vec``.
* The four-index coefficient tensor under the trace pairing is
  ``lam[i, j, a, b] = matrix[(i, j), (b, a)]``, i.e.
  ``phi = sum lam_ijab x_i (x) conj(x_j) (x) y_a (x) conj(y_b)``.
* ``J(phi)`` acts on ``H1 (x) H2*`` with composite index ``(i, b) -> i*d2 + b``:
  ``J[(i, b), (j, a)] = lam[i, j, a, b]``.
* ``Jt(phi)`` acts on ``H1 (x) H2`` with composite index ``(i, a) -> i*d2 + a``:
  ``Jt[(i, a), (j, b)] = lam[i, j, a, b]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .operator_core import (
    ShapeError,
    as_matrix,
    hs_inner,
    matrix_from_json,
    matrix_to_json,
    rank_one,
)
from .sampling import rng_for, unit_vector

# Axis permutations on the reshaped tensors.
_J_AXES = (0, 2, 1, 3)  # (i, j, b', a') -> (i, b', j, a'), an involution
_JT_AXES = (0, 3, 1, 2)  # (i, j, b, a) -> (i, a, j, b)
_JT_INV_AXES = (0, 2, 3, 1)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, order="C")
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class SuperOperator:
    """Linear map ``L(H2) -> L(H1)`` stored as a ``d1^2 x d2^2`` matrix."""

    dim_in: int
    dim_out: int
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape != (self.dim_out**2, self.dim_in**2):
            raise ShapeError(
                f"superoperator matrix must be {(self.dim_out**2, self.dim_in**2)}, got {m.shape}"
            )
        object.__setattr__(self, "matrix", _frozen(m))

    def tensor(self) -> np.ndarray:
        d1, d2 = self.dim_out, self.dim_in
        return self.matrix.reshape(d1, d1, d2, d2)

    def apply(self, rho) -> np.ndarray:
        rho = as_matrix(rho)
        if rho.shape != (self.dim_in, self.dim_in):
            raise ShapeError(f"expected a {self.dim_in}x{self.dim_in} input, got {rho.shape}")
        return (self.matrix @ rho.reshape(-1)).reshape(self.dim_out, self.dim_out)

    def to_json(self) -> dict:
        return {"dim_in": self.dim_in, "dim_out": self.dim_out, "matrix": matrix_to_json(self.matrix)}

    @classmethod
    def from_json(cls, obj: dict) -> "SuperOperator":
        return cls(int(obj["dim_in"]), int(obj["dim_out"]), matrix_from_json(obj["matrix"]))


@dataclass(frozen=True, eq=False)
class ChoiOperator:
    """Operator on ``H1 (x) H2*``, the image of a superoperator under ``J``."""

    dim1: int
    dim2: int
    matrix: np.ndarray

    twisted = False

    def __post_init__(self):
        m = as_matrix(self.matrix)
        n = self.dim1 * self.dim2
        if m.shape != (n, n):
            raise ShapeError(f"Choi matrix must be {(n, n)}, got {m.shape}")
        object.__setattr__(self, "matrix", _frozen(m))

    def to_json(self) -> dict:
        return {
            "dim1": self.dim1,
            "dim2": self.dim2,
            "twisted": self.twisted,
            "matrix": matrix_to_json(self.matrix),
        }


@dataclass(frozen=True, eq=False)
class TwistedChoiOperator(ChoiOperator):
    """Operator on ``H1 (x) H2``, the image of a superoperator under ``Jt``."""

    twisted = True


def choi_from_json(obj: dict) -> ChoiOperator:
    cls = TwistedChoiOperator if obj.get("twisted", False) else ChoiOperator
    return cls(int(obj["dim1"]), int(obj["dim2"]), matrix_from_json(obj["matrix"]))


def lambda_tensor(phi: SuperOperator) -> np.ndarray:
    """Coefficients ``lam[i, j, a, b]`` of ``phi`` in ``H1 (x) H1* (x) H2 (x) H2*``."""
    return phi.tensor().transpose(0, 1, 3, 2)


def from_lambda_tensor(lam) -> SuperOperator:
    lam = np.asarray(lam, dtype=complex)
    if lam.ndim != 4 or lam.shape[0] != lam.shape[1] or lam.shape[2] != lam.shape[3]:
        raise ShapeError(f"expected a (d1, d1, d2, d2) tensor, got {lam.shape}")
    d1, d2 = lam.shape[0], lam.shape[2]
    return SuperOperator(d2, d1, lam.transpose(0, 1, 3, 2).reshape(d1 * d1, d2 * d2))


def jamiolkowski(phi: SuperOperator) -> ChoiOperator:
    d1, d2 = phi.dim_out, phi.dim_in
    out = phi.tensor().transpose(_J_AXES).reshape(d1 * d2, d1 * d2)
    return ChoiOperator(d1, d2, out)


def jamiolkowski_inverse(c: ChoiOperator) -> SuperOperator:
    d1, d2 = c.dim1, c.dim2
    out = c.matrix.reshape(d1, d2, d1, d2).transpose(_J_AXES).reshape(d1 * d1, d2 * d2)
    return SuperOperator(d2, d1, out)


def twisted_jamiolkowski(phi: SuperOperator) -> TwistedChoiOperator:
    d1, d2 = phi.dim_out, phi.dim_in
    out = phi.tensor().transpose(_JT_AXES).reshape(d1 * d2, d1 * d2)
    return TwistedChoiOperator(d1, d2, out)


def twisted_jamiolkowski_inverse(c: ChoiOperator) -> SuperOperator:
    d1, d2 = c.dim1, c.dim2
    out = c.matrix.reshape(d1, d2, d1, d2).transpose(_JT_INV_AXES).reshape(d1 * d1, d2 * d2)
    return SuperOperator(d2, d1, out)


def superoperator_hs_inner(phi: SuperOperator, psi: SuperOperator) -> complex:
    return hs_inner(phi.matrix, psi.matrix)


def verify_characterizing_identity(
    phi: SuperOperator,
    samples: int = 100,
    seed: int = 0,
    *,
    j_map: Callable[[SuperOperator], ChoiOperator] = jamiolkowski,
    jt_map: Callable[[SuperOperator], ChoiOperator] = twisted_jamiolkowski,
) -> float:
    """Largest violation of the defining scalar identities of ``J`` and ``Jt``.

    For random unit ``x, x'`` in H1 and ``y, y'`` in H2 this compares
    ``<x (x) conj(y), J(phi)(x' (x) conj(y'))>`` with
    ``<x (x) conj(x'), phi(y (x) conj(y'))>`` and
    ``<x (x) y, Jt(phi)(x' (x) y')>`` with ``<x (x) conj(x'), phi(y' (x) conj(y))>``.
    ``j_map``/``jt_map`` exist so a corrupted reshuffle can be checked as a
    negative control.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    d1, d2 = phi.dim_out, phi.dim_in
    c = j_map(phi).matrix
    ct = jt_map(phi).matrix
    rng = rng_for(seed)
    worst = 0.0
    for _ in range(samples):
        x, xp = unit_vector(rng, d1), unit_vector(rng, d1)
        y, yp = unit_vector(rng, d2), unit_vector(rng, d2)
        lhs = np.vdot(np.kron(x, y.conj()), c @ np.kron(xp, yp.conj()))
        rhs = hs_inner(rank_one(x, xp), phi.apply(rank_one(y, yp)))
        worst = max(worst, abs(lhs - rhs))
        lhs = np.vdot(np.kron(x, y), ct @ np.kron(xp, yp))
        rhs = hs_inner(rank_one(x, xp), phi.apply(rank_one(yp, y)))
        worst = max(worst, abs(lhs - rhs))
    return float(worst)


def gl_action(t, a, a_prime, b, b_prime) -> np.ndarray:
    """Act on ``x1 (x) conj(x2) (x) y1 (x) conj(y2)`` by ``A, bar(A'), B, bar(B')`` factorwise.

    ``t`` is a ``(d1, d1, d2, d2)`` coefficient tensor (see :func:`lambda_tensor`).
    """
    t = np.asarray(t, dtype=complex)
    if t.ndim != 4:
        raise ShapeError(f"expected a 4-index tensor, got shape {t.shape}")
    d1, d1b, d2, d2b = t.shape
    for name, m, d in (("A", a, d1), ("A'", a_prime, d1b), ("B", b, d2), ("B'", b_prime, d2b)):
        if np.shape(m) != (d, d):
            raise ShapeError(f"{name} must be {d}x{d}, got {np.shape(m)}")
    return np.einsum(
        "ik,jl,am,bn,klmn->ijab",
        np.asarray(a),
        np.conj(a_prime),
        np.asarray(b),
        np.conj(b_prime),
        t,
    )


def check_intertwining(a, a_prime, b, b_prime, phi: SuperOperator) -> float:
    """Max entrywise gap between ``J(g . phi)`` and the permuted action on ``J(phi)``.

    After the reshuffle the factors of ``J(phi)`` carry ``A, bar(B'), B, bar(A')``,
    which as a matrix on ``H1 (x) H2*`` reads
    ``(A (x) conj(B')) J(phi) (A' (x) conj(B))^dagger``.
    """
    moved = from_lambda_tensor(gl_action(lambda_tensor(phi), a, a_prime, b, b_prime))
    lhs = jamiolkowski(moved).matrix
    left = np.kron(np.asarray(a), np.conj(b_prime))
    right = np.kron(np.asarray(a_prime), np.conj(b))
    rhs = left @ jamiolkowski(phi).matrix @ right.conj().T
    return float(np.max(np.abs(lhs - rhs)))


def lambda_asymmetry(phi: SuperOperator) -> float:
    """``max |lam_ijab - conj(lam_jiba)|``; zero exactly when ``J(phi)`` is Hermitian."""
    lam = lambda_tensor(phi)
    return float(np.max(np.abs(lam - lam.transpose(1, 0, 3, 2).conj())))
