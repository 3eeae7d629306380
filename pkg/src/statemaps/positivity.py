"""Hermiticity, positivity and complete-positivity certification through ``J``."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import identity_map, kraus_map, tensor_maps
from .duality import SuperOperator, jamiolkowski
from .operator_core import DEFAULT_TOL, ShapeError, as_matrix, norm, vector_to_json, matrix_to_json
from .sampling import density_matrix, rng_for, unit_vector

CERTIFIED_YES = "certified_yes"
CERTIFIED_NO = "certified_no"
HEURISTIC_YES = "heuristic_yes"

BLOCK_TOL = 1e-8
DEFAULT_RESTARTS = 32


@dataclass(frozen=True, eq=False)
class DensityState:
    """Hermitian, PSD, unit-trace matrix."""

    matrix: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        m = as_matrix(self.matrix, square=True)
        scale = norm(m, "operator")
        if norm(m - m.conj().T, "operator") > self.tol * max(scale, 1.0):
            raise ValueError("density matrix is not Hermitian")
        m = (m + m.conj().T) / 2
        if np.linalg.eigvalsh(m)[0] < -self.tol * scale:
            raise ValueError("density matrix is not positive semidefinite")
        if abs(np.trace(m) - 1) > self.tol:
            raise ValueError(f"density matrix has trace {np.trace(m).real}, expected 1")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class PositivityVerdict:
    kind: str
    value: float
    witness: np.ndarray | None = None
    dims: tuple[int, int] | None = None

    @property
    def yes(self) -> bool:
        return self.kind != CERTIFIED_NO

    def to_json(self) -> dict:
        out = {"kind": self.kind, "value": float(self.value), "witness": None}
        if self.witness is not None:
            w = np.asarray(self.witness)
            if w.ndim == 1:
                d1, d2 = self.dims if self.dims else (w.size, 1)
                out["witness"] = vector_to_json(w, d1, d2)
            else:
                out["witness"] = matrix_to_json(w)
        return out


def _hermitian_gap(m: np.ndarray) -> tuple[float, float]:
    return norm(m - m.conj().T, "operator"), norm(m, "operator")


def _is_hermitian(m: np.ndarray, tol: float) -> bool:
    gap, scale = _hermitian_gap(m)
    return gap <= tol * scale


def preserves_hermiticity(phi: SuperOperator, tol: float = DEFAULT_TOL) -> PositivityVerdict:
    """Decide whether ``phi`` maps Hermitian operators to Hermitian ones (``J(phi)`` Hermitian).

    A negative answer carries the Hermitian basis element ``rho`` whose image
    is furthest from Hermitian; ``value`` is ``||phi(rho) - phi(rho)^dagger||_inf``.
    """
    c = jamiolkowski(phi).matrix
    gap, scale = _hermitian_gap(c)
    if gap <= tol * scale:
        return PositivityVerdict(CERTIFIED_YES, gap)
    d = phi.dim_in
    best, witness = -1.0, None
    for a in range(d):
        for b in range(a, d):
            candidates = []
            e = np.zeros((d, d), dtype=complex)
            e[a, b] = 1
            candidates.append(e + e.conj().T)
            if a != b:
                candidates.append(1j * e - 1j * e.conj().T)
            for rho in candidates:
                out = phi.apply(rho)
                dev = norm(out - out.conj().T, "operator")
                if dev > best:
                    best, witness = dev, rho
    return PositivityVerdict(CERTIFIED_NO, best, witness)


def _product_value(c4: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    # <x (x) conj(y), C (x (x) conj(y))> with c4[i, b, j, a] = C[(i, b), (j, a)]
    return float(np.einsum("i,b,ibja,j,a->", x.conj(), y, c4, x, y.conj()).real)


def _min_eigvec(m: np.ndarray) -> np.ndarray:
    _, v = np.linalg.eigh((m + m.conj().T) / 2)
    return v[:, 0]


def _block_descent(c4, rng, max_iter=200, rtol=1e-15):
    d1, d2 = c4.shape[0], c4.shape[1]
    x = unit_vector(rng, d1)
    y = unit_vector(rng, d2)
    q = _product_value(c4, x, y)
    for _ in range(max_iter):
        # fix y: q = x^dagger M x
        m = np.einsum("b,ibja,a->ij", y, c4, y.conj())
        x = _min_eigvec(m)
        # fix x: q = w^dagger N w with w = conj(y)
        n = np.einsum("i,ibja,j->ba", x.conj(), c4, x)
        y = _min_eigvec(n).conj()
        q_new = _product_value(c4, x, y)
        if q - q_new <= rtol * max(1.0, abs(q)):
            q = min(q, q_new)
            break
        q = q_new
    return q, x, y


def preserves_positivity(
    phi: SuperOperator,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
) -> PositivityVerdict:
    """Search for a product vector on which ``J(phi)`` is negative.

    Alternating minimal-eigenvector descent over unit ``x`` and ``y`` from
    ``restarts`` random starts. A negative value below ``-1e-8 ||J||_inf``
    is a certificate (witness ``x (x) conj(y)``); otherwise the answer is only
    heuristic, since block positivity has no efficient exact test.
    """
    if not preserves_hermiticity(phi, tol).yes:
        raise ValueError("positivity requires a hermiticity-preserving map")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    c = jamiolkowski(phi).matrix
    d1, d2 = phi.dim_out, phi.dim_in
    c4 = c.reshape(d1, d2, d1, d2)
    best = None
    for r in range(restarts):
        q, x, y = _block_descent(c4, rng_for(seed, r))
        if best is None or q < best[0]:
            best = (q, x, y)
    q, x, y = best
    scale = norm(c, "operator")
    if q < -BLOCK_TOL * scale:
        return PositivityVerdict(CERTIFIED_NO, q, np.kron(x, y.conj()), (d1, d2))
    return PositivityVerdict(HEURISTIC_YES, q)


def is_completely_positive(phi: SuperOperator, tol: float = DEFAULT_TOL) -> PositivityVerdict:
    """Exact test: ``J(phi)`` Hermitian and PSD up to ``tol * ||J||_inf``.

    For a Hermitian ``J`` a negative answer carries the minimal eigenpair
    (``value`` is the eigenvalue). For a non-Hermitian ``J`` the witness is the
    top eigenvector ``v`` of the anti-Hermitian part and ``value`` is
    ``Im <v, J v>``, which is nonzero.
    """
    c = jamiolkowski(phi).matrix
    dims = (phi.dim_out, phi.dim_in)
    gap, scale = _hermitian_gap(c)
    if gap > tol * scale:
        w, v = np.linalg.eigh((c - c.conj().T) / 2j)
        k = int(np.argmax(np.abs(w)))
        vec = v[:, k]
        return PositivityVerdict(CERTIFIED_NO, float(np.vdot(vec, c @ vec).imag), vec, dims)
    w, v = np.linalg.eigh((c + c.conj().T) / 2)
    if w.size and w[0] < -tol * scale:
        return PositivityVerdict(CERTIFIED_NO, float(w[0]), v[:, 0], dims)
    return PositivityVerdict(CERTIFIED_YES, float(w[0]) if w.size else 0.0)


# Choi-theorem harness

def ancilla_weights(k: int) -> np.ndarray:
    """Diagonal entries ``2^{-j/2}``, j = 1..k, of the trivial-kernel ancilla operator."""
    return 2.0 ** (-np.arange(1, k + 1) / 2)


def _min_output_eigenvalue(ext: SuperOperator, rho: np.ndarray) -> float:
    out = ext.apply(rho)
    return float(np.linalg.eigvalsh((out + out.conj().T) / 2)[0])


def witness_input(z: np.ndarray, k: int, weights: np.ndarray | None = None):
    """Entangled input built from a vector ``Z`` of ``H1 (x) H2*`` (a ``d1 x d2`` matrix).

    Writes ``Z = sum_p x_p (x) conj(w_p y_p)`` via the SVD with balanced factors and
    returns ``(X, Y)`` with ``X = sum_p x_p (x) u_p`` and ``Y = sum_p y_p (x) u_p``.
    ``weights`` are the ancilla diagonal ``w_p`` (all ones for ``phi (x) I``).
    """
    u, s, vh = np.linalg.svd(z)
    r = int(np.count_nonzero(s > 0))
    if r > k:
        raise ShapeError(f"witness needs {r} ancilla levels, only {k} available")
    w = np.ones(k) if weights is None else np.asarray(weights, dtype=float)
    d1, d2 = z.shape
    x = np.zeros((d1, k), dtype=complex)
    y = np.zeros((d2, k), dtype=complex)
    for p in range(r):
        x[:, p] = np.sqrt(s[p]) * u[:, p]
        y[:, p] = np.sqrt(s[p]) * vh[p].conj() / w[p]
    return x.reshape(-1), y.reshape(-1)


@dataclass(frozen=True, eq=False)
class HarnessReport:
    verdict: PositivityVerdict
    k: int
    trials: int
    most_negative: float
    trial_most_negative: float
    witness_min_eigenvalue: float | None = None
    identity_gap: float | None = None
    ancilla: dict = field(default_factory=dict)

    @property
    def violation_found(self) -> bool:
        return self.most_negative <= -BLOCK_TOL

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.to_json(),
            "k": self.k,
            "trials": self.trials,
            "most_negative": self.most_negative,
            "trial_most_negative": self.trial_most_negative,
            "witness_min_eigenvalue": self.witness_min_eigenvalue,
            "identity_gap": self.identity_gap,
            "ancilla": self.ancilla,
        }


def _witness_run(phi, ext, verdict, k, weights):
    c = jamiolkowski(phi).matrix
    z = verdict.witness.reshape(phi.dim_out, phi.dim_in)
    x, y = witness_input(z, k, weights)
    rho = np.outer(y, y.conj())
    # <X (x) conj(X), ext(Y (x) conj(Y))> must equal <Z, J(phi) Z>
    lhs = np.vdot(x, ext.apply(rho) @ x)
    gap = abs(lhs - np.vdot(verdict.witness, c @ verdict.witness))
    return _min_output_eigenvalue(ext, rho / np.trace(rho).real), float(gap)


def choi_theorem_harness(
    phi: SuperOperator,
    k: int | None = None,
    trials: int = 100,
    seed: int = 0,
    *,
    with_ancilla: bool = False,
    tol: float = DEFAULT_TOL,
) -> HarnessReport:
    """Cross-check the ``J(phi) >= 0`` test against positivity of ``phi (x) I_k``.

    Random trace-one PSD inputs on ``H2 (x) C^k`` (alternately pure and full rank)
    are pushed through ``phi (x) I_k`` and the smallest output eigenvalue
    recorded. If ``phi`` is not completely positive, the Choi eigen-witness
    is turned into an input through :func:`witness_input`. ``k`` defaults to
    ``max(d1, d2)``. With ``with_ancilla`` the same is repeated for
    ``phi (x) K_A`` with ``A = diag(2^{-j/2})``.
    """
    d1, d2 = phi.dim_out, phi.dim_in
    k = max(d1, d2) if k is None else k
    if k < 1:
        raise ValueError("k must be >= 1")
    verdict = is_completely_positive(phi, tol)
    rng = rng_for(seed)
    ext = tensor_maps(phi, identity_map(k))
    ext_a = tensor_maps(phi, kraus_map(np.diag(ancilla_weights(k)))) if with_ancilla else None

    trial_min = np.inf
    trial_min_a = np.inf
    for t in range(trials):
        rho = density_matrix(rng, d2 * k, rank=1 if t % 2 == 0 else None)
        trial_min = min(trial_min, _min_output_eigenvalue(ext, rho))
        if ext_a is not None:
            trial_min_a = min(trial_min_a, _min_output_eigenvalue(ext_a, rho))

    witness_min = gap = None
    ancilla = {}
    hermitian_no = verdict.kind == CERTIFIED_NO and _is_hermitian(jamiolkowski(phi).matrix, tol)
    if hermitian_no and k >= min(d1, d2):
        witness_min, gap = _witness_run(phi, ext, verdict, k, None)
    if ext_a is not None:
        ancilla = {"weights": ancilla_weights(k).tolist(), "trial_most_negative": float(trial_min_a)}
        if hermitian_no and k >= min(d1, d2):
            wm, g = _witness_run(phi, ext_a, verdict, k, ancilla_weights(k))
            ancilla.update(witness_min_eigenvalue=wm, identity_gap=g)

    most_negative = float(trial_min if witness_min is None else min(trial_min, witness_min))
    return HarnessReport(
        verdict=verdict,
        k=k,
        trials=trials,
        most_negative=most_negative,
        trial_most_negative=float(trial_min),
        witness_min_eigenvalue=witness_min,
        identity_gap=gap,
        ancilla=ancilla,
    )
