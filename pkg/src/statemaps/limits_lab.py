"""Truncation sweeps for the three norm counterexamples of the Jamiolkowski map.

* ``jam_discontinuity``: ``A_n = I_n / sqrt(n)`` has ``||A_n||_2 = 1`` while
  ``||A_n||_inf -> 0``; ``||J(K_{A_n})||_inf = 1`` but ``||K_{A_n}||_inf <= 1/n``.
* ``kraus_sqrt_n``: ``A_i = e (x) conj(f_i)``; ``||sum_i p_{A_i}||_inf = 1`` while the
  Kraus sum sends the projector ``P_n`` to ``n e (x) conj(e)``, a gain of ``sqrt(n)``.
* ``nuclear_blowup``: ``T = sum_l a_l x_l (x) conj(x_l) (x) y (x) conj(y)`` has
  ``||T||_1 = ||a||_2`` but ``||J(T)||_1 = ||a||_1``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channels import kraus_map
from .duality import SuperOperator, from_lambda_tensor, jamiolkowski
from .operator_core import norm
from .sampling import density_matrix, hermitian, rng_for

DEFAULT_CAP = 64
NUCLEAR_CAP = DEFAULT_CAP**2
CLOSED_FORM_RTOL = 1e-9
FAMILIES = ("jam_discontinuity", "kraus_sqrt_n", "nuclear_blowup")


class CapExceededError(ValueError):
    pass


@dataclass
class TruncationSeries:
    family: str
    columns: tuple[str, ...]
    rows: list[dict] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("family", "N") + self.columns)
        for r in self.rows:
            w.writerow([self.family, r["N"]] + [f"{r[c]:.17g}" for c in self.columns])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())


def _check_ns(ns: Sequence[int], cap: int) -> list[int]:
    ns = sorted({int(n) for n in ns})
    if not ns:
        raise ValueError("empty N list")
    if ns[0] < 1:
        raise ValueError("every N must be >= 1")
    if max(ns) > cap:
        raise CapExceededError(f"N={max(ns)} exceeds the dimension cap {cap}")
    return ns


def _agree(name: str, computed: float, closed: float) -> None:
    if abs(computed - closed) > CLOSED_FORM_RTOL * max(1.0, abs(closed)):
        raise ArithmeticError(f"{name}: computed {computed!r} != closed form {closed!r}")


def run_jam_discontinuity(
    n_values: Sequence[int], cap: int = DEFAULT_CAP, samples: int = 8, seed: int = 0
) -> TruncationSeries:
    """Operator-norm discontinuity of ``J`` along ``A_n = n^{-1/2} sum_i e_i (x) conj(f_i)``.

    ``||K_{A_n}||_inf`` is estimated from below by the largest sampled
    ``||K(rho)||_2 / ||rho||_2``; the ``ratio`` column divides ``||J(K)||_inf`` by it.
    """
    series = TruncationSeries(
        "jam_discontinuity",
        ("a_hs", "a_op", "choi_op", "kraus_op_bound", "kraus_op_sampled", "ratio"),
    )
    for n in _check_ns(n_values, cap):
        a = np.eye(n) / math.sqrt(n)
        k = kraus_map(a)
        choi = jamiolkowski(k).matrix
        rng = rng_for(seed, n)
        sampled = 0.0
        for s in range(samples):
            rho = hermitian(rng, n) if s % 2 else density_matrix(rng, n)
            sampled = max(sampled, norm(k.apply(rho), "hs") / norm(rho, "hs"))
        row = {
            "N": n,
            "a_hs": norm(a, "hs"),
            "a_op": norm(a, "operator"),
            "choi_op": norm(choi, "operator"),
            "kraus_op_bound": norm(a, "operator") ** 2,
            "kraus_op_sampled": sampled,
        }
        row["ratio"] = row["choi_op"] / sampled
        _agree("||A||_2", row["a_hs"], 1.0)
        _agree("||A||_inf", row["a_op"], n**-0.5)
        _agree("||J(K_A)||_inf", row["choi_op"], 1.0)
        if sampled > row["kraus_op_bound"] * (1 + CLOSED_FORM_RTOL):
            raise ArithmeticError(f"sampled Kraus gain {sampled} above the bound {row['kraus_op_bound']}")
        series.rows.append(row)
    return series


def run_kraus_sqrt_n(
    n_values: Sequence[int], cap: int = DEFAULT_CAP, out_dim: int = 1
) -> TruncationSeries:
    """``A_i = e (x) conj(f_i)``: unit-norm Choi sum, yet a ``sqrt(n)`` gain on ``P_n``.

    ``e`` is the first basis vector of an ``out_dim``-dimensional H1; the
    ``f_i`` span the ``n``-dimensional H2.
    """
    series = TruncationSeries(
        "kraus_sqrt_n", ("choi_sum_op", "projector_hs", "image_hs", "witness_ratio", "sqrt_n")
    )
    for n in _check_ns(n_values, cap):
        total = np.zeros((out_dim**2, n**2), dtype=complex)
        for i in range(n):
            a_i = np.zeros((out_dim, n))
            a_i[0, i] = 1.0
            total += kraus_map(a_i).matrix
        phi = SuperOperator(n, out_dim, total)
        p_n = np.eye(n)
        image = phi.apply(p_n)
        row = {
            "N": n,
            "choi_sum_op": norm(jamiolkowski(phi).matrix, "operator"),
            "projector_hs": norm(p_n, "hs"),
            "image_hs": norm(image, "hs"),
            "sqrt_n": math.sqrt(n),
        }
        row["witness_ratio"] = row["image_hs"] / row["projector_hs"]
        _agree("||sum p_A||_inf", row["choi_sum_op"], 1.0)
        _agree("witness ratio", row["witness_ratio"], math.sqrt(n))
        series.rows.append(row)
    return series


def harmonic(n: int) -> np.ndarray:
    return 1.0 / np.arange(1, n + 1)


def run_nuclear_blowup(
    n_values: Sequence[int],
    coefficients: str | Sequence[float] = "harmonic",
    cap: int = NUCLEAR_CAP,
    dim2: int = 2,
) -> TruncationSeries:
    """Nuclear norms of ``T_N`` and ``J(T_N)`` for the first ``N`` coefficients.

    ``coefficients`` is ``"harmonic"`` (``a_l = 1/l``) or an explicit sequence at
    least ``max(N)`` long. ``y`` is the first basis vector of a ``dim2``-dimensional H2.
    """
    ns = _check_ns(n_values, cap)
    if isinstance(coefficients, str):
        if coefficients != "harmonic":
            raise ValueError(f"unknown coefficient family {coefficients!r}")
        coeffs = harmonic(ns[-1])
    else:
        coeffs = np.asarray(coefficients, dtype=complex)
        if coeffs.ndim != 1 or coeffs.size < ns[-1] or not np.all(np.isfinite(coeffs)):
            raise ValueError(f"need {ns[-1]} finite coefficients, got {coeffs.size}")
    series = TruncationSeries(
        "nuclear_blowup", ("t_trace", "t_trace_closed", "jt_trace", "jt_trace_closed", "ratio")
    )
    for n in ns:
        a = coeffs[:n]
        lam = np.zeros((n, n, dim2, dim2), dtype=complex)
        lam[np.arange(n), np.arange(n), 0, 0] = a
        t = from_lambda_tensor(lam)
        row = {
            "N": n,
            "t_trace": norm(t.matrix, "trace"),
            "t_trace_closed": math.sqrt(math.fsum(abs(c) ** 2 for c in a)),
            "jt_trace": norm(jamiolkowski(t).matrix, "trace"),
            "jt_trace_closed": math.fsum(abs(c) for c in a),
        }
        row["ratio"] = row["jt_trace"] / row["t_trace"]
        _agree("||T||_1", row["t_trace"], row["t_trace_closed"])
        _agree("||J(T)||_1", row["jt_trace"], row["jt_trace_closed"])
        series.rows.append(row)
    return series


def run_family(family: str, n_values: Sequence[int], **kwargs) -> TruncationSeries:
    runners = {
        "jam_discontinuity": run_jam_discontinuity,
        "kraus_sqrt_n": run_kraus_sqrt_n,
        "nuclear_blowup": run_nuclear_blowup,
    }
    try:
        runner = runners[family.replace("-", "_")]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}") from None
    return runner(n_values, **kwargs)
