"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 shape mismatch, 3 negative
certification, 4 dimension cap exceeded. Results go to stdout as JSON (or
CSV for ``lab``); diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import channels, duality, limits_lab, positivity, schmidt
from .operator_core import DEFAULT_TOL, ShapeError

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_SHAPE = 2
EXIT_NEGATIVE = 3
EXIT_CAP = 4

DIRECTIONS = ("j", "jtilde", "inverse-j", "inverse-jtilde")
CHECK_KINDS = ("hermiticity", "positivity", "cp", "choi-harness")


@dataclass
class CommandConfig:
    command: str
    input: Path | None = None
    output: Path | None = None
    direction: str = "j"
    kind: str = "cp"
    tol: float = DEFAULT_TOL
    seed: int = 0
    restarts: int | None = None
    n_values: list[int] = field(default_factory=list)
    family: str | None = None
    csv: Path | None = None
    measure: bool = False
    mix_dim: int | None = None
    k: int | None = None
    trials: int = 100
    coefficients: str = "harmonic"

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("--tol must be positive")


def _read_json(path: Path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _emit(obj, path: Path | None) -> None:
    text = json.dumps(obj) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _convert(cfg: CommandConfig) -> int:
    obj = _read_json(cfg.input)
    if cfg.direction in ("j", "jtilde"):
        phi = duality.SuperOperator.from_json(obj)
        out = duality.jamiolkowski(phi) if cfg.direction == "j" else duality.twisted_jamiolkowski(phi)
    else:
        c = duality.choi_from_json(obj)
        want_twisted = cfg.direction == "inverse-jtilde"
        if c.twisted != want_twisted:
            raise ValueError(f"direction {cfg.direction} needs a Choi file with twisted={want_twisted}")
        inv = duality.twisted_jamiolkowski_inverse if want_twisted else duality.jamiolkowski_inverse
        out = inv(c)
    _emit(out.to_json(), cfg.output)
    return EXIT_OK


def _check(cfg: CommandConfig) -> int:
    phi = duality.SuperOperator.from_json(_read_json(cfg.input))
    restarts = positivity.DEFAULT_RESTARTS if cfg.restarts is None else cfg.restarts
    if cfg.kind == "hermiticity":
        verdict = positivity.preserves_hermiticity(phi, cfg.tol)
        payload = verdict.to_json()
    elif cfg.kind == "positivity":
        verdict = positivity.preserves_hermiticity(phi, cfg.tol)
        if verdict.yes:
            verdict = positivity.preserves_positivity(phi, restarts, cfg.seed, cfg.tol)
        else:
            print("map does not preserve hermiticity, hence not positivity", file=sys.stderr)
        payload = verdict.to_json()
    elif cfg.kind == "cp":
        verdict = positivity.is_completely_positive(phi, cfg.tol)
        payload = verdict.to_json()
    elif cfg.kind == "choi-harness":
        report = positivity.choi_theorem_harness(phi, cfg.k, cfg.trials, cfg.seed, tol=cfg.tol)
        verdict = report.verdict
        payload = report.to_json()
    else:
        raise ValueError(f"unknown check kind {cfg.kind!r}")
    _emit(payload, cfg.output)
    return EXIT_OK if verdict.yes else EXIT_NEGATIVE


def _kraus(cfg: CommandConfig) -> int:
    c = duality.choi_from_json(_read_json(cfg.input))
    if c.twisted:
        raise ValueError("the Choi map takes an untwisted Choi operator")
    _emit(channels.choi_map(c, cfg.tol).to_json(), cfg.output)
    return EXIT_OK


def _schmidt(cfg: CommandConfig) -> int:
    obj = _read_json(cfg.input)
    if "matrix" not in obj:
        vec = schmidt.BipartiteVector.from_json(obj)
        payload = {"input": "vector", "tol": cfg.tol, "schmidt_rank": schmidt.schmidt_rank_vector(vec, cfg.tol)}
        _emit(payload, cfg.output)
        return EXIT_OK
    state = duality.choi_from_json(obj)
    if not state.twisted:
        raise ValueError("a state on H1 (x) H2 must be given as a twisted Choi file")
    rank = schmidt.schmidt_rank_state(state, cfg.tol)
    payload = {"input": "state", "tol": cfg.tol, "schmidt_rank": rank}
    if cfg.measure:
        rho = positivity.DensityState(state.matrix)
        res = schmidt.schmidt_measure(
            rho, state.dim1, state.dim2, cfg.tol,
            restarts=8 if cfg.restarts is None else cfg.restarts,
            mix_dim=cfg.mix_dim, seed=cfg.seed,
        )
        payload["measure"] = res.to_json()
    _emit(payload, cfg.output)
    return EXIT_OK


def _lab(cfg: CommandConfig) -> int:
    family = cfg.family.replace("-", "_")
    kwargs = {}
    if family == "jam_discontinuity":
        kwargs["seed"] = cfg.seed
    if family == "nuclear_blowup" and cfg.coefficients != "harmonic":
        kwargs["coefficients"] = [float(x) for x in cfg.coefficients.split(",")]
    series = limits_lab.run_family(family, cfg.n_values, **kwargs)
    if cfg.csv is None:
        sys.stdout.write(series.to_csv())
    else:
        series.write_csv(cfg.csv)
    return EXIT_OK


COMMANDS = {"convert": _convert, "check": _check, "kraus": _kraus, "schmidt": _schmidt, "lab": _lab}


def run(cfg: CommandConfig) -> int:
    try:
        return COMMANDS[cfg.command](cfg)
    except limits_lab.CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ShapeError as exc:
        print(f"shape error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


def _n_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="statemaps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, needs_input=True):
        if needs_input:
            p.add_argument("--in", dest="input", type=Path, required=True)
        p.add_argument("--out", dest="output", type=Path)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("convert", help="superoperator <-> Choi operator")
    common(p)
    p.add_argument("--direction", choices=DIRECTIONS, default="j")

    p = sub.add_parser("check", help="hermiticity / positivity / complete positivity")
    common(p)
    p.add_argument("--kind", choices=CHECK_KINDS, default="cp")
    p.add_argument("--restarts", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("kraus", help="Choi map: Choi operator -> Kraus channel")
    common(p)

    p = sub.add_parser("schmidt", help="Schmidt rank of a vector or state, optional measure")
    common(p)
    p.add_argument("--measure", action="store_true")
    p.add_argument("--restarts", type=int)
    p.add_argument("--mix-dim", dest="mix_dim", type=int)

    p = sub.add_parser("lab", help="truncation sweeps of the norm counterexamples")
    common(p, needs_input=False)
    p.add_argument("family", choices=[f.replace("_", "-") for f in limits_lab.FAMILIES])
    p.add_argument("--n", dest="n_values", type=_n_list, required=True)
    p.add_argument("--csv", type=Path)
    p.add_argument("--coefficients", default="harmonic")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = CommandConfig(**{k: v for k, v in vars(args).items() if v is not None or k == "output"})
    except ValueError as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
