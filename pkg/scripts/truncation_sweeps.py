"""Write CSV series for the three truncation families into an output directory."""
import argparse
from dataclasses import dataclass, field
from pathlib import Path

from statemaps.limits_lab import run_jam_discontinuity, run_kraus_sqrt_n, run_nuclear_blowup


@dataclass
class SweepConfig:
    out_dir: Path = Path("results")
    powers: list[int] = field(default_factory=lambda: [1, 2, 4, 8, 16, 32, 64])
    nuclear_n: list[int] = field(default_factory=lambda: [1, 10, 100, 1000])
    seed: int = 0


def main(cfg: SweepConfig) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    series = [
        run_jam_discontinuity(cfg.powers, seed=cfg.seed),
        run_kraus_sqrt_n(cfg.powers),
        run_nuclear_blowup(cfg.nuclear_n),
    ]
    for s in series:
        path = cfg.out_dir / f"{s.family}.csv"
        s.write_csv(path)
        last = s.rows[-1]
        print(f"{s.family:18s} N={last['N']:<5d} -> {path}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", type=Path, default=SweepConfig.out_dir)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    main(SweepConfig(out_dir=args.out_dir, seed=args.seed))
