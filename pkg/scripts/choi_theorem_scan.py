"""Compare the Choi-matrix CP test with the Phi (x) I_k harness on random maps.

Prints one line per dimension pair: how many maps were CP, how many verdicts
disagreed with the harness, and the extreme eigenvalues seen.
"""
import argparse
import itertools
from dataclasses import dataclass

import numpy as np

from statemaps.channels import kraus_map
from statemaps.duality import ChoiOperator, SuperOperator, jamiolkowski_inverse
from statemaps.positivity import CERTIFIED_YES, choi_theorem_harness
from statemaps.sampling import ginibre, hermitian, rng_for


@dataclass
class ScanConfig:
    maps: int = 50
    trials: int = 100
    dims: tuple[int, ...] = (2, 3)
    seed: int = 0
    with_ancilla: bool = False


def random_map(rng, d1, d2, cp: bool) -> SuperOperator:
    if cp:
        return SuperOperator(d2, d1, sum(kraus_map(ginibre(rng, d1, d2)).matrix for _ in range(2)))
    return jamiolkowski_inverse(ChoiOperator(d1, d2, hermitian(rng, d1 * d2)))


def main(cfg: ScanConfig) -> None:
    rng = rng_for(cfg.seed)
    for d1, d2 in itertools.product(cfg.dims, repeat=2):
        cp_count = disagree = 0
        worst_yes, weakest_no = 0.0, -np.inf
        for n in range(cfg.maps):
            rep = choi_theorem_harness(
                random_map(rng, d1, d2, n % 2 == 0), trials=cfg.trials, seed=cfg.seed + n,
                with_ancilla=cfg.with_ancilla,
            )
            if rep.verdict.kind == CERTIFIED_YES:
                cp_count += 1
                worst_yes = min(worst_yes, rep.most_negative)
                disagree += rep.violation_found
            else:
                weakest_no = max(weakest_no, rep.most_negative)
                disagree += not rep.violation_found
        print(
            f"d1={d1} d2={d2}: {cp_count}/{cfg.maps} CP, disagreements {disagree}, "
            f"worst CP output {worst_yes:.2e}, weakest violation {weakest_no:.3f}"
        )


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--maps", type=int, default=50)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--with-ancilla", action="store_true")
    a = p.parse_args()
    main(ScanConfig(maps=a.maps, trials=a.trials, seed=a.seed, with_ancilla=a.with_ancilla))
