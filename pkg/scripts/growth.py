"""Word length of k^j in (Q_1, rho_1^+), and of random Q_- sums, against j and m."""

import argparse
import json
import random
from dataclasses import asdict, dataclass
from fractions import Fraction

from gbs.confining import Bound, get_subset
from gbs.group import BSGroup, GroupElement, rho_minus, rho_plus
from gbs.words import Truncation, WordContext, k0_bound, tau_word, word_length_bfs


@dataclass
class GrowthConfig:
    k: int = 6
    max_j: int = 5
    max_m: int = 20
    trials: int = 25
    seed: int = 0


def run(cfg: GrowthConfig) -> dict:
    G = BSGroup(cfg.k)
    q1 = WordContext(G, get_subset(G, "Q_1"), rho_plus(G, 1))
    tr = Truncation(1, 3, 1, 2 * cfg.max_j + 2)
    powers = []
    for j in range(1, cfg.max_j + 1):
        g = GroupElement(G.gamma((-j, *[0] * (G.n - 1)), Fraction(1)), (0,) * G.n)
        powers.append({"j": j, "r": str(g.r), "length": word_length_bfs(q1, g, tr, certify=False).length})
    qm = WordContext(G, get_subset(G, "Q_-"), rho_minus(G))
    pool = [x for x in qm.Q.enumerate(Bound(1000, 4)) if x]
    rng = random.Random(cfg.seed)
    sums = []
    for m in range(1, cfg.max_m + 1):
        lengths = []
        for _ in range(cfg.trials):
            h = sum((rng.choice(pool) for _ in range(m)), Fraction(0))
            lengths.append(len(tau_word(qm, GroupElement(h, (0,) * G.n))))
        sums.append({"m": m, "max_length": max(lengths)})
    return {"config": asdict(cfg), "powers": powers, "sums": sums, "k0": k0_bound(qm)}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(GrowthConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = GrowthConfig(**vars(ap.parse_args()))
    print(json.dumps(run(cfg), indent=2))


if __name__ == "__main__":
    main()
