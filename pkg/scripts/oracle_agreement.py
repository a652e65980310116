"""Compare the breadth-first and tau-form word lengths on a certified ball."""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from gbs.confining import get_subset
from gbs.group import BSGroup, rho_minus, rho_plus
from gbs.words import Truncation, WordContext, certified_ball, word_length_tau


@dataclass
class AgreementConfig:
    k: int = 6
    subset: str = "Q_-"
    radius: int = 4
    q_exp: int = 1
    q_num: int = 5
    z_box: int = 1
    lattice_bound: int = 4


def run(cfg: AgreementConfig) -> dict:
    G = BSGroup(cfg.k)
    rho = rho_minus(G) if cfg.subset == "Q_-" else rho_plus(G, int(cfg.subset[2:]))
    ctx = WordContext(G, get_subset(G, cfg.subset), rho)
    tr = Truncation(cfg.q_exp, cfg.q_num, cfg.z_box, cfg.radius + 1)
    start = time.perf_counter()
    ball = certified_ball(ctx, tr, cfg.radius)
    by_length: dict[int, int] = {}
    bad = []
    for g, d in ball:
        by_length[d] = by_length.get(d, 0) + 1
        t = word_length_tau(ctx, g, cfg.lattice_bound).length
        if t != d:
            bad.append({"r": str(g.r), "z": list(g.z), "bfs": d, "tau": t})
    return {"config": asdict(cfg), "certified": len(ball),
            "by_length": {str(k): v for k, v in sorted(by_length.items())},
            "disagreements": bad, "seconds": round(time.perf_counter() - start, 2)}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(AgreementConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    print(json.dumps(run(AgreementConfig(**vars(ap.parse_args()))), indent=2))


if __name__ == "__main__":
    main()
