"""Error of the truncated plane Busemann estimate as the far point recedes."""

import argparse
import json
import random
from dataclasses import asdict, dataclass
from fractions import Fraction

from gbs.group import BSGroup, GroupElement
from gbs.plane import busemann_estimate, busemann_exact


@dataclass
class ConvergenceConfig:
    k: int = 6
    samples: int = 50
    t_max: int = 40
    t_step: int = 5
    dps: int = 64
    seed: int = 0


def run(cfg: ConvergenceConfig) -> dict:
    G = BSGroup(cfg.k)
    rng = random.Random(cfg.seed)
    gs = [GroupElement(Fraction(rng.randint(-10, 10)), tuple(rng.randint(-3, 3) for _ in range(G.n)))
          for _ in range(cfg.samples)]
    exact = [busemann_exact(G, g).evalf(cfg.dps) for g in gs]
    rows = []
    for T in range(cfg.t_step, cfg.t_max + 1, cfg.t_step):
        err = max(abs(busemann_estimate(G, g, T, cfg.dps) - e) for g, e in zip(gs, exact))
        rows.append({"T": T, "max_error": float(err)})
    return {"config": asdict(cfg), "errors": rows}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(ConvergenceConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    print(json.dumps(run(ConvergenceConfig(**vars(ap.parse_args()))), indent=2))


if __name__ == "__main__":
    main()
