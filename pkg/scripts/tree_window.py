"""Check the valuation distance formula against BFS on every pair of a tree window."""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from gbs.group import BSGroup
from gbs.tree import BassSerreTree


@dataclass
class WindowConfig:
    k: int = 6
    radius: int = 3
    chunk: int = 512


def run(cfg: WindowConfig) -> dict:
    G = BSGroup(cfg.k)
    rows = []
    for i in range(1, G.n + 1):
        start = time.perf_counter()
        W = BassSerreTree(G, i).window(cfg.radius)
        bad, total = W.compare_all(cfg.chunk)
        rows.append({"tree": i, "vertices": len(W), "pairs": total, "mismatches": bad,
                     "seconds": round(time.perf_counter() - start, 2)})
    return {"config": asdict(cfg), "trees": rows}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(WindowConfig()).items():
        ap.add_argument(f"--{name}", type=type(default), default=default)
    print(json.dumps(run(WindowConfig(**vars(ap.parse_args()))), indent=2))


if __name__ == "__main__":
    main()
