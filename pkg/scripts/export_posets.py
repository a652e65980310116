"""Write the Hasse diagram of canonical structures for several k as JSON and DOT."""

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from gbs.structures import export_poset


@dataclass
class ExportConfig:
    ks: list[int] = field(default_factory=lambda: [6, 12, 30])
    out: Path = Path("posets")


def run(cfg: ExportConfig) -> list[Path]:
    cfg.out.mkdir(parents=True, exist_ok=True)
    written = []
    for k in cfg.ks:
        for fmt in ("json", "dot"):
            path = cfg.out / f"poset_{k}.{fmt}"
            text = export_poset(k, fmt)
            path.write_text(text if text.endswith("\n") else text + "\n")
            written.append(path)
    return written


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ks", type=int, nargs="+", default=[6, 12, 30])
    ap.add_argument("--out", type=Path, default=Path("posets"))
    args = ap.parse_args()
    for path in run(ExportConfig(args.ks, args.out)):
        print(path)


if __name__ == "__main__":
    main()
