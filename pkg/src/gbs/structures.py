"""The poset of hyperbolic structures on G_k and the BNS invariant.

Only the canonical structures are materialised: the elliptic one, the n + 1
quasi-parabolic ones (one per tree T_i plus the plane) and the lineal classes
they dominate. Any other lineal class can be built from a character on demand.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .arith import KFactorization
from .group import BSGroup, Character, equivalent_characters, primitive_class, rho_minus, rho_plus


class Order(str, Enum):
    LESS = "Less"
    GREATER = "Greater"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class HypStructure:
    kind: str  # "elliptic" | "lineal" | "qp"
    character: Character | None = None  # lineal class or Busemann class of a qp structure
    model: str | None = None  # "tree:<i>" | "plane" for qp structures

    def __post_init__(self):
        if self.kind not in ("elliptic", "lineal", "qp"):
            raise ValueError(f"unknown structure kind {self.kind!r}")
        if self.kind != "elliptic" and self.character is None:
            raise ValueError(f"{self.kind} structure needs a character class")
        if self.character is not None:
            object.__setattr__(self, "character", primitive_class(self.character))

    @property
    def busemann_class(self) -> Character | None:
        return self.character if self.kind == "qp" else None

    @property
    def label(self) -> str:
        if self.kind == "elliptic":
            return "elliptic"
        if self.kind == "lineal":
            return f"lineal:{self.character}"
        return f"qp:{self.model}"


def elliptic() -> HypStructure:
    return HypStructure("elliptic")


def lineal(rho: Character) -> HypStructure:
    return HypStructure("lineal", rho)


def quasi_parabolic(G: BSGroup, model: str) -> HypStructure:
    if model == "plane":
        return HypStructure("qp", rho_minus(G), "plane")
    if model.startswith("tree:"):
        return HypStructure("qp", rho_plus(G, int(model[5:])), model)
    raise ValueError(f"unknown model {model!r}")


def _group(fact) -> BSGroup:
    return fact if isinstance(fact, BSGroup) else BSGroup(fact)


def all_canonical_structures(fact: int | KFactorization | BSGroup) -> list[HypStructure]:
    G = _group(fact)
    models = [f"tree:{i}" for i in range(1, G.n + 1)] + ["plane"]
    qps = [quasi_parabolic(G, m) for m in models]
    return [elliptic(), *(lineal(s.character) for s in qps), *qps]


def compare(s1: HypStructure, s2: HypStructure) -> Order:
    if s1.kind == "elliptic" or s2.kind == "elliptic":
        if s1.kind == s2.kind:
            return Order.EQUAL
        return Order.LESS if s1.kind == "elliptic" else Order.GREATER
    same = equivalent_characters(s1.character, s2.character)
    if s1.kind == s2.kind == "lineal":
        return Order.EQUAL if same else Order.INCOMPARABLE
    if s1.kind == s2.kind == "qp":
        return Order.EQUAL if s1.model == s2.model else Order.INCOMPARABLE
    if not same:
        return Order.INCOMPARABLE
    return Order.LESS if s1.kind == "lineal" else Order.GREATER


def bns_complement(fact) -> list[Character]:
    G = _group(fact)
    return [primitive_class(rho_plus(G, i)) for i in range(1, G.n + 1)]


def in_bns(chi: Character, fact) -> bool:
    """Whether [chi] lies in the BNS invariant, i.e. avoids every [rho_i^+]."""
    return not any(equivalent_characters(chi, c) for c in bns_complement(fact))


def hasse_edges(structures: list[HypStructure]) -> list[tuple[HypStructure, HypStructure]]:
    """Covering pairs (lo, hi) among ``structures``."""
    less = {(a, b) for a in structures for b in structures if compare(a, b) is Order.LESS}
    return [(a, b) for a, b in sorted(less, key=lambda e: (e[0].label, e[1].label))
            if not any((a, c) in less and (c, b) in less for c in structures)]


LAYER = "lineal:*"


def export_poset(fact, fmt: str = "json") -> str:
    """A Hasse diagram of the canonical structures, with one schematic node
    standing for the rest of the (uncountable) lineal layer."""
    G = _group(fact)
    structs = all_canonical_structures(G)
    edges = [(a.label, b.label) for a, b in hasse_edges(structs)]
    edges.append(("elliptic", LAYER))
    edges.sort()
    nodes = [{"id": s.label, "kind": s.kind,
              "class": None if s.character is None else s.character.to_json()} for s in structs]
    nodes.append({"id": LAYER, "kind": "lineal-layer", "class": None})
    if fmt == "json":
        return json.dumps({"k": G.k, "nodes": nodes,
                           "edges": [{"lo": lo, "hi": hi} for lo, hi in edges]}, indent=2)
    if fmt == "dot":
        lines = [f'digraph "H(G_{G.k})" {{', "  rankdir=BT;"]
        shapes = {"elliptic": "box", "lineal": "ellipse", "qp": "doubleoctagon",
                  "lineal-layer": "plaintext"}
        for node in nodes:
            lines.append(f'  "{node["id"]}" [shape={shapes[node["kind"]]}];')
        for lo, hi in edges:
            lines.append(f'  "{lo}" -> "{hi}";')
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
