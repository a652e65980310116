"""The Bass-Serre tree T_i on which G_k acts with t_i loxodromic.

Vertices are pairs (x, h) with x in Z[1/k] and h an integer height, where
(x, h) ~ (y, h) when v_p(x - y) >= m h for p**m the i-th prime power of k.
Each (x, h) is joined to (x, h + 1); the fixed end is h -> -infinity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from .arith import format_zk, valuation
from .group import BSGroup, GroupElement


class OutOfWindowError(ValueError):
    pass


def _canonical(x: Fraction, h: int, p: int, m: int) -> Fraction:
    v = valuation(x, p)
    if v >= m * h:
        return Fraction(0)
    u = x / Fraction(p) ** v  # p-adic unit
    mod = p ** (m * h - v)
    c = u.numerator * pow(u.denominator, -1, mod) % mod
    return Fraction(p) ** v * c


@dataclass(frozen=True)
class TreeVertex:
    """A vertex class; ``x`` is always the canonical representative."""

    x: Fraction
    h: int
    i: int
    p: int
    m: int

    def __post_init__(self):
        object.__setattr__(self, "x", _canonical(Fraction(self.x), self.h, self.p, self.m))

    def to_json(self):
        return {"x": format_zk(self.x), "h": self.h, "tree": self.i}


class BassSerreTree:
    def __init__(self, G: BSGroup, i: int):
        if not 1 <= i <= G.n:
            raise ValueError(f"tree index must be in 1..{G.n}, got {i}")
        self.G, self.i = G, i
        self.p, self.m = G.fact.primes[i - 1]

    def vertex(self, x, h: int) -> TreeVertex:
        return TreeVertex(Fraction(x), int(h), self.i, self.p, self.m)

    def parse_vertex(self, data) -> TreeVertex:
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("tree", self.i) != self.i:
            raise ValueError("vertex belongs to a different tree")
        x = Fraction(str(data["x"]))
        from .arith import as_zk

        return self.vertex(as_zk(x, self.G.fact), data["h"])

    @property
    def v0(self) -> TreeVertex:
        return self.vertex(0, 0)

    @property
    def v1(self) -> TreeVertex:
        return self.vertex(0, 1)

    def act(self, g: GroupElement, v: TreeVertex) -> TreeVertex:
        return self.vertex(self.G.lam(g.z) * v.x + g.r, v.h + g.z[self.i - 1])

    def meet_height(self, u: TreeVertex, v: TreeVertex) -> int:
        l = min(u.h, v.h)
        d = valuation(u.x - v.x, self.p)
        if d != float("inf"):
            l = min(l, int(d) // self.m)
        return l

    def distance(self, u: TreeVertex, v: TreeVertex) -> int:
        l = self.meet_height(u, v)
        return (u.h - l) + (v.h - l)

    def translation_length(self, g: GroupElement) -> int:
        return abs(g.z[self.i - 1])

    def element_type(self, g: GroupElement) -> str:
        return "loxodromic" if g.z[self.i - 1] else "elliptic"

    def orbit_slope(self, g: GroupElement, n: int = 64) -> Fraction:
        """d(v0, g^n v0) / n, which tends to the translation length as n grows."""
        return Fraction(self.distance(self.v0, self.act(self.G.power(g, n), self.v0)), n)

    def orbit_diameter(self, g: GroupElement, n: int = 20) -> int:
        pts = [self.v0]
        for _ in range(n):
            pts.append(self.act(g, pts[-1]))
        return max(self.distance(a, b) for a in pts for b in pts)

    def busemann(self, g: GroupElement) -> int:
        """Busemann value toward the fixed end, based at (0, 0); equals z_i(g)."""
        return g.z[self.i - 1]

    def busemann_estimate(self, g: GroupElement, depth: int) -> int:
        """d(g v0, (0, -depth)) - d(v0, (0, -depth))."""
        far = self.vertex(0, -depth)
        return self.distance(self.act(g, self.v0), far) - self.distance(self.v0, far)

    def busemann_depth(self, g: GroupElement) -> int:
        """A depth past which :meth:`busemann_estimate` is exact."""
        v = valuation(g.r, self.p) if g.r else 0
        return 2 * (abs(g.z[self.i - 1]) + abs(int(v)) + 4)

    def stabilizes(self, g: GroupElement, v: TreeVertex) -> bool:
        return self.act(g, v) == v

    def window(self, radius: int = 3) -> "TreeWindow":
        return TreeWindow(self, radius)


class TreeWindow:
    """The finite subtree of heights [-H, H] with v_p(x) >= -m H, built explicitly.

    A vertex at height h is stored as an integer c in [0, p**(m (h + H))) with
    x = c / p**(m H); the only vertex at height -H is the root c = 0.
    """

    def __init__(self, tree: BassSerreTree, radius: int = 3):
        self.tree, self.H = tree, radius
        self.q = tree.p**tree.m
        self.scale = self.q**radius
        heights, codes, index = [], [], {}
        for h in range(-radius, radius + 1):
            for c in range(self.q ** (h + radius)):
                index[(h, c)] = len(heights)
                heights.append(h)
                codes.append(c)
        self.heights = np.array(heights, dtype=np.int64)
        self.codes = np.array(codes, dtype=np.int64)
        self.index = index
        rows, cols = [], []
        for (h, c), j in index.items():
            if h > -radius:
                rows.append(j)
                cols.append(index[(h - 1, c % self.q ** (h - 1 + radius))])
        n = len(heights)
        self.adjacency = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n)).tocsr()

    def __len__(self):
        return len(self.heights)

    def locate(self, v: TreeVertex) -> int:
        if not -self.H <= v.h <= self.H:
            raise OutOfWindowError(f"height {v.h} outside [-{self.H}, {self.H}]")
        y = v.x * self.scale
        if y.denominator != 1:
            raise OutOfWindowError(f"{v.x} has too large a denominator for the window")
        c = y.numerator % self.q ** (v.h + self.H) if v.h + self.H else 0
        return self.index[(v.h, c)]

    def vertex_at(self, j: int) -> TreeVertex:
        return self.tree.vertex(Fraction(int(self.codes[j]), self.scale), int(self.heights[j]))

    def bfs_distances(self, sources) -> np.ndarray:
        return shortest_path(self.adjacency, directed=False, unweighted=True, indices=sources)

    def bfs_distance(self, u: TreeVertex, v: TreeVertex) -> int:
        d = self.bfs_distances([self.locate(u)])[0, self.locate(v)]
        return int(d)

    def closed_form_distances(self, sources) -> np.ndarray:
        """The valuation formula evaluated for rows ``sources`` against every vertex."""
        src = np.asarray(sources)
        hu = self.heights[src][:, None]
        hv = self.heights[None, :]
        diff = np.abs(self.codes[src][:, None] - self.codes[None, :])
        val = np.zeros(diff.shape, dtype=np.int64)
        rest = diff.copy()
        cap = self.tree.m * 2 * self.H + self.tree.m
        live = rest != 0
        for _ in range(cap):
            live &= rest % self.tree.p == 0
            if not live.any():
                break
            val += live
            rest = np.where(live, rest // self.tree.p, rest)
        val = np.where(diff == 0, cap, val)
        meet = np.minimum(np.minimum(hu, hv), np.floor_divide(val - self.tree.m * self.H, self.tree.m))
        return (hu - meet) + (hv - meet)

    def compare_all(self, chunk: int = 512) -> tuple[int, int]:
        """(mismatches, pairs) between BFS and the closed form over every pair."""
        bad = total = 0
        n = len(self)
        for start in range(0, n, chunk):
            rows = np.arange(start, min(n, start + chunk))
            bfs = self.bfs_distances(rows)
            closed = self.closed_form_distances(rows)
            bad += int(np.count_nonzero(bfs != closed))
            total += bfs.size
        return bad, total
