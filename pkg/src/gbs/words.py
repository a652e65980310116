"""Words over the infinite generating set Q u Z_rho.

Two independent word-length oracles live here: :func:`word_length_tau`
minimises over words of the shape (rho < 0 letters)(Q letters)(rho >= 0 letters),
and :func:`word_length_bfs` runs breadth-first search in a truncated Cayley graph.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

from .arith import format_zk, iter_box, vec_add, vec_neg
from .confining import Bound, BoundExhausted, ConfiningSubset, verify_condition_c
from .group import BSGroup, Character, GroupElement, Vec, in_Zrho, zrho_geodesic, zrho_length


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class QLetter:
    x: Fraction

    def to_json(self):
        return {"q": format_zk(self.x)}


@dataclass(frozen=True)
class ZLetter:
    z: Vec

    def to_json(self):
        return {"z": list(self.z)}


Letter = Union[QLetter, ZLetter]
Word = list


@dataclass
class WordContext:
    """The ambient data (G, Q, rho) that words are checked and evaluated against."""

    G: BSGroup
    Q: ConfiningSubset
    rho: Character

    def q(self, x) -> QLetter:
        x = Fraction(x)
        if not self.Q.member(x):
            raise WordError(f"{x} is not in {self.Q.name}")
        return QLetter(x)

    def z(self, v: Sequence[int]) -> ZLetter:
        v = tuple(v)
        if len(v) != self.G.n or not in_Zrho(self.rho, v):
            raise WordError(f"{v} is not in Z_rho")
        return ZLetter(v)

    def check(self, word: Sequence[Letter]) -> None:
        for letter in word:
            if isinstance(letter, QLetter):
                self.q(letter.x)
            else:
                self.z(letter.z)

    def word_from_json(self, data) -> list[Letter]:
        if isinstance(data, str):
            data = json.loads(data)
        out = []
        for item in data:
            if "q" in item:
                out.append(self.q(Fraction(str(item["q"]))))
            elif "z" in item:
                out.append(self.z(item["z"]))
            else:
                raise WordError(f"bad letter {item!r}")
        return out


def word_to_json(word: Sequence[Letter]) -> list:
    return [letter.to_json() for letter in word]


def eval_word(ctx: WordContext, word: Sequence[Letter]) -> GroupElement:
    G = ctx.G
    r, z = Fraction(0), (0,) * G.n
    for letter in word:
        if isinstance(letter, QLetter):
            r += G.lam(z) * letter.x
        else:
            z = vec_add(z, letter.z)
    return GroupElement(r, z)


def commute(ctx: WordContext, z: ZLetter, q: QLetter, direction: str) -> QLetter:
    """Rewrite z q = q' z ("right") or q z = z q'' ("left")."""
    s = ctx.rho.sign(z.z)
    if direction == "right":
        if s < 0:
            raise WordError("moving a letter right past Q needs rho(z) >= 0")
        out = ctx.G.gamma(z.z, q.x)
    elif direction == "left":
        if s > 0:
            raise WordError("moving a letter left past Q needs rho(z) <= 0")
        out = ctx.G.gamma(vec_neg(z.z), q.x)
    else:
        raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")
    if not ctx.Q.member(out):
        raise WordError(f"commuting left {out} outside {ctx.Q.name}")
    return QLetter(out)


# -- normal form ------------------------------------------------------------------------


@dataclass
class NormalForm:
    tau1: list[ZLetter]
    tau2: list[QLetter]
    tau3: list[ZLetter]

    @property
    def letters(self) -> list[Letter]:
        return [*self.tau1, *self.tau2, *self.tau3]

    def __len__(self):
        return len(self.tau1) + len(self.tau2) + len(self.tau3)

    def to_json(self):
        return {
            "tau1": word_to_json(self.tau1),
            "tau2": word_to_json(self.tau2),
            "tau3": word_to_json(self.tau3),
        }


def _blocks(word: Sequence[Letter]) -> list[list]:
    """Alternating runs, each ["Z", vec] or ["Q", [x, ...]]."""
    out: list[list] = []
    for letter in word:
        if isinstance(letter, ZLetter):
            if out and out[-1][0] == "Z":
                out[-1][1] = vec_add(out[-1][1], letter.z)
            else:
                out.append(["Z", letter.z])
        else:
            if out and out[-1][0] == "Q":
                out[-1][1].append(letter.x)
            else:
                out.append(["Q", [letter.x]])
    return out


def normal_form(ctx: WordContext, word: Sequence[Letter]) -> NormalForm:
    """Rewrite ``word`` as tau1 tau2 tau3 without changing its value or growing it.

    Each maximal run of Z letters is replaced by a Z_rho geodesic for its sum;
    runs with rho >= 0 then move right across the next run of Q letters and runs
    with rho < 0 move left, twisting the Q letters they pass. Every move merges
    two runs, so the loop ends with at most one run of each kind on each side.
    """
    G, rho, zero = ctx.G, ctx.rho, (0,) * ctx.G.n
    blocks = [b for b in _blocks(word)]
    while True:
        blocks = [b for b in blocks if not (b[0] == "Z" and b[1] == zero)]
        merged: list[list] = []
        for b in blocks:
            if merged and merged[-1][0] == b[0]:
                if b[0] == "Z":
                    merged[-1][1] = vec_add(merged[-1][1], b[1])
                else:
                    merged[-1][1] = merged[-1][1] + b[1]
            else:
                merged.append([b[0], b[1] if b[0] == "Z" else list(b[1])])
        blocks = merged
        moved = False
        for idx, b in enumerate(blocks):
            if b[0] != "Z":
                continue
            s = rho.sign(b[1])
            if s >= 0 and idx + 1 < len(blocks):
                qs = blocks[idx + 1][1]
                blocks[idx + 1][1] = [_twist(ctx, b[1], x) for x in qs]
                blocks[idx], blocks[idx + 1] = blocks[idx + 1], blocks[idx]
                moved = True
                break
            if s < 0 and idx > 0:
                qs = blocks[idx - 1][1]
                blocks[idx - 1][1] = [_twist(ctx, vec_neg(b[1]), x) for x in qs]
                blocks[idx], blocks[idx - 1] = blocks[idx - 1], blocks[idx]
                moved = True
                break
        if not moved:
            break
    tau1: list[ZLetter] = []
    tau2: list[QLetter] = []
    tau3: list[ZLetter] = []
    seen_q = False
    for b in blocks:
        if b[0] == "Q":
            tau2 = [QLetter(x) for x in b[1]]
            seen_q = True
        else:
            letters = [ZLetter(v) for v in zrho_geodesic(rho, b[1])]
            if rho.sign(b[1]) < 0 and not seen_q:
                tau1 = letters
            else:
                tau3 = letters
    return NormalForm(tau1, tau2, tau3)


def _twist(ctx: WordContext, z: Vec, x: Fraction) -> Fraction:
    # moving the geodesic letters of z one at a time is the composite twist gamma(z)
    out = ctx.G.gamma(z, x)
    if not ctx.Q.member(out):
        raise WordError(f"twisting {x} by {z} leaves {ctx.Q.name}")
    return out


# -- additive length in Q -----------------------------------------------------------------

INF = math.inf


def unit_ball_split(h: Fraction, k: int) -> list[Fraction]:
    """Write h as floor(|h|) + 1 elements of (-1, 1) n Z[1/k] (none for h = 0)."""
    if h == 0:
        return []
    s = 1 if h > 0 else -1
    a = abs(h)
    c = math.floor(a) + 1
    if c == 1:
        return [h]
    f = a - (c - 1)
    e = 1
    while Fraction(c - 1, k**e) >= 1 - f:
        e += 1
    y = 1 - Fraction(1, k**e)  # 0.(k-1)...(k-1)
    parts = [y] * (c - 1) + [a - (c - 1) * y]
    return [s * p for p in parts]


def q_additive_length(Q: ConfiningSubset, h: Fraction, bound: Bound = Bound(20, 2),
                      max_terms: int = 4) -> float | int:
    """Least s with h a sum of s elements of Q; ``math.inf`` if impossible (or not found)."""
    h = Fraction(h)
    if h == 0:
        return 0
    if Q.member(h):
        return 1
    if Q.shape == "subgroup":
        return INF
    if Q.shape == "unit_ball":
        return math.floor(abs(h)) + 1
    pool = [x for x in Q.enumerate(bound) if x != 0]
    for s in range(2, max_terms + 1):
        for combo in itertools.combinations_with_replacement(pool, s - 1):
            if Q.member(h - sum(combo)):
                return s
    return INF


def q_additive_length_bruteforce(Q: ConfiningSubset, h: Fraction, bound: Bound, max_terms: int = 4):
    """Meet in the middle over enumerated members only; an upper bound for the true length."""
    h = Fraction(h)
    pool = [x for x in Q.enumerate(bound) if x != 0]
    levels = {Fraction(0): 0}  # least number of pool elements summing to each value
    frontier = {Fraction(0)}
    for s in range(1, (max_terms + 1) // 2 + 1):
        frontier = {a + x for a in frontier for x in pool} - levels.keys()
        levels.update(dict.fromkeys(frontier, s))
    best = min((d + levels[h - v] for v, d in levels.items() if h - v in levels), default=INF)
    return best if best <= max_terms else INF


# -- tau-form length ----------------------------------------------------------------------


@dataclass
class TauLength:
    length: float | int
    z_minus: Vec | None
    lattice_bound: int

    def to_json(self):
        return {"length": None if self.length == INF else self.length,
                "z_minus": None if self.z_minus is None else list(self.z_minus),
                "lattice_bound": self.lattice_bound,
                "status": "ok" if self.length != INF else "unbounded-in-region"}


def word_length_tau(ctx: WordContext, g: GroupElement, lattice_bound: int = 6,
                    q_bound: Bound = Bound(20, 2)) -> TauLength:
    """min over z- (rho(z-) < 0 or z- = 0) in the box of |z-| + |Q-part| + |z - z-|."""
    G, rho, Q = ctx.G, ctx.rho, ctx.Q
    best, arg = INF, None
    for zm in iter_box(G.n, lattice_bound):
        if any(zm) and rho.sign(zm) >= 0:
            continue
        zp = tuple(a - b for a, b in zip(g.z, zm))
        base = _zl(rho, zm) + _zl(rho, zp)
        if base >= best:
            continue
        s = g.r / G.lam(zm)
        ql = q_additive_length(Q, s, q_bound)
        if base + ql < best:
            best, arg = base + ql, zm
    return TauLength(best, arg, lattice_bound)


def tau_word(ctx: WordContext, g: GroupElement, lattice_bound: int = 6) -> list[Letter]:
    """An explicit word of length word_length_tau(g) in the shape tau1 tau2 tau3.

    Only subsets whose sums are understood (subgroups and the unit ball) are supported.
    """
    res = word_length_tau(ctx, g, lattice_bound)
    if res.length == INF:
        raise WordError(f"no tau-form word for {g} within the lattice bound")
    G, rho, Q = ctx.G, ctx.rho, ctx.Q
    zm = res.z_minus
    h = g.r / G.lam(zm)
    if h == 0:
        qs = []
    elif Q.member(h):
        qs = [h]
    elif Q.shape == "unit_ball":
        qs = unit_ball_split(h, G.k)
    else:
        raise WordError(f"cannot split {h} over {Q.name}")
    zp = tuple(a - b for a, b in zip(g.z, zm))
    return ([ZLetter(v) for v in zrho_geodesic(rho, zm)] + [QLetter(x) for x in qs]
            + [ZLetter(v) for v in zrho_geodesic(rho, zp)])


_ZL_CACHE: dict = {}


def _zl(rho: Character, z: Vec) -> int:
    key = (rho, z)
    if key not in _ZL_CACHE:
        _ZL_CACHE[key] = zrho_length(rho, z)
    return _ZL_CACHE[key]


# -- truncated Cayley graph BFS -------------------------------------------------------------


@dataclass(frozen=True)
class Truncation:
    """Generators kept: Q letters inside ``Bound(q_num, q_exp)``, Z_rho letters in the box."""

    q_exp: int = 3
    q_num: int = 500
    z_box: int = 4
    depth: int = 6

    def widened(self) -> "Truncation":
        """A much larger generator set used to confirm short lengths."""
        return Truncation(2 * self.q_exp, 4 * self.q_num, 4 * self.z_box, self.depth)

    def to_json(self):
        return {"q_exp": self.q_exp, "q_num": self.q_num, "z_box": self.z_box, "depth": self.depth}


@dataclass
class BFSLength:
    length: int | None
    lower_bound: int
    certified: bool
    truncation: Truncation

    def to_json(self):
        return {"length": self.length, "lower_bound": self.lower_bound,
                "certified": self.certified, "truncation": self.truncation.to_json()}


class TruncatedCayleyGraph:
    """Cay(G, Q' u Z') for finite truncations Q' of Q and Z' of Z_rho.

    States are (R, z) with R = r * k**M an integer, so the search runs on
    Python ints; ``M`` grows on demand when deeper or more twisted states appear.
    """

    def __init__(self, ctx: WordContext, trunc: Truncation):
        self.ctx, self.trunc = ctx, trunc
        G = ctx.G
        self.qletters = [x for x in ctx.Q.enumerate(Bound(trunc.q_num, trunc.q_exp)) if x != 0]
        self.zletters = [w for w in iter_box(G.n, trunc.z_box) if any(w) and in_Zrho(ctx.rho, w)]
        self.M = 0
        self._ball: list[dict] = []  # layers of the forward ball, keyed by state
        self._incs: dict = {}

    @property
    def generators(self) -> list[GroupElement]:
        n = self.ctx.G.n
        return [GroupElement(x, (0,) * n) for x in self.qletters] + [
            GroupElement(Fraction(0), w) for w in self.zletters]

    def _need_M(self, zmax: int, r_exp: int = 0) -> int:
        return zmax + self.trunc.q_exp + r_exp

    def _rescale(self, M: int) -> None:
        if M <= self.M:
            return
        f = self.ctx.G.k ** (M - self.M)
        self._ball = [{(R * f, z): d for (R, z), d in layer.items()} for layer in self._ball]
        self._incs = {}
        self.M = M

    def encode(self, g: GroupElement):
        R = g.r * self.ctx.G.k**self.M
        if R.denominator != 1:
            raise ValueError("scale too small for element")
        return (R.numerator, g.z)

    def decode(self, state) -> GroupElement:
        R, z = state
        return GroupElement(Fraction(R, self.ctx.G.k**self.M), z)

    def _increments(self, z: Vec) -> list[int]:
        inc = self._incs.get(z)
        if inc is None:
            lam = self.ctx.G.lam(z) * self.ctx.G.k**self.M
            if lam.denominator != 1:
                raise ValueError("scale too small for twist")
            L = lam.numerator
            inc = [(L // x.denominator) * x.numerator for x in self.qletters]
            self._incs[z] = inc
        return inc

    def _expand(self, layer, seen):
        nxt = {}
        zl = self.zletters
        for (R, z) in layer:
            for inc in self._increments(z):
                s = (R + inc, z)
                if s not in seen and s not in nxt:
                    nxt[s] = True
            for w in zl:
                s = (R, tuple(a + b for a, b in zip(z, w)))
                if s not in seen and s not in nxt:
                    nxt[s] = True
        return nxt

    def ball(self, radius: int) -> dict:
        """{state: distance} for the forward ball around the identity."""
        self._rescale(self._need_M(radius * self.trunc.z_box))
        if not self._ball:
            self._ball = [{(0, (0,) * self.ctx.G.n): 0}]
        seen = {}
        for layer in self._ball:
            seen.update(layer)
        while len(self._ball) <= radius:
            d = len(self._ball)
            nxt = self._expand(self._ball[-1], seen)
            layer = {s: d for s in nxt}
            seen.update(layer)
            self._ball.append(layer)
        out = {}
        for layer in self._ball[: radius + 1]:
            out.update(layer)
        return out

    def ball_elements(self, radius: int) -> list[tuple[GroupElement, int]]:
        return [(self.decode(s), d) for s, d in self.ball(radius).items()]

    def distance(self, g: GroupElement, depth: int | None = None) -> BFSLength:
        """Exact truncated distance if it is at most ``depth``; otherwise a lower bound."""
        depth = self.trunc.depth if depth is None else depth
        a = (depth + 1) // 2
        b = depth - a
        from .arith import k_exponent

        zmax = max((abs(c) for c in g.z), default=0) + depth * self.trunc.z_box
        self._rescale(self._need_M(zmax, k_exponent(g.r, self.ctx.G.fact)))
        F = self.ball(a)
        target = self.encode(g)
        if target in F:
            return BFSLength(F[target], F[target], False, self.trunc)
        best = None
        seen = {target: 0}
        layer = {target: True}
        for j in range(1, b + 1):
            layer = self._expand(layer, seen)
            for s in layer:
                seen[s] = j
                d = F.get(s)
                if d is not None and (best is None or d + j < best):
                    best = d + j
            if best is not None and best <= j + 1:
                break
        if best is not None:
            return BFSLength(best, best, False, self.trunc)
        return BFSLength(None, depth + 1, False, self.trunc)


_GRAPHS: dict = {}


def cayley_graph(ctx: WordContext, trunc: Truncation) -> TruncatedCayleyGraph:
    key = (ctx.G.k, ctx.Q.name, ctx.rho, trunc.q_exp, trunc.q_num, trunc.z_box)
    gr = _GRAPHS.get(key)
    if gr is None or gr.ctx.Q is not ctx.Q:
        gr = _GRAPHS[key] = TruncatedCayleyGraph(ctx, trunc)
    return gr


def word_length_bfs(ctx: WordContext, g: GroupElement, trunc: Truncation = Truncation(),
                    certify: bool = True) -> BFSLength:
    """Distance from the identity to g in the truncated Cayley graph.

    ``certified`` is set when the length is at most depth - 1 and
    :func:`certify_length` confirms it against a widened truncation.
    """
    res = cayley_graph(ctx, trunc).distance(g, trunc.depth)
    res.truncation = trunc
    if res.length is not None and certify and res.length <= trunc.depth - 1:
        res.certified = certify_length(ctx, g, res.length, trunc.widened())
    return res


# -- constants from the hyperbolicity argument -------------------------------------------------


def k0_from_l0(l0: int) -> int:
    """k0 = ceil(2 * kappa * l0) + 2 with kappa = 4 log2(l0 + 2), decided with integers."""
    if l0 == 0:
        return 2
    # smallest N with 2**N >= (l0 + 2)**(8 * l0)
    target = (l0 + 2) ** (8 * l0)
    N = target.bit_length() - 1
    if 1 << N < target:
        N += 1
    return N + 2


def k0_bound(ctx: WordContext, trunc: Truncation = Truncation(1, 5, 2, 4)) -> int:
    z0 = ctx.Q.z0_hint
    if z0 is None:
        rep = verify_condition_c(ctx.Q, ctx.rho)
        if not rep.passed:
            raise BoundExhausted("no z0 found for condition (c)")
        z0 = tuple(rep.witness["z0"])
    if not any(z0):
        return k0_from_l0(0)
    res = word_length_bfs(ctx, GroupElement(Fraction(0), tuple(z0)), trunc)
    if res.length is None:
        raise BoundExhausted(f"word length of z0={z0} exceeds depth {trunc.depth}")
    return k0_from_l0(res.length)


def focal_lower_bound(ctx: WordContext, z: Sequence[int], i: int, k0: int | None = None,
                      dps: int = 30) -> float:
    """2((i-1) rho(z) - k0 rho(z0)) / C_rho + 1."""
    import mpmath

    from .group import c_rho

    rho = ctx.rho
    if rho.sign(z) <= 0:
        raise ValueError("need rho(z) > 0")
    k0 = k0_bound(ctx) if k0 is None else k0
    z0 = ctx.Q.z0_hint or (0,) * ctx.G.n
    C = c_rho(rho)
    with mpmath.workdps(dps):
        Cv = C.evalf(dps) if hasattr(C, "evalf") else mpmath.mpf(C.numerator) / C.denominator
        val = 2 * ((i - 1) * rho.eval(z, dps) - k0 * rho.eval(z0, dps)) / Cv + 1
        return float(val)


# -- four-point condition ------------------------------------------------------------------


def four_point_delta(points: Sequence, dist: Callable, samples: int | None = None,
                     rng=None) -> float:
    """Largest four-point defect (max sum - middle sum) / 2 over quadruples of points."""
    pts = list(points)
    if len(pts) < 4:
        raise ValueError("need at least 4 points")
    if samples is None:
        quads = itertools.combinations(range(len(pts)), 4)
    else:
        quads = (tuple(rng.sample(range(len(pts)), 4)) for _ in range(samples))
    cache: dict = {}

    def d(i, j):
        key = (i, j) if i < j else (j, i)
        if key not in cache:
            cache[key] = dist(pts[key[0]], pts[key[1]])
        return cache[key]

    worst = 0
    for w, x, y, z in quads:
        s = sorted((d(w, x) + d(y, z), d(w, y) + d(x, z), d(w, z) + d(x, y)))
        worst = max(worst, (s[2] - s[1]) / 2)
    return worst


def short_length(ctx: WordContext, g: GroupElement) -> int | None:
    """The exact length of g over the full generating set if it is at most 2, else None.

    Two letters multiply to one of QQ, QZ, ZQ or ZZ, and each pattern is a direct
    membership test, so no truncation is involved.
    """
    G, Q, rho = ctx.G, ctx.Q, ctx.rho
    r, z = g.r, g.z
    if not any(z):
        if r == 0:
            return 0
        if Q.member(r):
            return 1
        return 2 if q_additive_length(Q, r) == 2 else None
    if not in_Zrho(rho, z):
        return 2 if r == 0 and zrho_length(rho, z) == 2 else None
    if r == 0:
        return 1
    if Q.member(r) or Q.member(r / G.lam(z)):
        return 2
    return None


def certify_length(ctx: WordContext, g: GroupElement, length: int,
                   check: Truncation) -> bool:
    """Whether a truncated length is confirmed over the full generating set.

    Lengths up to 3 are decided exactly by :func:`short_length`. Length 4 also
    needs every g s^-1 and s^-1 g, for s a generator of the ``check`` graph, to
    have length above 2. Longer lengths fall back to a search in ``check``.
    """
    if length <= 1:
        return True
    exact = short_length(ctx, g)
    if exact is not None:
        return exact == length
    if length == 3:
        return True
    G = ctx.G
    if length == 4:
        for s in cayley_graph(ctx, check).generators:
            si = G.inverse(s)
            if short_length(ctx, G.multiply(si, g)) is not None:
                return False
            if short_length(ctx, G.multiply(g, si)) is not None:
                return False
        return True
    return cayley_graph(ctx, check).distance(g, length - 1).length is None


def certified_ball(ctx: WordContext, trunc: Truncation, radius: int,
                   check: Truncation | None = None) -> list[tuple[GroupElement, int]]:
    """Elements of the truncated ball whose length passes :func:`certify_length`."""
    check = trunc.widened() if check is None else check
    out = [(g, d) for g, d in cayley_graph(ctx, trunc).ball_elements(radius)
           if certify_length(ctx, g, d, check)]
    out.sort(key=lambda item: (item[1], item[0].z, item[0].r))
    return out
