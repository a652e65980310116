"""The group G_k = Z[1/k] x| Z^n, characters on Z^n, and the quasi-line generating set Z_rho."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath

from .arith import KFactorization, as_zk, factorize, format_zk, iter_box, vec_add

Vec = tuple[int, ...]


@dataclass(frozen=True)
class GroupElement:
    r: Fraction
    z: Vec

    def to_json(self) -> dict:
        return {"r": format_zk(self.r), "z": list(self.z)}


class BSGroup:
    """G_k with the basis t_1..t_n ordered like the primes of k."""

    def __init__(self, k: int | KFactorization):
        self.fact = k if isinstance(k, KFactorization) else factorize(k)
        self.k = self.fact.k
        self.n = self.fact.n
        self._powers = self.fact.prime_powers

    def __repr__(self):
        return f"BSGroup({self.k})"

    def __eq__(self, other):
        return isinstance(other, BSGroup) and other.k == self.k

    def __hash__(self):
        return hash(("BSGroup", self.k))

    # elements
    def element(self, r=0, z: Sequence[int] | None = None) -> GroupElement:
        z = tuple(z) if z is not None else (0,) * self.n
        if len(z) != self.n:
            raise ValueError(f"expected {self.n} exponents, got {len(z)}")
        return GroupElement(as_zk(r, self.fact), tuple(int(c) for c in z))

    @property
    def identity(self) -> GroupElement:
        return GroupElement(Fraction(0), (0,) * self.n)

    @property
    def a(self) -> GroupElement:
        return GroupElement(Fraction(1), (0,) * self.n)

    def t(self, i: int) -> GroupElement:
        """Generator t_i, 1-based like the indexing of primes."""
        return GroupElement(Fraction(0), self.e(i))

    def e(self, i: int) -> Vec:
        return tuple(1 if j == i - 1 else 0 for j in range(self.n))

    # the twisting homomorphism
    def lam(self, z: Sequence[int]) -> Fraction:
        return _lam(self._powers, tuple(z))

    def gamma(self, z: Sequence[int], x: Fraction) -> Fraction:
        return self.lam(z) * x

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return GroupElement(g.r + self.lam(g.z) * h.r, vec_add(g.z, h.z))

    def inverse(self, g: GroupElement) -> GroupElement:
        negz = tuple(-c for c in g.z)
        return GroupElement(-self.lam(negz) * g.r, negz)

    def product(self, *gs: GroupElement) -> GroupElement:
        out = self.identity
        for g in gs:
            out = self.multiply(out, g)
        return out

    def power(self, g: GroupElement, n: int) -> GroupElement:
        base = g if n >= 0 else self.inverse(g)
        out = self.identity
        for _ in range(abs(n)):
            out = self.multiply(out, base)
        return out

    def parse_element(self, obj) -> GroupElement:
        if isinstance(obj, str):
            obj = json.loads(obj)
        return self.element(Fraction(str(obj.get("r", "0"))), obj.get("z"))


@lru_cache(maxsize=65536)
def _lam(powers: tuple[int, ...], z: Vec) -> Fraction:
    num = den = 1
    for q, c in zip(powers, z):
        if c >= 0:
            num *= q**c
        else:
            den *= q ** (-c)
    return Fraction(num, den)


# -- exact reals used by characters --------------------------------------------


@dataclass(frozen=True)
class LogOf:
    """The real number log(arg) for a positive rational arg, compared exactly."""

    arg: Fraction

    def __post_init__(self):
        if self.arg <= 0:
            raise ValueError("log of a non-positive number")

    def sign(self) -> int:
        return (self.arg > 1) - (self.arg < 1)

    def __neg__(self):
        return LogOf(1 / self.arg)

    def __abs__(self):
        return self if self.arg >= 1 else -self

    def __lt__(self, other: "LogOf"):
        return self.arg < other.arg

    def __le__(self, other: "LogOf"):
        return self.arg <= other.arg

    def evalf(self, dps: int = 30):
        with mpmath.workdps(dps):
            return mpmath.log(mpmath.mpf(self.arg.numerator) / self.arg.denominator)

    def __float__(self):
        return math.log(self.arg.numerator) - math.log(self.arg.denominator)

    def __str__(self):
        return f"log({format_zk(self.arg)})"


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


# -- characters -----------------------------------------------------------------


@dataclass(frozen=True)
class Character:
    """A non-zero homomorphism Z^n -> R.

    ``kind == "linear"``: rho(z) = sum q_i z_i with rational ``coeffs``.
    ``kind == "mult"``: rho(z) = -log prod w_i**z_i with positive rational ``weights``.
    """

    kind: str
    values: tuple[Fraction, ...]
    name: str | None = None

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if self.kind == "linear":
            if all(v == 0 for v in vals):
                raise ValueError("character must be non-zero")
        elif self.kind == "mult":
            if any(v <= 0 for v in vals):
                raise ValueError("multiplicative weights must be positive")
            if all(v == 1 for v in vals):
                raise ValueError("character must be non-zero")
        else:
            raise ValueError(f"unknown character kind {self.kind!r}")

    def __eq__(self, other):
        return isinstance(other, Character) and (self.kind, self.values) == (other.kind, other.values)

    def __hash__(self):
        return hash((self.kind, self.values))

    @property
    def n(self) -> int:
        return len(self.values)

    @classmethod
    def linear(cls, coeffs, name=None) -> "Character":
        return cls("linear", tuple(coeffs), name)

    @classmethod
    def mult(cls, weights, name=None) -> "Character":
        return cls("mult", tuple(weights), name)

    def scaled(self, c: Fraction) -> "Character":
        """c * rho for rational c > 0 (exact for linear; needs integer c for mult)."""
        c = Fraction(c)
        if c <= 0:
            raise ValueError("scale must be positive")
        if self.kind == "linear":
            return Character.linear([c * v for v in self.values])
        if c.denominator != 1:
            raise ValueError("multiplicative characters scale by integers only")
        return Character.mult([v ** c.numerator for v in self.values])

    def weight_product(self, z: Sequence[int]) -> Fraction:
        out = Fraction(1)
        for w, c in zip(self.values, z):
            out *= w**c
        return out

    def exact(self, z: Sequence[int]):
        """rho(z) as a Fraction (linear) or a LogOf (mult)."""
        if self.kind == "linear":
            return sum((q * c for q, c in zip(self.values, z)), Fraction(0))
        return LogOf(1 / self.weight_product(z))

    def sign(self, z: Sequence[int]) -> int:
        if self.kind == "linear":
            return _sgn(self.exact(z))
        p = self.weight_product(z)
        return (p < 1) - (p > 1)

    def eval(self, z: Sequence[int], dps: int = 30):
        v = self.exact(z)
        if isinstance(v, LogOf):
            return v.evalf(dps)
        with mpmath.workdps(dps):
            return mpmath.mpf(v.numerator) / v.denominator

    def on_generator(self, i: int):
        """rho(t_i), 0-based index."""
        return self.exact(tuple(1 if j == i else 0 for j in range(self.n)))

    def to_json(self) -> dict:
        if self.kind == "linear":
            return {"kind": "linear", "coeffs": [format_zk(v) for v in self.values]}
        return {"kind": "mult", "weights": [[format_zk(w), 1] for w in self.values]}

    def __str__(self):
        if self.name:
            return self.name
        if self.kind == "linear":
            return "(" + ",".join(format_zk(v) for v in self.values) + ")"
        return "mult(" + ",".join(format_zk(v) for v in self.values) + ")"


def character_from_json(obj) -> Character:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if obj["kind"] == "linear":
        return Character.linear([Fraction(str(c)) for c in obj["coeffs"]])
    if obj["kind"] == "mult":
        weights = []
        for w in obj["weights"]:
            if isinstance(w, (list, tuple)):
                base, e = w
                weights.append(Fraction(str(base)) ** int(e))
            else:
                weights.append(Fraction(str(w)))
        return Character.mult(weights)
    raise ValueError(f"unknown character kind {obj.get('kind')!r}")


def rho_plus(G: BSGroup, i: int) -> Character:
    """Projection onto the i-th coordinate (1-based)."""
    return Character.linear([1 if j == i - 1 else 0 for j in range(G.n)], name=f"rho_{i}^+")


def rho_minus(G: BSGroup) -> Character:
    """t_i -> -m_i log p_i."""
    return Character.mult(list(G.fact.prime_powers), name="rho_-")


def parse_character(spec: str, G: BSGroup) -> Character:
    """Names ``plus:i``/``rho_i^+``, ``minus``/``rho_-``, ``a,b,...`` rationals, or JSON."""
    s = spec.strip()
    if s in ("minus", "rho_-", "rho-"):
        return rho_minus(G)
    if s.startswith("plus:"):
        return rho_plus(G, int(s[5:]))
    if s.startswith("rho_") and s.endswith("^+"):
        return rho_plus(G, int(s[4:-2]))
    if s.startswith("{"):
        ch = character_from_json(s)
    else:
        ch = Character.linear([Fraction(t) for t in s.strip("()[]").split(",")])
    if ch.n != G.n:
        raise ValueError(f"character has {ch.n} coordinates, group needs {G.n}")
    return ch


# -- Z_rho ------------------------------------------------------------------------


def c_rho(rho: Character):
    """C_rho = max_i |rho(t_i)|, attained by +-t_argmax."""
    vals = [abs(rho.on_generator(i)) for i in range(rho.n)]
    return max(vals)


def c_rho_direction(rho: Character) -> Vec:
    """A lattice vector y with rho(y) = C_rho (first maximizing generator, signed)."""
    vals = [abs(rho.on_generator(i)) for i in range(rho.n)]
    best = max(vals)
    i = vals.index(best)
    s = rho.sign(tuple(1 if j == i else 0 for j in range(rho.n)))
    return tuple(s if j == i else 0 for j in range(rho.n))


def in_Zrho(rho: Character, z: Sequence[int]) -> bool:
    C = c_rho(rho)
    v = rho.exact(z)
    return abs(v) <= C


def _ceil_ratio(rho: Character, z: Sequence[int]) -> int:
    """ceil(|rho(z)| / C_rho), computed exactly."""
    C = c_rho(rho)
    v = abs(rho.exact(z))
    if rho.kind == "linear":
        return math.ceil(v / C)
    # smallest L with |log P| <= L log W, i.e. arg <= W**L
    arg, W = v.arg, C.arg
    L, acc = 0, Fraction(1)
    while acc < arg:
        acc *= W
        L += 1
    return L


def zrho_length(rho: Character, z: Sequence[int]) -> int:
    """Word length of z over Z_rho."""
    if not any(z):
        return 0
    L = max(1, _ceil_ratio(rho, z))
    if L == 1 or in_Zrho(rho, _remainder(rho, z, L)):
        return L
    return _zrho_bfs_length(rho, tuple(z))


def _remainder(rho: Character, z: Sequence[int], L: int) -> Vec:
    y = c_rho_direction(rho)
    if rho.sign(z) < 0:
        y = tuple(-c for c in y)
    return tuple(c - (L - 1) * d for c, d in zip(z, y))


def zrho_geodesic(rho: Character, z: Sequence[int]) -> list[Vec]:
    """Letters of Z_rho, each pointing the same rho-way as z, with product z."""
    z = tuple(z)
    if not any(z):
        return []
    L = zrho_length(rho, z)
    if L == 1:
        return [z]
    rem = _remainder(rho, z, L)
    if not in_Zrho(rho, rem):
        return _zrho_bfs_word(rho, z)
    y = c_rho_direction(rho)
    if rho.sign(z) < 0:
        y = tuple(-c for c in y)
    return [y] * (L - 1) + [rem]


def _zrho_letters(rho: Character, radius: int) -> list[Vec]:
    return [w for w in iter_box(rho.n, radius) if any(w) and in_Zrho(rho, w)]


def _zrho_bfs_word(rho: Character, z: Vec, radius: int | None = None) -> list[Vec]:
    radius = radius or 2 * max(map(abs, z)) + 2
    letters = _zrho_letters(rho, radius)
    start = (0,) * rho.n
    prev = {start: None}
    queue = deque([start])
    bound = 4 * radius
    while queue:
        u = queue.popleft()
        if u == z:
            break
        for w in letters:
            v = vec_add(u, w)
            if v not in prev and max(map(abs, v)) <= bound:
                prev[v] = (u, w)
                queue.append(v)
    if z not in prev:
        raise RuntimeError(f"no Z_rho word found for {z}")
    word = []
    while prev[z] is not None:
        z, w = prev[z]
        word.append(w)
    return word[::-1]


def _zrho_bfs_length(rho: Character, z: Vec) -> int:
    return len(_zrho_bfs_word(rho, z))


def zrho_bfs_distance(rho: Character, z: Sequence[int], radius: int) -> int:
    """Independent check: BFS in Cay(Z^n, Z_rho) with letters and vertices confined to a box."""
    z = tuple(z)
    letters = _zrho_letters(rho, radius)
    start = (0,) * rho.n
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u == z:
            return dist[u]
        for w in letters:
            v = vec_add(u, w)
            if v not in dist and max(map(abs, v)) <= radius:
                dist[v] = dist[u] + 1
                queue.append(v)
    raise ValueError(f"{z} not reachable inside the box")


# -- equivalence of characters -----------------------------------------------------


def _factor_rational(x: Fraction) -> dict[int, int]:
    out: dict[int, int] = {}
    for part, s in ((x.numerator, 1), (x.denominator, -1)):
        p = 2
        while p * p <= part:
            while part % p == 0:
                out[p] = out.get(p, 0) + s
                part //= p
            p += 1
        if part > 1:
            out[part] = out.get(part, 0) + s
    return out


def _coordinates(rho: Character) -> list[dict]:
    """rho(t_i) as a formal combination over the basis {1} u {log p}."""
    if rho.kind == "linear":
        return [{1: v} if v else {} for v in rho.values]
    out = []
    for w in rho.values:
        out.append({("log", p): Fraction(-e) for p, e in _factor_rational(w).items()})
    return out


def equivalent_characters(rho: Character, sigma: Character) -> bool:
    """rho = c * sigma for some real c > 0.

    Decided on formal coordinates over {1, log 2, log 3, ...}: the vectors are
    parallel iff every 2x2 minor vanishes as a bilinear form.
    """
    if rho.n != sigma.n:
        return False
    a, b = _coordinates(rho), _coordinates(sigma)
    n = rho.n
    for i in range(n):
        for j in range(i + 1, n):
            if _tensor(a[i], b[j]) != _tensor(a[j], b[i]):
                return False
    # zero patterns must agree, then signs on a common non-zero coordinate
    for i in range(n):
        if (not a[i]) != (not b[i]):
            return False
    for i in range(n):
        if a[i]:
            e = tuple(1 if j == i else 0 for j in range(n))
            return rho.sign(e) == sigma.sign(e)
    return False


def _tensor(u: dict, v: dict) -> dict:
    out: dict = {}
    for ku, cu in u.items():
        for kv, cv in v.items():
            key = tuple(sorted((ku, kv), key=repr))  # the symbols commute
            out[key] = out.get(key, 0) + cu * cv
    return {key: c for key, c in out.items() if c}


def primitive_class(rho: Character) -> Character:
    """Canonical representative of the positive-scaling class of rho.

    Linear characters become primitive integer vectors; multiplicative ones have
    their weights replaced by the largest common integer root. Classes that mix
    the two kinds are still compared with :func:`equivalent_characters`.
    """
    if rho.kind == "linear":
        den = math.lcm(*(v.denominator for v in rho.values))
        ints = [int(v * den) for v in rho.values]
        g = math.gcd(*ints)
        return Character.linear([c // g for c in ints])
    coords = [_factor_rational(w) for w in rho.values]
    exps = [e for c in coords for e in c.values()]
    g = math.gcd(*exps) if exps else 1
    weights = []
    for c in coords:
        w = Fraction(1)
        for p, e in c.items():
            w *= Fraction(p) ** (e // g)
        weights.append(w)
    return Character.mult(weights)
