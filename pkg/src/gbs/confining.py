"""Confining subsets of Z[1/k]: the registry, bounded verifiers and the closure construction.

Every verifier works on an explicit finite domain and reports "pass within the
domain" or an exact, replayable counterexample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .arith import enumerate_zk, format_zk, iter_box, valuation, vec_add, vec_neg
from .group import (
    BSGroup,
    Character,
    Vec,
    c_rho_direction,
    equivalent_characters,
    rho_minus,
    rho_plus,
)


class UnsupportedSubsetError(ValueError):
    pass


class ClosureError(ValueError):
    pass


class BoundExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class Bound:
    """Finite slice of Z[1/k]: reduced |numerator| <= num, k-exponent <= exp."""

    num: int = 100
    exp: int = 3

    def to_json(self):
        return {"num": self.num, "exp": self.exp}


@dataclass(frozen=True)
class Domain:
    """Bound on subset elements together with the lattice box |z_i| <= box."""

    bound: Bound = Bound()
    box: int = 4

    def to_json(self):
        return {**self.bound.to_json(), "box": self.box}


@dataclass(eq=False)
class ConfiningSubset:
    name: str
    G: BSGroup
    member: Callable[[Fraction], bool]
    z0_hint: Vec | None = None
    strictness_hint: tuple[Fraction, Vec] | None = None
    expected_class: Character | None = None
    model: str | None = None  # "tree:<i>", "plane" or "lineal"
    shape: str | None = None  # "subgroup" or "unit_ball" when the sum structure is known
    _enum_cache: dict = field(default_factory=dict, repr=False)

    def enumerate(self, bound: Bound) -> list[Fraction]:
        key = (bound.num, bound.exp)
        if key not in self._enum_cache:
            self._enum_cache[key] = [
                x for x in enumerate_zk(self.G.fact, bound.num, bound.exp) if self.member(x)
            ]
        return self._enum_cache[key]

    def __contains__(self, x) -> bool:
        return self.member(Fraction(x))


def _q_full(G: BSGroup) -> ConfiningSubset:
    return ConfiningSubset("Z[1/k]", G, lambda x: True, z0_hint=(0,) * G.n,
                           model="lineal", shape="subgroup")


def _q_i(G: BSGroup, i: int) -> ConfiningSubset:
    p = G.fact.primes[i - 1][0]
    # x in Z[1/k_i] iff p does not divide the reduced denominator
    return ConfiningSubset(
        f"Q_{i}",
        G,
        lambda x, p=p: x.denominator % p != 0,
        z0_hint=(0,) * G.n,
        strictness_hint=(Fraction(1), G.e(i)),
        expected_class=rho_plus(G, i),
        model=f"tree:{i}",
        shape="subgroup",
    )


def _q_minus(G: BSGroup, name: str = "Q_-") -> ConfiningSubset:
    z0 = (-1,) * G.n
    # lam(z) = 1 / (k * p_1^{m_1}) < 1/k
    zs = tuple(-2 if j == 0 else -1 for j in range(G.n))
    return ConfiningSubset(
        name,
        G,
        lambda x: abs(x) < 1,
        z0_hint=z0,
        strictness_hint=(Fraction(1, G.k), zs),
        expected_class=rho_minus(G),
        model="plane",
        shape="unit_ball",
    )


def registry(G: BSGroup) -> list[ConfiningSubset]:
    subsets = [_q_full(G)] + [_q_i(G, i) for i in range(1, G.n + 1)] + [_q_minus(G)]
    if G.n == 1:
        subsets.append(_q_minus(G, name="C_-"))
    return subsets


def get_subset(G: BSGroup, name: str) -> ConfiningSubset:
    aliases = {"full": "Z[1/k]", "Q_full": "Z[1/k]", "minus": "Q_-", "Q-": "Q_-"}
    name = aliases.get(name, name)
    if name.startswith("Q") and name[1:].isdigit():
        name = f"Q_{name[1:]}"
    for Q in registry(G):
        if Q.name == name:
            return Q
    raise UnsupportedSubsetError(f"no registered subset named {name!r} for k={G.k}")


# -- reports ------------------------------------------------------------------------


@dataclass
class Report:
    subset: str
    character: Character
    condition: str
    passed: bool
    witness: dict | None
    domain: dict

    def to_json(self) -> dict:
        return {
            "subset": self.subset,
            "character": self.character.to_json(),
            "condition": self.condition,
            "result": "pass" if self.passed else "fail",
            "witness": self.witness,
            "domain": self.domain,
        }


def _lattice(G: BSGroup, box: int) -> list[Vec]:
    return list(iter_box(G.n, box))


# -- condition (a) --------------------------------------------------------------------


def verify_condition_a(Q: ConfiningSubset, rho: Character, domain: Domain = Domain()) -> Report:
    """gamma(z)(q) in Q for every enumerated q in Q and every z in the box with rho(z) >= 0.

    Iteration is q-major in enumeration order, so the reported counterexample is
    the first one in that order.
    """
    G = Q.G
    zs = [z for z in _lattice(G, domain.box) if rho.sign(z) >= 0]
    lams = [(z, G.lam(z)) for z in zs]
    for q in Q.enumerate(domain.bound):
        if q == 0:
            continue
        for z, lam in lams:
            if not Q.member(lam * q):
                return Report(Q.name, rho, "a", False,
                              {"q": format_zk(q), "z": list(z), "image": format_zk(lam * q)},
                              domain.to_json())
    return Report(Q.name, rho, "a", True, None, domain.to_json())


# -- condition (b) ----------------------------------------------------------------------


def verify_condition_b(Q: ConfiningSubset, rho: Character, h: Fraction, search: int = 64,
                       direction: Sequence[int] | None = None) -> Vec | None:
    """First z = j*y (j = 0..search) with gamma(z)(h) in Q, y the rho = C_rho direction.

    ``direction`` overrides y; it must satisfy rho(y) > 0.
    """
    G = Q.G
    y = tuple(direction) if direction is not None else c_rho_direction(rho)
    if rho.sign(y) <= 0:
        raise ValueError("ray direction must have rho > 0")
    h = Fraction(h)
    for j in range(search + 1):
        z = tuple(j * c for c in y)
        if Q.member(G.gamma(z, h)):
            return z
    return None


def condition_b_report(Q: ConfiningSubset, rho: Character, samples: Sequence[Fraction],
                       search: int = 64) -> Report:
    for h in samples:
        if verify_condition_b(Q, rho, h, search) is None:
            return Report(Q.name, rho, "b", False, {"h": format_zk(h), "search": search},
                          {"samples": len(samples), "search": search})
    return Report(Q.name, rho, "b", True, None, {"samples": len(samples), "search": search})


# -- condition (c) ----------------------------------------------------------------------


def sumset(values: Sequence[Fraction]) -> list[Fraction]:
    """All distinct x + y with x, y in ``values``.

    Values are scaled to integers over a common denominator and the sumset is
    read off an exact integer convolution of indicator vectors.
    """
    if not values:
        return []
    D = math.lcm(*(v.denominator for v in values))
    ints = np.array(sorted({int(v * D) for v in values}), dtype=np.int64)
    lo, hi = int(ints[0]), int(ints[-1])
    span = hi - lo + 1
    if span <= 1 << 22:
        ind = np.zeros(span, dtype=np.float64)
        ind[ints - lo] = 1.0
        from scipy.signal import fftconvolve

        conv = fftconvolve(ind, ind)
        hits = np.nonzero(conv > 0.5)[0]
        sums = (hits + 2 * lo).tolist()
    else:
        vals = ints.tolist()
        sums = sorted({x + y for x in vals for y in vals})
    return [Fraction(s, D) for s in sums]


def _check_z0(Q: ConfiningSubset, z0: Vec, sums: Sequence[Fraction]) -> Fraction | None:
    lam = Q.G.lam(z0)
    for s in sums:
        if not Q.member(lam * s):
            return s
    return None


def verify_condition_c(Q: ConfiningSubset, rho: Character, pair_bound: Bound = Bound(),
                       search: int = 16) -> Report:
    """Find z0 with gamma(z0)(q1 + q2) in Q for all enumerated pairs.

    Tries the subset's hint first, then walks outward along the rho-positive ray.
    """
    sums = sumset(Q.enumerate(pair_bound))
    dom = {**pair_bound.to_json(), "distinct_sums": len(sums)}
    candidates = []
    if Q.z0_hint is not None:
        candidates.append(tuple(Q.z0_hint))
    y = c_rho_direction(rho)
    candidates += [tuple(j * c for c in y) for j in range(search + 1)]
    first_bad = None
    for z0 in candidates:
        bad = _check_z0(Q, z0, sums)
        if bad is None:
            return Report(Q.name, rho, "c", True, {"z0": list(z0)}, dom)
        if first_bad is None:
            first_bad = {"z0": list(z0), "sum": format_zk(bad)}
    return Report(Q.name, rho, "c", False, first_bad, dom)


# -- strictness -------------------------------------------------------------------------


def _valid_strict(Q: ConfiningSubset, rho: Character, q: Fraction, z: Vec) -> bool:
    return rho.sign(z) > 0 and Q.member(q) and not Q.member(Q.G.gamma(vec_neg(z), q))


def strictness_witness(Q: ConfiningSubset, rho: Character,
                       domain: Domain = Domain(Bound(20, 2), 3)) -> tuple[Fraction, Vec] | None:
    """(q, z) with rho(z) > 0, q in Q and gamma(z^-1)(q) not in Q, i.e. gamma(z)(Q) != Q."""
    if Q.strictness_hint is not None:
        q, z = Q.strictness_hint
        if _valid_strict(Q, rho, q, z):
            return q, tuple(z)
    zs = [z for z in _lattice(Q.G, domain.box) if rho.sign(z) > 0]
    for q in Q.enumerate(domain.bound):
        for z in zs:
            if _valid_strict(Q, rho, q, z):
                return q, z
    return None


def strictness_report(Q: ConfiningSubset, rho: Character,
                      domain: Domain = Domain(Bound(20, 2), 3)) -> Report:
    w = strictness_witness(Q, rho, domain)
    wit = None if w is None else {
        "q": format_zk(w[0]), "z": list(w[1]),
        "preimage": format_zk(Q.G.gamma(vec_neg(w[1]), w[0])),
    }
    return Report(Q.name, rho, "strict", w is not None, wit, domain.to_json())


# -- closure ------------------------------------------------------------------------------


def _solve_lam(G: BSGroup, ratio: Fraction) -> Vec | None:
    """The unique z with lam(z) = ratio, if any."""
    if ratio <= 0:
        return None
    z = []
    for p, m in G.fact.primes:
        v = valuation(ratio, p)
        if v % m:
            return None
        z.append(v // m)
    z = tuple(z)
    return z if G.lam(z) == ratio else None


def closure_with(Q: ConfiningSubset, S: Sequence[Fraction], rho: Character,
                 search: int = 64) -> ConfiningSubset:
    """Q u U_{rho(z) >= 0} gamma(z)(S), after checking some such z pushes all of S into Q.

    Membership of x recovers the only candidate z with lam(z) = x/s from the
    valuations of x/s and then checks rho(z) >= 0.
    """
    G = Q.G
    S = [Fraction(s) for s in S]
    if sorted(S) != sorted(-s for s in S):
        raise ClosureError("S must be symmetric")
    y = c_rho_direction(rho)
    reach = 0
    for s in S:
        z = verify_condition_b(Q, rho, s, search)
        if z is None:
            raise ClosureError(f"no z on the rho-positive ray within {search} steps maps {s} into {Q.name}")
        reach = max(reach, max(abs(c) for c in z) if any(z) else 0)
    z_push = tuple(reach * c for c in y)
    nonzero = [s for s in S if s != 0]

    def member(x: Fraction) -> bool:
        if Q.member(x):
            return True
        if x == 0:
            return 0 in S
        for s in nonzero:
            z = _solve_lam(G, x / s)
            if z is not None and rho.sign(z) >= 0:
                return True
        return False

    z1 = Q.z0_hint if Q.z0_hint is not None else (0,) * G.n
    return ConfiningSubset(
        f"closure({Q.name})", G, member,
        z0_hint=vec_add(z_push, z1), strictness_hint=Q.strictness_hint,
        expected_class=Q.expected_class,
    )


# -- classification -----------------------------------------------------------------------


@dataclass(frozen=True)
class Structure:
    """Outcome of classifying (Q, rho): which model the pair generates."""

    kind: str  # "quasi-parabolic" or "lineal"
    model: str  # "tree:<i>", "plane", "lineal"
    character: Character

    def to_json(self):
        return {"kind": self.kind, "model": self.model, "character": self.character.to_json()}


@dataclass(frozen=True)
class Refutation:
    report: Report

    def to_json(self):
        return {"kind": "refutation", "counterexample": self.report.to_json()}


def classify(Q: ConfiningSubset, rho: Character, domain: Domain = Domain(Bound(100, 3), 5)):
    if Q.model is None:
        raise UnsupportedSubsetError(f"{Q.name} is not a registered subset")
    if Q.model == "lineal":
        return Structure("lineal", "lineal", rho)
    if equivalent_characters(rho, Q.expected_class):
        return Structure("quasi-parabolic", Q.model, rho)
    rep = verify_condition_a(Q, rho, domain)
    if rep.passed:
        raise BoundExhausted(f"no condition (a) counterexample for {Q.name} in {domain}")
    return Refutation(rep)
