"""The action of G_k on the upper half-plane by w -> lambda(z) w + r.

Reals are mpmath floats at a caller-chosen precision; lambda(z) and r stay exact
until the single rounding inside :func:`act`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .arith import enumerate_zk, iter_box
from .group import BSGroup, GroupElement, LogOf

DEFAULT_DPS = 64
GUARD = mpmath.mpf("1e-20")


class InvalidPointError(ValueError):
    pass


def _mpf(x, dps: int):
    with mpmath.workdps(dps):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)


@dataclass(frozen=True)
class PlanePoint:
    re: mpmath.mpf
    im: mpmath.mpf
    dps: int = DEFAULT_DPS

    def __post_init__(self):
        if not self.im > 0:
            raise InvalidPointError(f"imaginary part must be positive, got {self.im}")

    @classmethod
    def of(cls, re, im, dps: int = DEFAULT_DPS) -> "PlanePoint":
        return cls(_mpf(re, dps), _mpf(im, dps), dps)

    @classmethod
    def from_json(cls, data, dps: int = DEFAULT_DPS) -> "PlanePoint":
        if isinstance(data, str):
            data = json.loads(data)
        with mpmath.workdps(dps):
            return cls(mpmath.mpf(str(data["re"])), mpmath.mpf(str(data["im"])), dps)

    def to_json(self, digits: int | None = None):
        digits = digits or self.dps
        return {"re": mpmath.nstr(self.re, digits, strip_zeros=False),
                "im": mpmath.nstr(self.im, digits, strip_zeros=False)}


def basepoint(dps: int = DEFAULT_DPS) -> PlanePoint:
    return PlanePoint.of(0, 1, dps)


def act(G: BSGroup, g: GroupElement, w: PlanePoint) -> PlanePoint:
    lam = G.lam(g.z)
    with mpmath.workdps(w.dps):
        l = _mpf(lam, w.dps)
        return PlanePoint(l * w.re + _mpf(g.r, w.dps), l * w.im, w.dps)


def distance(u: PlanePoint, v: PlanePoint):
    dps = max(u.dps, v.dps)
    with mpmath.workdps(dps):
        gap = mpmath.sqrt((u.re - v.re) ** 2 + (u.im - v.im) ** 2)
        return 2 * mpmath.asinh(gap / (2 * mpmath.sqrt(u.im * v.im)))


def displacement(G: BSGroup, g: GroupElement, dps: int = DEFAULT_DPS):
    """d(i, g i) in closed form: 2 asinh(sqrt(r^2 + (l - 1)^2) / (2 sqrt(l)))."""
    l, r = G.lam(g.z), g.r
    with mpmath.workdps(dps):
        lf, rf = _mpf(l, dps), _mpf(r, dps)
        return 2 * mpmath.asinh(mpmath.sqrt(rf**2 + (lf - 1) ** 2) / (2 * mpmath.sqrt(lf)))


def busemann_exact(G: BSGroup, g: GroupElement) -> LogOf:
    """-log lambda(z(g)), as an exact log of a positive rational."""
    return LogOf(1 / G.lam(g.z))


def busemann_estimate(G: BSGroup, g: GroupElement, T, dps: int = DEFAULT_DPS):
    """d(g i, e^T i) - d(i, e^T i)."""
    i = basepoint(dps)
    with mpmath.workdps(dps):
        far = PlanePoint(mpmath.mpf(0), mpmath.exp(T), dps)
        return distance(act(G, g, i), far) - distance(i, far)


@dataclass(frozen=True)
class SMEntry:
    element: GroupElement
    displacement: mpmath.mpf
    borderline: bool


def sm_generating_set(G: BSGroup, D, num: int = 20, exp: int = 2, box: int = 2,
                      dps: int = DEFAULT_DPS) -> list[SMEntry]:
    """Enumerated g with d(i, g i) <= D; entries within the guard of D are flagged."""
    with mpmath.workdps(dps):
        D = mpmath.mpf(D)
        rs = enumerate_zk(G.fact, num, exp)
        out = []
        for z in iter_box(G.n, box):
            for r in rs:
                g = GroupElement(r, z)
                d = displacement(G, g, dps)
                if d <= D + GUARD:
                    out.append(SMEntry(g, d, abs(d - D) <= GUARD))
        return out


@dataclass
class DensityReport:
    max_gap: float
    bound: float
    slack: float
    worst_point: PlanePoint | None

    def to_json(self):
        return {"max_gap": self.max_gap, "bound": self.bound, "slack": self.slack,
                "worst_point": None if self.worst_point is None else self.worst_point.to_json(20)}


def orbit_density_check(G: BSGroup, points: Sequence[PlanePoint], exp: int = 6, box: int = 2,
                        dps: int = 30) -> DensityReport:
    """Largest distance from a sample point to the orbit of i.

    For each lambda = lambda(z) with z in the box, the orbit points at that height
    are r + lambda i for r in k**-exp Z; only the two r nearest to Re(w) matter.
    """
    step = Fraction(1, G.k**exp)
    lams = sorted({G.lam(z) for z in iter_box(G.n, box)})
    worst, worst_pt = mpmath.mpf(0), None
    with mpmath.workdps(dps):
        for w in points:
            best = None
            for lam in lams:
                l = _mpf(lam, dps)
                base = int(mpmath.floor(w.re / _mpf(step, dps)))
                for j in (base, base + 1):
                    o = PlanePoint(_mpf(j * step, dps), l * 1, dps)
                    d = distance(w, o)
                    if best is None or d < best:
                        best = d
            if best > worst:
                worst, worst_pt = best, w
        bound = math.log(G.k)
        gap = float(worst)
        return DensityReport(gap, bound, max(0.0, gap - bound), worst_pt)


def random_point(rng, k: int, dps: int = DEFAULT_DPS) -> PlanePoint:
    """Re in [0, 1], Im in [1/k, k] (log-uniform)."""
    re = rng.random()
    im = math.exp(rng.uniform(-math.log(k), math.log(k)))
    return PlanePoint.of(repr(re), repr(im), dps)
