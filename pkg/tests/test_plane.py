import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from gbs.confining import Bound, get_subset
from gbs.group import BSGroup, GroupElement, rho_minus
from gbs.plane import (
    InvalidPointError, PlanePoint, act, basepoint, busemann_estimate, busemann_exact, displacement,
    distance, orbit_density_check, random_point, sm_generating_set,
)
from gbs.words import Truncation, WordContext, word_length_bfs

from conftest import elements

G6 = BSGroup(6)


def points():
    return st.builds(lambda a, b: PlanePoint.of(repr(a), repr(b)),
                     st.floats(-5, 5), st.floats(0.05, 20))


def test_action_examples():
    i = basepoint()
    w = act(G6, G6.a, i)
    assert w.re == 1 and w.im == 1
    w = act(G6, G6.t(2), i)
    assert w.re == 0 and w.im == 3
    assert act(G6, G6.identity, i) == i


def test_invalid_point():
    with pytest.raises(InvalidPointError):
        PlanePoint.of(0, 0)


def test_distance_examples():
    i = basepoint()
    with mpmath.workdps(64):
        assert abs(distance(i, PlanePoint.of(0, 3)) - mpmath.log(3)) < mpmath.mpf("1e-60")
        assert abs(distance(i, PlanePoint.of(1, 1)) - 2 * mpmath.asinh(mpmath.mpf(1) / 2)) < mpmath.mpf("1e-60")
    assert distance(i, i) == 0


@given(points(), points())
def test_distance_symmetric(u, v):
    assert abs(distance(u, v) - distance(v, u)) < 1e-50


@given(elements(G6), points(), points())
def test_isometry(g, u, v):
    assert abs(distance(act(G6, g, u), act(G6, g, v)) - distance(u, v)) < 1e-10


@given(elements(G6), elements(G6), points())
def test_action_law(g, h, w):
    a = act(G6, G6.multiply(g, h), w)
    b = act(G6, g, act(G6, h, w))
    assert abs(a.re - b.re) < 1e-40 and abs(a.im - b.im) < 1e-40


@given(elements(G6))
def test_displacement_closed_form(g):
    assert abs(displacement(G6, g) - distance(basepoint(), act(G6, g, basepoint()))) < 1e-40


def test_busemann_values():
    assert abs(busemann_exact(G6, G6.t(1)).evalf(30) + math.log(2)) < 1e-14
    assert abs(busemann_exact(G6, G6.t(2)).evalf(30) + math.log(3)) < 1e-14
    assert busemann_exact(G6, G6.a).sign() == 0


@given(elements(G6), elements(G6))
def test_busemann_homomorphism_and_rho(g, h):
    rho = rho_minus(G6)
    assert busemann_exact(G6, G6.multiply(g, h)).arg == (busemann_exact(G6, g).arg * busemann_exact(G6, h).arg)
    assert busemann_exact(G6, g) == rho.exact(g.z)


def test_busemann_estimate_converges():
    rng = random.Random(11)
    for _ in range(20):
        g = GroupElement(Fraction(rng.randint(-10, 10)), (rng.randint(-3, 3), rng.randint(-3, 3)))
        exact = busemann_exact(G6, g).evalf(64)
        errs = [abs(busemann_estimate(G6, g, T) - exact) for T in (10, 20, 30)]
        assert errs[2] < 1e-6
        assert errs[0] >= errs[1] >= errs[2]


def test_sm_generating_set():
    D = 2 * mpmath.log(6) + 1
    S = sm_generating_set(G6, D, num=6, exp=1, box=2)
    elems = {e.element for e in S}
    assert G6.a in elems and G6.identity in elems
    for e in S:
        assert abs(rho_minus(G6).eval(e.element.z, 30)) <= D
    only = sm_generating_set(G6, 0, num=6, exp=1, box=2)
    assert [e.element for e in only] == [G6.identity]


def test_mutual_boundedness():
    D = 2 * mpmath.log(6) + 1
    ctx = WordContext(G6, get_subset(G6, "Q_-"), rho_minus(G6))
    for e in sm_generating_set(G6, D, num=3, exp=1, box=1):
        assert word_length_bfs(ctx, e.element, Truncation(1, 5, 1, 8), certify=False).length <= 8
    for x in ctx.Q.enumerate(Bound(30, 2)):
        assert displacement(G6, GroupElement(x, (0, 0))) <= D
    for z in [(1, 0), (0, 1), (1, -1), (-1, 1), (2, -1)]:
        if abs(rho_minus(G6).eval(z)) <= mpmath.log(3):
            assert displacement(G6, GroupElement(Fraction(0), z)) <= D


def test_orbit_density():
    assert orbit_density_check(G6, [basepoint()]).max_gap < 1e-20
    assert orbit_density_check(G6, [PlanePoint.of(0, 6)]).max_gap < 1e-20
    rng = random.Random(2)
    rep = orbit_density_check(G6, [random_point(rng, 6) for _ in range(100)])
    assert rep.max_gap <= math.log(6) + 0.1
