import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gbs.group import (
    BSGroup, Character, GroupElement, LogOf, c_rho, c_rho_direction, character_from_json,
    equivalent_characters, in_Zrho, parse_character, primitive_class, rho_minus, rho_plus,
    zrho_bfs_distance, zrho_geodesic, zrho_length,
)

from conftest import elements

G6 = BSGroup(6)
G12 = BSGroup(12)


@given(elements(G6), elements(G6), elements(G6))
def test_associative(g, h, f):
    assert G6.multiply(G6.multiply(g, h), f) == G6.multiply(g, G6.multiply(h, f))


@given(elements(G12))
def test_inverse(g):
    assert G12.multiply(g, G12.inverse(g)) == G12.identity
    assert G12.multiply(G12.inverse(g), g) == G12.identity


def test_conjugation_law():
    t, a = G6.t(1), G6.a
    assert G6.product(t, a, G6.inverse(t)) == GroupElement(Fraction(2), (0, 0))
    t2 = G6.t(2)
    assert G6.product(G6.inverse(t2), a, t2) == GroupElement(Fraction(1, 3), (0, 0))
    assert G12.lam((1, 1)) == 12


def test_element_validation():
    with pytest.raises(ValueError):
        G6.element(Fraction(1, 5), (0, 0))
    with pytest.raises(ValueError):
        G6.element(1, (0,))


def test_log_of_exact_order():
    assert LogOf(Fraction(3)) < LogOf(Fraction(4))
    assert -LogOf(Fraction(6)) == LogOf(Fraction(1, 6))
    assert abs(LogOf(Fraction(1, 2))) == LogOf(Fraction(2))
    assert abs(float(LogOf(Fraction(6))) - math.log(6)) < 1e-15


def test_rho_minus_values():
    rho = rho_minus(G6)
    assert rho.exact((1, 0)) == LogOf(Fraction(1, 2))
    assert rho.sign((1, 0)) == -1
    assert rho.sign((-1, -1)) == 1
    assert c_rho(rho) == LogOf(Fraction(3))
    assert c_rho_direction(rho) == (0, -1)


def test_zrho_examples():
    rho = rho_minus(G6)
    assert in_Zrho(rho, (-1, 1))
    assert not in_Zrho(rho, (-1, -1))
    assert zrho_length(rho, (-1, -1)) == 2
    assert zrho_length(rho_plus(G6, 1), (3, 7)) == 3
    assert zrho_length(rho, (0, 0)) == 0


@pytest.mark.parametrize("rho", [rho_minus(G6), rho_plus(G6, 1), rho_plus(G6, 2), rho_minus(G12),
                                 Character.linear([1, 2]), Character.linear([Fraction(1, 2), -3])])
def test_zrho_length_matches_bfs(rho):
    G = G6
    for z in [(a, b) for a in range(-3, 4) for b in range(-3, 4)]:
        assert zrho_length(rho, z) == zrho_bfs_distance(rho, z, 9), z


@given(st.tuples(st.integers(-20, 20), st.integers(-20, 20)))
def test_geodesic_word(z):
    for rho in (rho_minus(G6), rho_plus(G6, 2), Character.linear([2, -3])):
        word = zrho_geodesic(rho, z)
        assert len(word) == zrho_length(rho, z)
        assert all(in_Zrho(rho, w) for w in word)
        assert tuple(map(sum, zip(*word))) == z if word else not any(z)
        # letters never point against z
        assert all(rho.sign(w) * rho.sign(z) >= 0 for w in word)


def test_equivalence():
    r1 = rho_plus(G6, 1)
    assert equivalent_characters(r1, r1.scaled(3))
    assert not equivalent_characters(r1, Character.linear([-1, 0]))
    assert not equivalent_characters(r1, rho_plus(G6, 2))
    rm = rho_minus(G6)
    assert equivalent_characters(rm, Character.mult([4, 9]))
    assert not equivalent_characters(rm, Character.mult([3, 2]))
    assert not equivalent_characters(rm, Character.mult([Fraction(1, 2), Fraction(1, 3)]))
    # z -> z_1 log 2 is a positive multiple of (1, 0)
    assert equivalent_characters(Character.mult([Fraction(1, 2), 1]), r1)
    assert not equivalent_characters(Character.mult([2, 1]), r1)
    assert not equivalent_characters(rm, r1)


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=2).filter(any), st.integers(1, 50))
def test_primitive_class(v, c):
    rho = Character.linear(v)
    assert primitive_class(rho) == primitive_class(rho.scaled(c))
    assert equivalent_characters(rho, primitive_class(rho))


def test_character_parsing_and_json():
    assert parse_character("minus", G6) == rho_minus(G6)
    assert parse_character("plus:2", G6) == rho_plus(G6, 2)
    assert parse_character("rho_1^+", G6) == rho_plus(G6, 1)
    assert parse_character("1,-1/2", G6) == Character.linear([1, Fraction(-1, 2)])
    for rho in (rho_minus(G12), rho_plus(G12, 2)):
        assert character_from_json(rho.to_json()) == rho
    assert rho_minus(G6).to_json() == {"kind": "mult", "weights": [["2", 1], ["3", 1]]}
    with pytest.raises(ValueError):
        parse_character("1,2,3", G6)
    with pytest.raises(ValueError):
        Character.linear([0, 0])
