import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gbs.group import BSGroup, Character, GroupElement, equivalent_characters, rho_minus, rho_plus
from gbs.plane import busemann_exact
from gbs.structures import (
    Order, all_canonical_structures, bns_complement, compare, elliptic, export_poset, in_bns,
    lineal, quasi_parabolic,
)
from gbs.tree import BassSerreTree

G6, G12, G8 = BSGroup(6), BSGroup(12), BSGroup(8)


def random_lineals(G, count, seed=0):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        v = [rng.randint(-5, 5) for _ in range(G.n)]
        if any(v):
            out.append(lineal(Character.linear(v)))
    return out


@pytest.mark.parametrize("G", [G6, G12])
def test_canonical_counts(G):
    structs = all_canonical_structures(G)
    kinds = [s.kind for s in structs]
    assert kinds.count("qp") == G.n + 1 == 3
    assert kinds.count("lineal") == 3 and kinds.count("elliptic") == 1


def test_compare_examples():
    assert compare(elliptic(), quasi_parabolic(G6, "plane")) is Order.LESS
    assert compare(quasi_parabolic(G6, "tree:1"), quasi_parabolic(G6, "tree:2")) is Order.INCOMPARABLE
    assert compare(lineal(rho_plus(G6, 1)), quasi_parabolic(G6, "tree:1")) is Order.LESS
    assert compare(quasi_parabolic(G6, "plane"), lineal(rho_minus(G6))) is Order.GREATER
    assert compare(lineal(rho_plus(G6, 1)), quasi_parabolic(G6, "plane")) is Order.INCOMPARABLE
    assert compare(lineal(rho_plus(G6, 1).scaled(4)), lineal(rho_plus(G6, 1))) is Order.EQUAL


@pytest.mark.parametrize("G", [G6, G12, G8])
def test_partial_order(G):
    pool = all_canonical_structures(G) + random_lineals(G, 20)
    flip = {Order.LESS: Order.GREATER, Order.GREATER: Order.LESS,
            Order.EQUAL: Order.EQUAL, Order.INCOMPARABLE: Order.INCOMPARABLE}
    table = {(a, b): compare(a, b) for a in pool for b in pool}
    for a in pool:
        assert table[a, a] is Order.EQUAL
    for a, b in itertools.product(pool, repeat=2):
        assert table[b, a] is flip[table[a, b]]
    for a, b, c in itertools.product(pool, repeat=3):
        if table[a, b] is Order.LESS and table[b, c] is Order.LESS:
            assert table[a, c] is Order.LESS


@pytest.mark.parametrize("G", [G6, G12, G8])
def test_each_qp_dominates_one_lineal(G):
    structs = all_canonical_structures(G)
    pool = structs + random_lineals(G, 20, seed=1)
    lineal_classes = []
    for s in pool:
        if s.kind == "lineal" and not any(equivalent_characters(s.character, c) for c in lineal_classes):
            lineal_classes.append(s.character)
    for qp in (s for s in structs if s.kind == "qp"):
        below = [c for c in lineal_classes if compare(lineal(c), qp) is Order.LESS]
        assert len(below) == 1
        assert equivalent_characters(below[0], qp.busemann_class)


def test_bns():
    assert [c.values for c in bns_complement(12)] == [(1, 0), (0, 1)]
    assert in_bns(rho_minus(G12), 12)
    assert not in_bns(rho_plus(G12, 1).scaled(2), 12)
    assert in_bns(Character.linear([-1, 0]), 12)


@given(st.integers(-9, 9), st.integers(-9, 9), st.integers(1, 30))
def test_bns_scaling(a, b, c):
    if not (a or b):
        return
    chi = Character.linear([a, b])
    assert in_bns(chi, 6) == in_bns(chi.scaled(c), 6)
    excluded = (a > 0 and b == 0) or (a == 0 and b > 0)
    assert in_bns(chi, 6) == (not excluded)


def test_models_match_busemann_classes():
    rng = random.Random(4)
    for G in (G6, G12):
        for i in range(1, G.n + 1):
            T = BassSerreTree(G, i)
            qp = quasi_parabolic(G, f"tree:{i}")
            for _ in range(20):
                z = tuple(rng.randint(-4, 4) for _ in range(G.n))
                g = GroupElement(Fraction(rng.randint(-9, 9)), z)
                assert T.busemann(g) == qp.busemann_class.exact(z)
        qp = quasi_parabolic(G, "plane")
        for z in [(1, 0), (0, 1), (2, -3)]:
            g = GroupElement(Fraction(0), z)
            # busemann_exact is a positive multiple of the stored class
            assert busemann_exact(G, g).sign() == qp.busemann_class.sign(z)
        assert equivalent_characters(qp.busemann_class, rho_minus(G))


def test_export_dot():
    dot = export_poset(6, "dot")
    assert dot == export_poset(6, "dot")
    nodes = [l for l in dot.splitlines() if "shape=" in l]
    assert sum('"qp:' in l for l in nodes) == 3
    assert sum('"lineal:' in l and "lineal:*" not in l for l in nodes) == 3
    assert '"elliptic" [shape=box];' in dot
    assert sum('"qp:' in l for l in export_poset(8, "dot").splitlines() if "shape=" in l) == 2
    with pytest.raises(ValueError):
        export_poset(6, "svg")


def test_export_json_edges_are_less():
    doc = json.loads(export_poset(12, "json"))
    by_id = {s.label: s for s in all_canonical_structures(12)}
    for e in doc["edges"]:
        if e["hi"] == "lineal:*":
            continue
        assert compare(by_id[e["lo"]], by_id[e["hi"]]) is Order.LESS
    qps = [n for n in doc["nodes"] if n["kind"] == "qp"]
    assert all(any(e["hi"] == n["id"] and e["lo"].startswith("lineal:") for e in doc["edges"]) for n in qps)
