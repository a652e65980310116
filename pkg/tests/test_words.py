import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gbs.arith import iter_box
from gbs.confining import Bound, get_subset
from gbs.group import BSGroup, GroupElement, in_Zrho, rho_minus, rho_plus, zrho_length
from gbs.words import (
    QLetter, Truncation, WordContext, WordError, ZLetter, certified_ball, commute, eval_word,
    focal_lower_bound, four_point_delta, k0_bound, k0_from_l0, normal_form, q_additive_length,
    q_additive_length_bruteforce, short_length, tau_word, unit_ball_split, word_length_bfs, word_length_tau,
)

G = BSGroup(6)
QM = WordContext(G, get_subset(G, "Q_-"), rho_minus(G))
Q1 = WordContext(G, get_subset(G, "Q_1"), rho_plus(G, 1))
FULL = WordContext(G, get_subset(G, "Z[1/k]"), rho_plus(G, 1))


def random_word(ctx, rng, max_len=12):
    qs = [x for x in ctx.Q.enumerate(Bound(10, 2)) if x]
    zs = [z for z in iter_box(G.n, 3) if any(z) and in_Zrho(ctx.rho, z)]
    return [QLetter(rng.choice(qs)) if rng.random() < 0.5 else ZLetter(rng.choice(zs))
            for _ in range(rng.randint(0, max_len))]


def test_eval_word():
    w = [FULL.z((1, 0)), FULL.q(1), FULL.z((-1, 0))]
    assert eval_word(FULL, w) == GroupElement(Fraction(2), (0, 0))
    assert eval_word(QM, []) == G.identity
    assert eval_word(QM, [QM.q(Fraction(1, 6))] * 2) == GroupElement(Fraction(1, 3), (0, 0))


def test_letters_are_checked():
    with pytest.raises(WordError):
        QM.q(1)
    with pytest.raises(WordError):
        QM.z((-1, -1))
    with pytest.raises(WordError):
        Q1.q(Fraction(1, 2))


def test_commute():
    assert commute(Q1, ZLetter((1, 0)), QLetter(Fraction(1, 3)), "right").x == Fraction(2, 3)
    assert commute(Q1, ZLetter((0, 0)), QLetter(Fraction(1, 3)), "left").x == Fraction(1, 3)
    # rho_-(-1, -1) = log 6 > 0 even though the letter is outside Z_rho
    assert commute(QM, ZLetter((-1, -1)), QLetter(Fraction(1, 6)), "right").x == Fraction(1, 36)
    with pytest.raises(WordError):
        commute(Q1, ZLetter((-1, 0)), QLetter(Fraction(1, 3)), "right")


@pytest.mark.parametrize("ctx", [QM, Q1], ids=["Q_-", "Q_1"])
def test_normal_form_random_words(ctx):
    rng = random.Random(7)
    for _ in range(1500):
        w = random_word(ctx, rng)
        nf = normal_form(ctx, w)
        assert eval_word(ctx, nf.letters) == eval_word(ctx, w)
        assert len(nf) <= len(w)
        assert all(ctx.rho.sign(l.z) < 0 for l in nf.tau1)
        assert all(ctx.rho.sign(l.z) >= 0 for l in nf.tau3)
        assert all(ctx.Q.member(l.x) for l in nf.tau2)
        ctx.check(nf.letters)


def test_normal_form_examples():
    q = Q1.q(Fraction(1, 3))
    z = Q1.z((1, 0))
    nf = normal_form(Q1, [q, z])
    assert (nf.tau1, nf.tau2, nf.tau3) == ([], [q], [z])
    nf = normal_form(Q1, [z, q, Q1.z((-1, 0))])
    assert nf.tau2 == [QLetter(Fraction(2, 3))] and nf.tau1 == [] and nf.tau3 == []
    fixed = normal_form(Q1, nf.letters)
    assert fixed.letters == nf.letters


def test_q_additive_length():
    Qm, Qi = QM.Q, Q1.Q
    assert q_additive_length(Qm, Fraction(0)) == 0
    assert q_additive_length(Qm, Fraction(1)) == 2
    assert q_additive_length(Qi, Fraction(1, 3)) == 1
    assert q_additive_length(Qi, Fraction(1, 2)) == math.inf
    assert q_additive_length(Qm, Fraction(-7, 2)) == 4


@given(st.integers(-500, 500), st.sampled_from([1, 2, 3, 4, 6, 36]))
def test_unit_ball_split(a, d):
    h = Fraction(a, d)
    parts = unit_ball_split(h, 6)
    assert sum(parts, Fraction(0)) == h
    assert all(abs(p) < 1 for p in parts)
    assert len(parts) == q_additive_length(QM.Q, h)


def test_unit_ball_length_against_bruteforce():
    for h in [Fraction(a, 6) for a in range(-17, 18)]:
        assert q_additive_length(QM.Q, h) == q_additive_length_bruteforce(QM.Q, h, Bound(40, 2))


def test_word_length_tau_examples():
    assert word_length_tau(QM, G.identity).length == 0
    assert word_length_tau(QM, GroupElement(Fraction(1, 36), (0, 0))).length == 1
    g = GroupElement(Fraction(36), (0, 0))
    assert word_length_tau(QM, g).length == word_length_bfs(QM, g, Truncation(1, 5, 1, 9)).length


@pytest.mark.parametrize("ctx", [QM, Q1], ids=["Q_-", "Q_1"])
def test_tau_word_realizes_tau_length(ctx):
    rng = random.Random(11)
    for _ in range(40):
        g = eval_word(ctx, random_word(ctx, rng, 6))
        word = tau_word(ctx, g, 4)
        ctx.check(word)
        assert eval_word(ctx, word) == g
        assert len(word) == word_length_tau(ctx, g, 4).length


def test_word_length_bfs_examples():
    tr = Truncation(1, 5, 1, 6)
    bfs = word_length_bfs(QM, GroupElement(Fraction(2), (0, 0)), tr)
    assert bfs.length == 3 and bfs.certified
    assert 2 <= bfs.length <= 2 * zrho_length(QM.rho, (1, 1)) + 1
    assert word_length_bfs(QM, GroupElement(Fraction(1, 2), (0, 0)), tr).length == 1
    wide = Truncation(1, 1, 3, 6)
    for z in [(1, 0), (2, 1), (-3, 2), (0, 2), (3, 3)]:
        assert word_length_bfs(QM, GroupElement(Fraction(0), z), wide).length == zrho_length(QM.rho, z)


def test_bfs_depth_exhausted():
    res = word_length_bfs(Q1, GroupElement(Fraction(1, 2**6), (0, 0)), Truncation(1, 3, 1, 5))
    assert res.length is None and res.lower_bound == 6


def test_short_length():
    assert short_length(QM, GroupElement(Fraction(3, 2), (0, 0))) == 2
    assert short_length(QM, GroupElement(Fraction(5, 2), (0, 0))) is None
    assert short_length(Q1, GroupElement(Fraction(-7, 2), (-1, -1))) == 2


@pytest.mark.parametrize("ctx,tr", [(QM, Truncation(1, 5, 1, 4)), (Q1, Truncation(1, 3, 1, 4))],
                         ids=["Q_-", "Q_1"])
def test_oracles_agree_radius_3(ctx, tr):
    ball = certified_ball(ctx, tr, 3)
    assert ball
    for g, d in ball:
        assert word_length_tau(ctx, g, 4).length == d


def test_k0():
    assert [k0_from_l0(l) for l in (0, 1, 2)] == [2, 15, 34]
    for l in range(1, 6):
        assert k0_from_l0(l) == math.ceil(8 * math.log2(l + 2) * l) + 2
    assert k0_bound(Q1) == 2
    assert k0_bound(QM) == 34


def test_focal_lower_bound():
    assert focal_lower_bound(Q1, (1, 0), 6) == 11
    assert focal_lower_bound(Q1, (1, 0), 1) == 1
    vals = [focal_lower_bound(QM, (-1, -1), i) for i in range(1, 8)]
    assert vals == sorted(vals)


def test_growth_bounded_by_conjugation():
    tr = Truncation(1, 3, 1, 12)
    prev = 0
    for j in range(1, 4):
        g = GroupElement(G.gamma((-j, 0), Fraction(1)), (0, 0))
        l = word_length_bfs(Q1, g, tr, certify=False).length
        assert prev < l <= 2 * j + 1
        prev = l


def test_four_point_delta():
    line = [0, 1, 3, 7, 8]
    assert four_point_delta(line, lambda a, b: abs(a - b)) == 0
    assert four_point_delta([5] * 4, lambda a, b: abs(a - b)) == 0
    # the four corners of a unit square in the l1 metric
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    l1 = lambda a, b: abs(a[0] - b[0]) + abs(a[1] - b[1])
    assert four_point_delta(sq, l1) == 1
    with pytest.raises(ValueError):
        four_point_delta(line[:3], lambda a, b: 0)
