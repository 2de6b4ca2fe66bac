import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ddlab.lines import Line3
from ddlab.motions import (
    Rotational,
    Translation,
    decode_motion,
    elekes_map,
    line_for_pair,
    motion_fibers,
    overlap,
    param_point,
    partial_symmetry_counts,
    quadformula_total,
    recover_q,
    rho,
    rho_inverse,
    rotation,
    tangent_field,
    translation,
    translation_partial_symmetries,
)
from ddlab.points import PointSet2, quadruple_count, random_point_set, sqdist

import oracles

SQUARE = PointSet2([(0, 0), (1, 0), (0, 1), (1, 1)])
rat = st.fractions(min_value=-10, max_value=10, max_denominator=9)
pt2 = st.tuples(rat, rat)


def test_apply_examples():
    assert translation(1, 2).apply((0, 0)) == (1, 2)
    g = rotation(0, 0, -1)
    assert (g.cos, g.sin) == (0, 1)
    assert g.apply((1, 0)) == (0, 1)
    assert rotation(1, 1, Fraction(7, 3)).apply((1, 1)) == (1, 1)


def test_elekes_examples():
    assert elekes_map((0, 0), (1, 0), (0, 0), (0, 1)) == rotation(0, 0, -1)
    assert elekes_map((0, 0), (1, 0), (2, 3), (3, 3)) == translation(2, 3)
    assert elekes_map((0, 0), (1, 0), (0, 0), (1, 0)) == translation(0, 0)
    with pytest.raises(ValueError):
        elekes_map((0, 0), (1, 0), (0, 0), (2, 0))


def test_rho_examples():
    assert rho(rotation(0, 0, -1)) == (0, 0, -1)
    with pytest.raises(ValueError):
        rho(translation(1, 0))


@settings(max_examples=200, deadline=None)
@given(rat, rat, rat)
def test_rho_round_trip(a, b, c):
    assert rho(rho_inverse((a, b, c))) == (a, b, c)


def test_line_for_pair_examples():
    assert line_for_pair((1, 0), (0, 1)) == Line3((Fraction(1, 2), Fraction(1, 2), 0),
                                                  (Fraction(1, 2), Fraction(1, 2), 1))
    assert line_for_pair((1, 1), (1, 1)) == Line3((1, 1, 0), (0, 0, 1))
    x = param_point((1, 0), (0, 1), -1)
    assert x == (0, 0, -1)
    assert rho_inverse(x).apply((1, 0)) == (0, 1)


def test_recover_q_examples():
    q, V = recover_q((0, 0), (0, 0, 5))
    assert q == (0, 0) and V == (0, 0, 26)
    assert recover_q((1, 0), (0, 0, -1))[0] == (0, 1)
    # (1/2, 1/2, -1) lies on the line of the pair ((1,0), (1,1)), not ((1,0), (0,1))
    assert recover_q((1, 0), (Fraction(1, 2), Fraction(1, 2), -1))[0] == (1, 1)


@settings(max_examples=200, deadline=None)
@given(pt2, pt2, rat)
def test_param_point_motion_maps_p_to_q(p, q, t):
    x = param_point(p, q, t)
    assert rho_inverse(x).apply(p) == q
    assert line_for_pair(p, q).contains(x)


@settings(max_examples=200, deadline=None)
@given(pt2, st.tuples(rat, rat, rat))
def test_recover_q_property(p, x):
    q, V = recover_q(p, x)
    assert line_for_pair(p, q).contains(x)
    assert V[2] == x[2] ** 2 + 1
    fields = tangent_field(p)
    assert tuple(f.evaluate(x) for f in fields) == V


def test_decode_round_trip():
    for g in (translation(Fraction(-1, 2), 3), rotation(1, Fraction(2, 7), -5)):
        assert decode_motion(g.encode()) == g
    with pytest.raises(ValueError):
        decode_motion("Q:1,2")


@settings(max_examples=100, deadline=None)
@given(pt2, pt2, st.integers(0, 2 ** 32))
def test_elekes_postcondition(p1, p2, seed):
    if p1 == p2:
        return
    # a random motion image of (p1, p2)
    rng = random.Random(seed)
    g = rotation(rng.randint(-3, 3), rng.randint(-3, 3), Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
    p3, p4 = g.apply(p1), g.apply(p2)
    h = elekes_map(p1, p2, p3, p4)
    assert h.apply(p1) == p3 and h.apply(p2) == p4
    assert sqdist(p1, p2) == sqdist(p3, p4)


def test_unit_square_translations():
    st2 = translation_partial_symmetries(SQUARE, 2)
    assert st2.overlaps[(1, 0)] == 2
    brute = {}
    for v in {(b[0] - a[0], b[1] - a[1]) for a in SQUARE for b in SQUARE}:
        brute[v] = sum(1 for p in SQUARE if (p[0] + v[0], p[1] + v[1]) in SQUARE)
    assert st2.overlaps == brute
    assert st2.count == sum(1 for m in brute.values() if m >= 2)


def test_k_equals_N_generic():
    P = PointSet2([(0, 0), (1, 0), (0, 3), (5, 7)])
    assert translation_partial_symmetries(P, P.N).count == 1


def test_translation_quadruples_bounded():
    rng = random.Random(3)
    for _ in range(50):
        P = random_point_set(rng.randint(2, 10), rng)
        assert translation_partial_symmetries(P, 2).quadruples <= P.N ** 3


def test_unit_square_motions_match_oracle():
    fib = motion_fibers(SQUARE)
    gk = partial_symmetry_counts(SQUARE, fib)
    assert gk == oracles.brute_gk(SQUARE.points)
    assert quadformula_total(gk) == quadruple_count(SQUARE) == 80
    assert sum(fib.values()) == 80
    for g, f in fib.items():
        m = overlap(SQUARE, g)
        assert f == m * (m - 1)
    assert sum(isinstance(g, Rotational) for g in fib) + sum(isinstance(g, Translation) for g in fib) == len(fib)
