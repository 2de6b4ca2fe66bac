import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ddlab.exact import X, Y, Z
from ddlab.grid import build_L0
from ddlab.lines import (
    COINCIDENT,
    PARALLEL,
    SKEW,
    GenericityFailure,
    Line3,
    cross_check_Gk,
    incidence_histogram,
    incidence_histogram_bruteforce,
    intersect,
    max_coplanar_cluster,
    pairwise_skew,
    project_generic,
    project_with_retries,
    regulus_line_count,
)
from ddlab.motions import line_for_pair, rotation
from ddlab.points import PointSet2, random_point_set

import oracles

X_AXIS = Line3((0, 0, 0), (1, 0, 0))
Y_AXIS = Line3((0, 0, 0), (0, 1, 0))
Z_AXIS = Line3((0, 0, 0), (0, 0, 1))
SQUARE = PointSet2([(0, 0), (1, 0), (0, 1), (1, 1)])


def test_canonical_form():
    a = Line3((1, 2, 3), (2, 4, 6))
    b = Line3((0, 0, 0), (-1, -2, -3))
    assert a == b and hash(a) == hash(b)
    assert Line3.through((0, 0, 1), (1, 0, 1)) == Line3((5, 0, 1), (3, 0, 0))
    with pytest.raises(ValueError):
        Line3((0, 0, 0), (0, 0, 0))


def test_intersect_examples():
    r = intersect(X_AXIS, Y_AXIS)
    assert r.kind == "point" and r.point == (0, 0, 0)
    assert intersect(X_AXIS, Line3((0, 1, 0), (1, 0, 0))) is PARALLEL
    assert intersect(X_AXIS, Line3((0, 0, 1), (0, 1, 0))) is SKEW
    assert intersect(X_AXIS, Line3((7, 0, 0), (-2, 0, 0))) is COINCIDENT


rat = st.fractions(min_value=-6, max_value=6, max_denominator=5)
vec = st.tuples(rat, rat, rat).filter(lambda v: v != (0, 0, 0))


@settings(max_examples=200, deadline=None)
@given(st.tuples(rat, rat, rat), vec, st.tuples(rat, rat, rat), vec)
def test_intersect_matches_oracle(b1, d1, b2, d2):
    l1, l2 = Line3(b1, d1), Line3(b2, d2)
    r = intersect(l1, l2)
    x = oracles.line_meet(b1, d1, b2, d2)
    if r.kind == "point":
        assert r.point == x
        assert l1.contains(x) and l2.contains(x)
    else:
        assert x is None


def test_concurrent_axes():
    h = incidence_histogram([X_AXIS, Y_AXIS, Z_AXIS])
    assert h.rich_points == {(0, 0, 0): 3}
    assert h.s_counts == {2: 1, 3: 1}


def test_planar_quadrilateral():
    lines = [Line3((0, 0, 0), (1, 0, 0)), Line3((0, 0, 0), (0, 1, 0)),
             Line3((0, 1, 0), (1, 2, 0)), Line3((3, 0, 0), (-1, 5, 0))]
    h = incidence_histogram(lines)
    assert len(h.rich_points) == 6 and set(h.rich_points.values()) == {2}
    assert h.rich_points == incidence_histogram_bruteforce(lines).rich_points


def test_L0_S2_matches_lattice_oracle():
    lines = build_L0(2)
    h = incidence_histogram(lines)
    assert h.rich_points == oracles.brute_rich_points([(l.base, l.dir) for l in lines])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_histogram_matches_oracle_on_random_lines(seed):
    rng = random.Random(seed)
    raw = []
    for _ in range(12):
        b = tuple(rng.randint(-2, 2) for _ in range(3))
        d = tuple(rng.randint(-1, 1) for _ in range(3))
        if d != (0, 0, 0):
            raw.append((b, d))
    lines = [Line3(b, d) for b, d in raw]
    h = incidence_histogram(lines)
    uniq = list({Line3(b, d): (b, d) for b, d in raw}.values())
    expect = {x: m for x, m in oracles.brute_rich_points(uniq).items() if m >= 2}
    assert h.rich_points == expect
    assert h.s_counts == oracles.s_counts(list(expect.values()))


def test_parallel_workers_agree():
    lines = build_L0(3)  # 81 lines, padded above the parallel threshold
    lines = lines + [line_for_pair(p, q) for p in SQUARE for q in SQUARE]
    lines = lines + [Line3((i, 0, 5), (1, i, 2)) for i in range(150)]
    assert incidence_histogram(lines, workers=3) == incidence_histogram(lines, workers=1)


def test_coplanar_cluster():
    lines = [Line3((0, i, 0), (1, i, 0)) for i in range(5)] + [Line3((0, 0, 1), (0, 1, 1))]
    plane, count = max_coplanar_cluster(lines)
    assert count == 5 and plane.is_proportional(Z)


def test_Lp_pairwise_skew():
    rng = random.Random(1)
    p = (Fraction(1, 3), Fraction(-2))
    qs = {(Fraction(rng.randint(-20, 20), rng.randint(1, 4)), Fraction(rng.randint(-20, 20), rng.randint(1, 4)))
          for _ in range(20)}
    lines = [line_for_pair(p, q) for q in qs if q != p]
    assert pairwise_skew(lines)
    assert max_coplanar_cluster(lines)[1] == 1


def test_regulus_examples():
    ls = [Line3((0, c, 0), (1, 0, c)) for c in range(5)]
    other = Line3((5, 5, 5), (1, 1, 7))
    quad, count = regulus_line_count(ls + [other], *ls[:3])
    assert quad.is_proportional(Z - X * Y) and count == 5


def test_regulus_line_meeting_two_seeds():
    seeds = [Line3((0, c, 0), (1, 0, c)) for c in range(3)]
    # meets seed 0 at (0,0,0) and seed 1 at (1,1,1); skips seed 2
    extra = Line3((0, 0, 0), (1, 1, 1))
    assert intersect(extra, seeds[2]) is SKEW
    _, count = regulus_line_count(seeds + [extra], *seeds)
    assert count == 3


def test_regulus_rejects_intersecting_seeds():
    with pytest.raises(ValueError):
        regulus_line_count([X_AXIS], X_AXIS, Y_AXIS, Line3((0, 0, 1), (1, 1, 0)))


def test_projection_keeps_concurrency():
    pr = project_generic([X_AXIS, Y_AXIS, Z_AXIS], (1, 2, 5))
    assert len(pr.lines2d) == 3
    assert list(pr.lines_through_images.values()) == [3]


def test_projection_of_skew_lines():
    pr = project_generic([X_AXIS, Line3((0, 0, 1), (0, 1, 0))], (1, 2, 5))
    assert len(set(pr.lines2d)) == 2
    assert pr.rich_points2d == {}


def test_projection_rejects_parallel_direction():
    with pytest.raises(GenericityFailure):
        project_generic([X_AXIS, Y_AXIS], (1, 0, 0))


def test_projection_L0():
    pr = project_with_retries(build_L0(2), random.Random(5))
    assert len(set(pr.lines2d)) == 16


def test_cross_check_unit_square():
    for k in range(2, 6):
        a, b = cross_check_Gk(SQUARE, k)
        assert a == b
    assert cross_check_Gk(SQUARE, 5) == (0, 0)


def test_cross_check_four_fold_center():
    a, b = cross_check_Gk(SQUARE, 4)
    assert a == b >= 3
    c = rotation(Fraction(1, 2), Fraction(1, 2), -1)
    assert all(c.apply(p) in SQUARE for p in SQUARE)


def test_cross_check_matches_oracle():
    rng = random.Random(11)
    for _ in range(5):
        P = random_point_set(rng.randint(2, 6), rng)
        rot = oracles.brute_gk_rotations(P.points)
        for k in range(2, P.N + 1):
            a, b = cross_check_Gk(P, k)
            assert a == b == rot[k]
