from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from ddlab.exact import (
    MultiPoly,
    UniPoly,
    X,
    Y,
    Z,
    count_real_roots,
    determinant,
    directional_form,
    isolate_real_roots,
    nullspace,
    rank,
    restrict_to_line,
    sample_between_roots,
    solve,
    squarefree_part,
)
from ddlab.exact.univariate import INF

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
small_int = st.integers(-5, 5)


def matvec(m, v):
    return [sum(Fraction(a) * b for a, b in zip(row, v)) for row in m]


# -- linear algebra -------------------------------------------------------------

def test_nullspace_one_equation():
    (v,) = nullspace([[1, 1]])
    assert v[0] == -v[1] != 0


def test_nullspace_identity_empty():
    assert nullspace([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == []


def test_nullspace_rank_one_has_dimension_two():
    m = [[1, 2, 3], [2, 4, 6]]
    basis = nullspace(m)
    assert len(basis) == 2
    for v in basis:
        assert matvec(m, v) == [0, 0]
    assert rank([list(v) for v in basis]) == 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small_int, min_size=4, max_size=4), min_size=1, max_size=4))
def test_nullspace_rank_nullity(m):
    basis = nullspace(m)
    assert len(basis) + rank(m) == 4
    for v in basis:
        assert all(x == 0 for x in matvec(m, v))


def brute_det(m):
    n = len(m)
    tot = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1) ** inv
        for i in range(n):
            term *= m[i][perm[i]]
        tot += term
    return tot


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_matches_permutation_expansion(m):
    assert determinant(m) == brute_det(m)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small_int, min_size=3, max_size=3), min_size=2, max_size=4),
       st.lists(small_int, min_size=3, max_size=3))
def test_solve_consistent_system(m, x0):
    rhs = matvec(m, x0)
    x = solve(m, rhs)
    assert x is not None and matvec(m, x) == rhs


def test_solve_inconsistent():
    assert solve([[1, 1], [1, 1]], [0, 1]) is None


# -- multivariate polynomials ------------------------------------------------------

def test_restrict_sphere_to_x_axis():
    p = X * X + Y * Y + Z * Z - 1
    assert restrict_to_line(p, (0, 0, 0), (1, 0, 0)) == UniPoly([-1, 0, 1])


def test_restrict_whitney_ruling_is_zero():
    p = X * X - Y * Y * Z
    assert restrict_to_line(p, (0, 0, 4), (2, 1, 0)).is_zero()
    # from the origin the same direction gives 4 t^2
    assert restrict_to_line(p, (0, 0, 0), (2, 1, 0)) == UniPoly([0, 0, 4])


def test_restrict_plane_horizontal_line_is_zero():
    assert restrict_to_line(Z, (3, -1, 0), (1, 7, 0)).is_zero()


def test_restrict_rejects_zero_direction():
    with pytest.raises(ValueError):
        restrict_to_line(X, (0, 0, 0), (0, 0, 0))


def _v(i):
    return MultiPoly.var(6, 3 + i)


def _x(i):
    return MultiPoly.var(6, i)


def test_directional_form_order_one():
    assert directional_form(X * X, 1) == 2 * _x(0) * _v(0)


def test_directional_form_order_two():
    expect = 2 * (_x(2) * _v(0) * _v(1) + _x(1) * _v(0) * _v(2) + _x(0) * _v(1) * _v(2))
    assert directional_form(X * Y * Z, 2) == expect


def test_directional_form_order_three_of_quadratic():
    assert directional_form(X * X + Y * Z, 3).is_zero()


polys = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
                        st.integers(-4, 4), max_size=5).map(lambda t: MultiPoly(3, t))
points3 = st.tuples(rationals, rationals, rationals)


@settings(max_examples=80, deadline=None)
@given(polys, polys, polys, points3)
def test_ring_laws_and_evaluation(p, q, r, x):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p * q).evaluate(x) == p.evaluate(x) * q.evaluate(x)
    assert (p - p).is_zero()


@settings(max_examples=60, deadline=None)
@given(polys, points3, points3, rationals)
def test_restriction_agrees_with_evaluation(p, b, d, t):
    if d == (0, 0, 0):
        return
    u = restrict_to_line(p, b, d)
    x = tuple(bi + t * di for bi, di in zip(b, d))
    assert u(t) == p.evaluate(x)


@settings(max_examples=40, deadline=None)
@given(polys, points3, points3)
def test_directional_form_is_taylor_coefficient(p, x, v):
    # p(x + t v) = sum_r t^r / r! * D_v^r p(x)
    u = restrict_to_line(p, x, v) if v != (0, 0, 0) else None
    if u is None:
        return
    fact = 1
    for r in (1, 2, 3):
        fact *= r
        form = directional_form(p, r)
        coeff = u.coeffs[r] if len(u.coeffs) > r else 0
        assert form.evaluate(tuple(x) + tuple(v)) == coeff * fact


def test_scale_to_integers():
    p = MultiPoly(3, {(1, 0, 0): Fraction(-1, 2), (0, 0, 0): Fraction(1, 3)})
    assert p.scale_to_integers() == MultiPoly(3, {(1, 0, 0): 3, (0, 0, 0): -2})


# -- Sturm counting ------------------------------------------------------------------

def test_sturm_examples():
    assert count_real_roots(UniPoly([-1, 0, 1]), Fraction(-2), Fraction(2)) == 2
    assert count_real_roots(UniPoly([1, 0, 1]), -INF, INF) == 0
    assert count_real_roots(UniPoly([1, -2, 1])) == 1


def test_squarefree_part():
    sq = squarefree_part(UniPoly([1, -2, 1]))
    assert sq.degree() == 1 and sq(1) == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=5), st.integers(0, 1),
       rationals, rationals)
def test_sturm_matches_known_roots(roots, extra_square, lo, hi):
    q = UniPoly([1])
    for r in roots:
        q = q * UniPoly([-r, 1])
    if extra_square:
        q = q * UniPoly([-roots[0], 1]) * UniPoly([1, 0, 1])
    distinct = set(roots)
    assert count_real_roots(q) == len(distinct)
    if lo < hi:
        expect = sum(1 for r in distinct if lo <= r <= hi)
        assert count_real_roots(q, lo, hi) == expect
    iso = isolate_real_roots(q)
    assert len(iso) == len(distinct)
    for a, b in iso:
        assert sum(1 for r in distinct if a <= r <= b) == 1
    samples = sample_between_roots(q)
    assert len(samples) == len(distinct) + 1
    assert all(q(s) != 0 for s in samples)
