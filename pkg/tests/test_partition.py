import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ddlab.exact import MultiPoly, X, Z
from ddlab.lines import Line3
from ddlab.partition import (
    BudgetExceeded,
    CellDecomposition,
    EngineFailure,
    Failure,
    bisect_exact,
    bisect_heuristic,
    bisection_margins,
    build_partition,
    cells_met_by_line,
    degree_for_step,
    max_sets,
    random_points3,
    verify_bisection,
)

CUBE = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]


def sides(f, S):
    vals = [f.evaluate(x) for x in S]
    return sum(v > 0 for v in vals), sum(v < 0 for v in vals)


def test_degree_schedule():
    assert [degree_for_step(j) for j in range(1, 7)] == [1, 1, 2, 2, 3, 4]
    assert [max_sets(d) for d in (1, 2, 3)] == [3, 9, 19]


def test_exact_two_points():
    S = [(0, 0, 0), (1, 0, 0)]
    f = bisect_exact([S], 1)
    assert verify_bisection(f, [S]) and f.degree() <= 1
    assert sides(f, S) == (1, 1)


def test_exact_three_collinear():
    S = [(0, 0, 0), (1, 0, 0), (2, 0, 0)]
    f = bisect_exact([S], 1)
    assert verify_bisection(f, [S]) and sides(f, S) == (1, 1)


def test_exact_three_sets_of_four():
    rng = random.Random(3)
    sets = [random_points3(4, rng, den=10) for _ in range(3)]
    f = bisect_exact(sets, 1)
    assert f.degree() <= 1 and verify_bisection(f, sets)


def test_exact_budget():
    rng = random.Random(0)
    with pytest.raises(BudgetExceeded):
        bisect_exact([random_points3(70, rng)], 1)


def test_exact_rejects_too_many_sets():
    with pytest.raises(ValueError):
        bisect_exact([[(i, 0, 0)] for i in range(4)], 1)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(1, 3), st.integers(1, 5))
def test_exact_always_verified(seed, nsets, size):
    rng = random.Random(seed)
    sets = [random_points3(size, rng, den=3) for _ in range(nsets)]
    f = bisect_exact(sets, 1)
    assert verify_bisection(f, sets)


def test_heuristic_matches_exact_verifier():
    rng = random.Random(8)
    sets = [random_points3(6, rng, den=50) for _ in range(3)]
    f = bisect_heuristic(sets, 1, random.Random(1))
    assert isinstance(f, MultiPoly) and verify_bisection(f, sets)
    g = bisect_exact(sets, 1)
    assert verify_bisection(g, sets)


def test_heuristic_coincident_points():
    sets = [[(1, 2, 3)] * 4, [(1, 2, 3)] * 3]
    f = bisect_heuristic(sets, 1, random.Random(0))
    assert verify_bisection(f, sets)
    assert all(f.evaluate(x) == 0 for S in sets for x in S)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_heuristic_duplicate_heavy_never_unverified(seed):
    rng = random.Random(seed)
    base = random_points3(3, rng, den=4)
    sets = [[rng.choice(base) for _ in range(rng.randint(1, 7))] for _ in range(3)]
    f = bisect_heuristic(sets, 1, random.Random(seed), restarts=3, iterations=60)
    if isinstance(f, Failure):
        assert f.margins and f.worst_excess > 0
    else:
        assert verify_bisection(f, sets)


def test_margins():
    S = [(0, 0, 0), (1, 0, 0), (2, 0, 0)]
    (m,) = bisection_margins(X - 1, [S])
    assert (m.size, m.positive, m.negative, m.excess) == (3, 1, 1, 0)
    (m,) = bisection_margins(X + 1, [S])
    assert m.excess == 2 and not verify_bisection(X + 1, [S])


@pytest.mark.parametrize("engine", ["exact", "heuristic"])
def test_cube(engine):
    dec = build_partition(CUBE, 3, engine, random.Random(0))
    assert all(len(v) <= 1 for v in dec.cells.values())
    dec.verify()


def test_J1_median_plane():
    pts = random_points3(9, random.Random(2))
    dec = build_partition(pts, 1, "exact")
    assert dec.degrees == [1]
    assert all(len(v) <= 4 for v in dec.cells.values())


def test_exact_24_points_J2():
    pts = random_points3(24, random.Random(4))
    dec = build_partition(pts, 2, "exact")
    assert all(len(v) <= 6 for v in dec.cells.values())


def test_heuristic_small_J4():
    pts = random_points3(100, random.Random(6))
    dec = build_partition(pts, 4, "heuristic", random.Random(6))
    assert max(len(v) for v in dec.cells.values()) <= 6
    assert dec.product_degree == sum(dec.degrees) == 6
    rep = dec.report()
    assert sum(rep["cell_sizes"].values()) == 16


def test_exact_engine_failure_wraps_budget():
    pts = random_points3(80, random.Random(0))
    with pytest.raises(EngineFailure) as e:
        build_partition(pts, 1, "exact")
    assert isinstance(e.value.partial, CellDecomposition)


def test_heuristic_failure_is_engine_failure():
    import ddlab.partition as part
    # a zero-restart budget cannot succeed on a nontrivial instance
    real = part.bisect_heuristic
    try:
        part.bisect_heuristic = lambda sets, d, rng: real(sets, d, rng, restarts=0)
        with pytest.raises(EngineFailure) as e:
            build_partition(random_points3(20, random.Random(1)), 1, "heuristic")
        assert isinstance(e.value.failure, Failure)
    finally:
        part.bisect_heuristic = real


def test_verify_detects_tampering():
    dec = build_partition(CUBE, 2, "exact")
    k = next(iter(dec.cells))
    dec.cells[k] = dec.cells[k] + [dec.cells[k][0]]
    with pytest.raises(AssertionError):
        dec.verify()


def test_line_crossing_examples():
    x_axis = Line3((0, 0, 0), (1, 0, 0))
    dec = CellDecomposition([], cut_polys=[X - 1, X + 1])
    assert cells_met_by_line(dec, x_axis).count == 3
    # one cut x^2 - 1: the outer intervals share the sign vector (+)
    dec = CellDecomposition([], cut_polys=[(X - 1) * (X + 1)])
    assert cells_met_by_line(dec, x_axis).count == 2
    dec = CellDecomposition([], cut_polys=[Z])
    assert cells_met_by_line(dec, x_axis).contained_in_z


def test_line_crossings_J3():
    rng = random.Random(9)
    dec = build_partition(random_points3(60, rng), 3, "heuristic", rng)
    for _ in range(40):
        base = [Fraction(rng.randint(-9, 9), 7) for _ in range(3)]
        d = [rng.randint(-3, 3) for _ in range(3)]
        if d == [0, 0, 0]:
            continue
        c = cells_met_by_line(dec, Line3(base, d))
        assert c.count <= dec.product_degree + 1
