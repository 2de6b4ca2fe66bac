import math
from collections import Counter
from fractions import Fraction

import pytest

from ddlab.grid import (
    THREE_OVER_PI_SQ,
    build_L0,
    fx_overlap,
    in_closed_slab,
    line_count_1d,
    pair_for_line,
    qp_growth_report,
    rich_heights,
    scaling_report,
    slab_histogram_oracle,
    totient_sum,
    totient_sum_check,
    totient_sum_gcd,
)
from ddlab.lines import Line3, incidence_histogram
from ddlab.motions import line_for_pair
from ddlab.points import generate_grid, quadruple_count

import oracles


def test_L0_S1():
    (l,) = build_L0(1)
    assert l == Line3((1, 1, 0), (0, 0, 1)) == line_for_pair((1, 1), (1, 1))


def test_L0_S2_distinct():
    lines = build_L0(2)
    assert len(lines) == len(set(lines)) == 16


def test_L0_matches_pair_formula_everywhere():
    build_L0(3, cross_check=None)


def test_pair_formula_sample():
    p, q = pair_for_line(1, 2, 3, 1)
    assert (p, q) == ((0, 0), (2, 4))
    assert line_for_pair(p, q) == Line3.through((1, 2, 0), (3, 1, 1))


def test_L0_matches_oracle_construction():
    assert build_L0(3) == [Line3(b, d) for b, d in oracles.brute_L0(3)]


@pytest.mark.parametrize("S", [2, 3, 4, 5])
def test_line_count_1d_matches_enumeration(S):
    for p in range(1, S + 1):
        for r in range(1, S + 1):
            if math.gcd(p, r) != 1:
                continue
            c = Counter(r * a + p * cc for a in range(1, S + 1) for cc in range(1, S + 1))
            for w in range(0, (p + r) * S + 2):
                assert line_count_1d(w, p, r, S) == c.get(w, 0)


def test_height_half_has_S_squared_overlap():
    S = 6
    rec = fx_overlap(1, 2, S)
    assert rec.max_overlap == S * S
    assert rec.height == Fraction(1, 2)


def test_fx_overlap_rejects_bad_height():
    with pytest.raises(ValueError):
        fx_overlap(2, 4, 3)
    with pytest.raises(ValueError):
        fx_overlap(3, 2, 3)


def test_boundary_plane_multiplicities():
    S = 3
    h = slab_histogram_oracle(S, with_points=True)
    base = {x: m for x, m in h.rich_points.items() if x[2] == 0}
    assert len(base) == S * S and set(base.values()) == {S * S}


def test_rich_heights_cover_all_interior_meets():
    S = 4
    h = incidence_histogram(build_L0(S)).restricted(in_closed_slab)
    heights = {x[2] for x in h.rich_points if 0 < x[2] < 1}
    assert heights <= {Fraction(p, q) for p, q in rich_heights(S)}


@pytest.mark.parametrize("S", [2, 3, 4])
def test_oracle_point_for_point(S):
    lines = build_L0(S)
    brute = incidence_histogram(lines).restricted(in_closed_slab)
    oracle = slab_histogram_oracle(S, with_points=True)
    assert brute.rich_points == oracle.rich_points
    assert brute.s_counts == oracle.s_counts
    assert slab_histogram_oracle(S).s_counts == oracle.s_counts


def test_oracle_S2_against_independent_lattice_oracle():
    raw = oracles.brute_L0(2)
    rich = {x: m for x, m in oracles.brute_rich_points(raw).items() if 0 <= x[2] <= 1}
    assert slab_histogram_oracle(2, with_points=True).rich_points == rich


def test_scaling_S4_boundary():
    rep = scaling_report(4, range(2, 17))
    row = {k: s for k, s, _ in rep.rows}
    assert row[16] >= 32


def test_scaling_beyond_max_multiplicity_is_zero():
    rep = scaling_report(3, range(2, 30))
    assert {k: s for k, s, _ in rep.rows}[29] == 0


def test_scaling_rejects_bad_range():
    with pytest.raises(ValueError):
        scaling_report(3, range(1, 5))
    with pytest.raises(ValueError):
        scaling_report(3, [])


def test_scaling_S8_slope_and_band():
    rep = scaling_report(8, range(2, 65))
    assert -2.5 <= rep.slope <= -1.5
    assert rep.band <= 10


def test_totient_examples():
    assert totient_sum(10) == 32 == sum(oracles.phi(q) for q in range(1, 11))
    assert totient_sum(1) == 1
    t = totient_sum_check(10)
    assert abs(t.main_term_approx - 30.396) < 1e-3
    assert totient_sum_check(10_000).relative_error <= Fraction(5, 1000)


def test_totient_implementations_agree():
    for x in (1, 2, 17, 100, 333):
        assert totient_sum(x) == totient_sum_gcd(x)


def test_constant_precision():
    assert abs(float(THREE_OVER_PI_SQ) - 3 / math.pi ** 2) < 1e-15


def test_growth_S1():
    (row,) = qp_growth_report([1])
    assert (row.S, row.N) == (1, 25)
    assert row.Q == quadruple_count(generate_grid(1))
    assert math.isfinite(row.ratio) and row.ratio > 0


def test_growth_rejects_empty_and_zero():
    with pytest.raises(ValueError):
        qp_growth_report([])
    with pytest.raises(ValueError):
        qp_growth_report([0])
