from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ddlab.exact import X, Y, Z
from ddlab.io import (
    InputError,
    format_lines,
    format_points,
    format_rational,
    parse_lines,
    parse_points,
    parse_points3,
    parse_poly,
    parse_rational,
    poly_terms,
    read_points,
)
from ddlab.lines import Line3


def test_rationals():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational(" 7 ") == 7
    assert format_rational(Fraction(-1, 2)) == "-1/2"
    assert format_rational(3) == "3/1"
    for bad in ("1/0", "1.5", "", "a/b", "1/-2"):
        with pytest.raises(InputError):
            parse_rational(bad)


@settings(max_examples=200)
@given(st.fractions())
def test_rational_round_trip(x):
    assert parse_rational(format_rational(x)) == x


def test_points_csv():
    P = parse_points("# square\n0,0\n1,0\n\n0,1\n1/1,1\n")
    assert P.N == 4
    with pytest.raises(InputError, match="line 2"):
        parse_points("0,0\n1\n")
    with pytest.raises(InputError, match="duplicate"):
        parse_points("0,0\n0/3,0\n")
    with pytest.raises(InputError):
        parse_points("")


def test_points3_and_lines():
    pts = parse_points3("0,0,0\n1/2,1,-1\n")
    assert pts[1] == (Fraction(1, 2), 1, -1)
    assert parse_points3(format_points(pts)) == pts
    lines = parse_lines("0,0,0,1,0,0\n1,1,1,0,2,0\n")
    assert lines == [Line3((0, 0, 0), (1, 0, 0)), Line3((1, 0, 1), (0, 1, 0))]
    assert parse_lines(format_lines(lines)) == lines
    with pytest.raises(InputError, match="zero direction"):
        parse_lines("0,0,0,0,0,0\n")


def test_poly_format():
    p = parse_poly("1:2,0,0; 1:0,2,0 -1:0,0,2")
    assert p == X * X + Y * Y - Z * Z
    assert parse_poly(" ".join(poly_terms(p))) == p
    with pytest.raises(InputError):
        parse_poly("1:2,0")
    with pytest.raises(InputError):
        parse_poly("x^2")
    with pytest.raises(InputError):
        parse_poly("   ")


def test_missing_file(tmp_path):
    with pytest.raises(InputError, match="cannot read"):
        read_points(tmp_path / "nope.csv")
    bad = tmp_path / "bad.csv"
    bad.write_bytes(b"\xff\xfe")
    with pytest.raises(InputError):
        read_points(bad)
