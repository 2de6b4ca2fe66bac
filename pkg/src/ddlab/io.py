"""Text formats: point and line CSV files, polynomial term lists, rational strings.

CSV files hold one record per line; fields are decimal integers or ``num/den``
with a positive denominator; blank lines and lines starting with ``#`` are
ignored.  Polynomials are whitespace- or semicolon-separated ``coef:e1,e2,e3``
terms.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .exact.poly import MultiPoly
from .lines import Line3
from .points import PointSet2

RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")
TERM = re.compile(r"([+-]?\d+(?:/\d+)?):(\d+(?:,\d+)*)")


class InputError(ValueError):
    """Malformed or inconsistent input data."""


def parse_rational(text: str) -> Fraction:
    s = text.strip()
    if not RATIONAL.fullmatch(s):
        raise InputError(f"not an integer or num/den rational: {text!r}")
    num, _, den = s.partition("/")
    if den and int(den) == 0:
        raise InputError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _records(text: str, width: int, what: str) -> list[list[Fraction]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(",")
        if len(fields) != width:
            raise InputError(f"line {lineno}: a {what} needs {width} fields, got {len(fields)}")
        try:
            out.append([parse_rational(f) for f in fields])
        except InputError as e:
            raise InputError(f"line {lineno}: {e}") from None
    return out


def _read(source: str | Path) -> str:
    try:
        return Path(source).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {source}: {e}") from None
    except UnicodeDecodeError as e:
        raise InputError(f"{source} is not UTF-8: {e}") from None


def parse_points(text: str) -> PointSet2:
    recs = _records(text, 2, "point")
    try:
        return PointSet2(recs)
    except ValueError as e:
        raise InputError(str(e)) from None


def read_points(path: str | Path) -> PointSet2:
    return parse_points(_read(path))


def parse_points3(text: str) -> list[tuple[Fraction, Fraction, Fraction]]:
    recs = _records(text, 3, "point")
    pts = [tuple(r) for r in recs]
    if len(set(pts)) != len(pts):
        raise InputError("duplicate points in input")
    return pts


def read_points3(path: str | Path):
    return parse_points3(_read(path))


def parse_lines(text: str) -> list[Line3]:
    out = []
    for k, r in enumerate(_records(text, 6, "line"), 1):
        if not any(r[3:]):
            raise InputError(f"record {k}: zero direction vector")
        out.append(Line3(r[:3], r[3:]))
    return out


def read_lines(path: str | Path) -> list[Line3]:
    return parse_lines(_read(path))


def parse_poly(text: str, nvars: int = 3) -> MultiPoly:
    terms: dict[tuple[int, ...], Fraction] = {}
    tokens = [t for t in re.split(r"[\s;]+", text.strip()) if t and not t.startswith("#")]
    if not tokens:
        raise InputError("empty polynomial")
    for tok in tokens:
        m = TERM.fullmatch(tok)
        if not m:
            raise InputError(f"bad term {tok!r}; expected coef:e1,e2,e3")
        exps = tuple(int(e) for e in m.group(2).split(","))
        if len(exps) != nvars:
            raise InputError(f"term {tok!r} needs {nvars} exponents")
        terms[exps] = terms.get(exps, Fraction(0)) + parse_rational(m.group(1))
    return MultiPoly(nvars, terms)


def read_poly(path: str | Path, nvars: int = 3) -> MultiPoly:
    return parse_poly(_read(path), nvars)


def poly_terms(p: MultiPoly) -> list[str]:
    """Terms as ``num/den:e1,e2,e3`` strings in graded order."""
    return [f"{format_rational(c)}:{','.join(map(str, e))}" for e, c in p.sorted_terms()]


def format_points(points: Iterable[Sequence]) -> str:
    return "".join(",".join(format_rational(c) for c in p) + "\n" for p in points)


def format_lines(lines: Iterable[Line3]) -> str:
    return "".join(",".join(format_rational(c) for c in l.base + l.dir) + "\n" for l in lines)
