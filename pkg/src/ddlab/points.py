"""Planar point sets, distance statistics and distance quadruples."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Point2 = tuple[Fraction, Fraction]


def as_point2(p: Sequence) -> Point2:
    if len(p) != 2:
        raise ValueError(f"expected a planar point, got {p!r}")
    return (Fraction(p[0]), Fraction(p[1]))


@dataclass(frozen=True)
class PointSet2:
    """Finite ordered set of distinct planar points with exact coordinates."""

    points: tuple[Point2, ...]

    def __init__(self, points: Iterable[Sequence]):
        pts = tuple(as_point2(p) for p in points)
        if not pts:
            raise ValueError("a point set needs at least one point")
        seen = set()
        for p in pts:
            if p in seen:
                raise ValueError(f"duplicate point {p[0]},{p[1]}")
            seen.add(p)
        object.__setattr__(self, "points", pts)

    @property
    def N(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return as_point2(p) in self._lookup

    @property
    def _lookup(self) -> frozenset:
        cached = self.__dict__.get("_set")
        if cached is None:
            cached = frozenset(self.points)
            object.__setattr__(self, "_set", cached)
        return cached

    def as_set(self) -> frozenset:
        return self._lookup

    def integer_scaled(self) -> tuple[list[tuple[int, int]], int]:
        """Coordinates times the common denominator ``L``, plus ``L``."""
        den = 1
        for x, y in self.points:
            den = lcm(den, x.denominator, y.denominator)
        return [(int(x * den), int(y * den)) for x, y in self.points], den


def sqdist(p: Point2, q: Point2) -> Fraction:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


def _require_two(P: PointSet2) -> None:
    if P.N < 2:
        raise ValueError("need at least two points for a nonzero distance")


def distance_histogram(P: PointSet2) -> dict[Fraction, int]:
    """Squared distance -> number of ordered pairs at that distance.

    The number of keys is |d(P)|.
    """
    _require_two(P)
    pts, den = P.integer_scaled()
    counts: Counter[int] = Counter()
    for i, (x1, y1) in enumerate(pts):
        for x2, y2 in pts[i + 1:]:
            dx = x1 - x2
            dy = y1 - y2
            counts[dx * dx + dy * dy] += 2
    d2 = den * den
    return {Fraction(k, d2): v for k, v in sorted(counts.items())}


def distinct_distance_count(P: PointSet2) -> int:
    return len(distance_histogram(P))


def quadruple_count(P: PointSet2) -> int:
    """|Q(P)| = sum of n_i^2 over the distance histogram."""
    return sum(n * n for n in distance_histogram(P).values())


def quadruple_count_bruteforce(P: PointSet2) -> int:
    """Ordered quadruples with d(p1,p2) = d(p3,p4) != 0, by four nested loops."""
    _require_two(P)
    pts = P.points
    n = len(pts)
    d = [[sqdist(pts[i], pts[j]) for j in range(n)] for i in range(n)]
    total = 0
    for i in range(n):
        for j in range(n):
            dij = d[i][j]
            if not dij:
                continue
            for k in range(n):
                row = d[k]
                for m in range(n):
                    if row[m] == dij:
                        total += 1
    return total


def cs_lower_bound(P: PointSet2) -> Fraction:
    """(N^2 - N)^2 / |Q(P)|, a lower bound for |d(P)|."""
    n = P.N
    _require_two(P)
    return Fraction((n * n - n) ** 2, quadruple_count(P))


def generate_grid(S: int) -> PointSet2:
    """Integer points with |x|, |y| <= 2S, so N = (4S + 1)^2."""
    if S < 1:
        raise ValueError("grid parameter S must be >= 1")
    r = range(-2 * S, 2 * S + 1)
    return PointSet2((x, y) for x in r for y in r)


def random_point_set(n: int, rng: random.Random, span: int = 4, den: int = 1) -> PointSet2:
    """``n`` distinct points with coordinates ``k/den``, ``0 <= k <= span``."""
    if (span + 1) ** 2 < n:
        raise ValueError("span too small for the requested number of points")
    pts: set[Point2] = set()
    while len(pts) < n:
        pts.add((Fraction(rng.randint(0, span), den), Fraction(rng.randint(0, span), den)))
    return PointSet2(sorted(pts))
