"""Exact lines in 3-space: canonical form, intersections, rich points, clusters."""

from __future__ import annotations

import os
import random
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exact.poly import MultiPoly, restrict_to_line

Point3 = tuple[Fraction, Fraction, Fraction]


def _vec(v: Sequence) -> Point3:
    if len(v) != 3:
        raise ValueError(f"expected 3 coordinates, got {v!r}")
    return (Fraction(v[0]), Fraction(v[1]), Fraction(v[2]))


def cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


class Line3:
    """Line ``base + t * dir`` stored in canonical form.

    ``dir`` is scaled so its first nonzero coordinate (the pivot) is 1 and
    ``base`` is the unique point of the line whose pivot coordinate is 0.
    Equality and hashing use the canonical pair, which is equivalent to
    proportionality of Plücker coordinates.
    """

    __slots__ = ("base", "dir", "moment", "pivot", "_key")

    def __init__(self, base: Sequence, direction: Sequence):
        b = _vec(base)
        d = _vec(direction)
        pivot = next((i for i in range(3) if d[i]), None)
        if pivot is None:
            raise ValueError("line direction must be nonzero")
        s = d[pivot]
        d = tuple(c / s for c in d)
        t = b[pivot]
        b = tuple(bi - t * di for bi, di in zip(b, d))
        self.base: Point3 = b
        self.dir: Point3 = d
        self.pivot = pivot
        self.moment: Point3 = cross(b, d)
        self._key = (b, d)

    @classmethod
    def through(cls, a: Sequence, b: Sequence) -> Line3:
        a, b = _vec(a), _vec(b)
        return cls(a, sub(b, a))

    @property
    def plucker(self) -> tuple[Fraction, ...]:
        return self.dir + self.moment

    def point_at(self, t) -> Point3:
        t = Fraction(t)
        return tuple(b + t * d for b, d in zip(self.base, self.dir))

    def contains(self, x: Sequence) -> bool:
        return cross(sub(_vec(x), self.base), self.dir) == (0, 0, 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Line3) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        b = ",".join(str(c) for c in self.base)
        d = ",".join(str(c) for c in self.dir)
        return f"Line3(({b}) + t({d}))"


# -- pairwise relations ------------------------------------------------------------

@dataclass(frozen=True)
class Intersection:
    kind: str  # "point", "coincident", "parallel", "skew"
    point: Point3 | None = None


COINCIDENT = Intersection("coincident")
PARALLEL = Intersection("parallel")
SKEW = Intersection("skew")


def reciprocal_product(l1: Line3, l2: Line3) -> Fraction:
    """Plücker side operator; zero iff the lines are coplanar."""
    return dot(l1.dir, l2.moment) + dot(l2.dir, l1.moment)


def _meet(b1, d1, m1, b2, d2, m2):
    c = cross(d1, d2)
    if c == (0, 0, 0):
        if cross(sub(b2, b1), d1) == (0, 0, 0):
            return COINCIDENT
        return PARALLEL
    if dot(d1, m2) + dot(d2, m1):
        return SKEW
    nn = dot(c, c)
    t = dot(cross(sub(b2, b1), d2), c) / nn
    return Intersection("point", (b1[0] + t * d1[0], b1[1] + t * d1[1], b1[2] + t * d1[2]))


def intersect(l1: Line3, l2: Line3) -> Intersection:
    return _meet(l1.base, l1.dir, l1.moment, l2.base, l2.dir, l2.moment)


def dedup(lines: Iterable[Line3]) -> list[Line3]:
    seen = set()
    out = []
    for l in lines:
        if l not in seen:
            seen.add(l)
            out.append(l)
    return out


# -- rich points ------------------------------------------------------------------------

@dataclass
class IncidenceHistogram:
    """Rich points (multiplicity >= 2) and the counts |S_k| of points on >= k lines."""

    rich_points: dict[Point3, int]
    s_counts: dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_points(cls, rich_points: dict[Point3, int]) -> IncidenceHistogram:
        return cls(rich_points, s_counts_from_multiplicities(rich_points.values()))

    def restricted(self, keep) -> IncidenceHistogram:
        return IncidenceHistogram.from_points(
            {x: m for x, m in self.rich_points.items() if keep(x)})

    def s(self, k: int) -> int:
        """|S_k| for k >= 2."""
        return self.s_counts.get(k, 0)


def s_counts_from_multiplicities(mults: Iterable[int]) -> dict[int, int]:
    freq: dict[int, int] = defaultdict(int)
    for m in mults:
        freq[m] += 1
    return s_counts_from_frequency(freq)


def s_counts_from_frequency(freq: dict[int, int]) -> dict[int, int]:
    """Turn {multiplicity: number of points} into {k: #points with multiplicity >= k}."""
    if not freq:
        return {}
    top = max(freq)
    out = {}
    running = 0
    for k in range(top, 1, -1):
        running += freq.get(k, 0)
        out[k] = running
    return dict(sorted(out.items()))


def _pair_chunk(args):
    raw, start, step = args
    found: dict[Point3, set[int]] = defaultdict(set)
    n = len(raw)
    for i in range(start, n, step):
        b1, d1, m1 = raw[i]
        for j in range(i + 1, n):
            b2, d2, m2 = raw[j]
            if d1 == d2:
                continue
            r = _meet(b1, d1, m1, b2, d2, m2)
            if r.point is not None:
                s = found[r.point]
                s.add(i)
                s.add(j)
    return dict(found)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("DDLAB_WORKERS", "1")))
    except ValueError:
        return 1


def incidence_histogram(lines: Sequence[Line3], workers: int | None = None) -> IncidenceHistogram:
    """Enumerate all pairs of distinct lines and record every intersection point.

    Parallel lines (equal canonical directions) are skipped; the multiplicity
    of each point is recounted afterwards against every line.
    """
    lines = dedup(lines)
    raw = [(l.base, l.dir, l.moment) for l in lines]
    workers = workers or default_workers()
    if workers > 1 and len(raw) > 200:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_pair_chunk, [(raw, w, workers) for w in range(workers)]))
    else:
        parts = [_pair_chunk((raw, 0, 1))]
    candidates: dict[Point3, set[int]] = defaultdict(set)
    for part in parts:
        for x, s in part.items():
            candidates[x] |= s
    rich = {x: _count_through(x, lines, seed) for x, seed in candidates.items()}
    return IncidenceHistogram.from_points(dict(sorted(rich.items())))


def _count_through(x: Point3, lines: Sequence[Line3], seed: set[int]) -> int:
    # every line through a rich point meets another line there, so the seed
    # set already holds all of them; recount exactly to be safe
    m = sum(1 for i in seed if lines[i].contains(x))
    if m != len(seed):
        raise RuntimeError("incidence recount disagrees with pair enumeration")
    return m


def incidence_histogram_bruteforce(lines: Sequence[Line3]) -> IncidenceHistogram:
    """Every intersection point, multiplicity recounted over all lines (O(P L))."""
    lines = dedup(lines)
    pts = set()
    for i, a in enumerate(lines):
        for b in lines[i + 1:]:
            r = intersect(a, b)
            if r.point is not None:
                pts.add(r.point)
    return IncidenceHistogram.from_points(
        {x: sum(1 for l in lines if l.contains(x)) for x in sorted(pts)})


# -- planes and reguli --------------------------------------------------------------

Plane = tuple[Point3, Fraction]


def canonical_plane(normal: Sequence, point: Sequence) -> Plane:
    n = _vec(normal)
    k = next(i for i in range(3) if n[i])
    n = tuple(c / n[k] for c in n)
    return n, dot(n, _vec(point))


def plane_poly(plane: Plane) -> MultiPoly:
    n, c = plane
    return MultiPoly.linear(n, -c)


def spanned_plane(l1: Line3, l2: Line3) -> Plane | None:
    """Plane containing two distinct coplanar lines, else ``None``."""
    c = cross(l1.dir, l2.dir)
    if c == (0, 0, 0):
        c = cross(l1.dir, sub(l2.base, l1.base))
        if c == (0, 0, 0):
            return None
        return canonical_plane(c, l1.base)
    if reciprocal_product(l1, l2):
        return None
    return canonical_plane(c, l1.base)


def plane_containing(line: Line3) -> Plane:
    for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        n = cross(line.dir, e)
        if n != (0, 0, 0):
            return canonical_plane(n, line.base)
    raise AssertionError("unreachable")


def max_coplanar_cluster(lines: Sequence[Line3]) -> tuple[MultiPoly, int]:
    """A plane holding the most input lines, as a degree-1 polynomial, and that count."""
    lines = dedup(lines)
    if len(lines) < 2:
        raise ValueError("need at least two lines")
    members: dict[Plane, set[int]] = defaultdict(set)
    for i, a in enumerate(lines):
        for j in range(i + 1, len(lines)):
            pl = spanned_plane(a, lines[j])
            if pl is not None:
                s = members[pl]
                s.add(i)
                s.add(j)
    if not members:
        return plane_poly(plane_containing(lines[0])), 1
    best = max(members.items(), key=lambda kv: (len(kv[1]), _plane_sort_key(kv[0])))
    return plane_poly(best[0]), len(best[1])


def _plane_sort_key(pl: Plane):
    # deterministic tie-break: prefer the lexicographically smallest plane
    n, c = pl
    return tuple(-x for x in n) + (-c,)


def pairwise_skew(lines: Sequence[Line3]) -> bool:
    return all(intersect(a, b) is SKEW
               for i, a in enumerate(lines) for b in lines[i + 1:])


def sample_points(line: Line3, count: int = 3) -> list[Point3]:
    return [line.point_at(t) for t in range(count)]


def contains_line(p: MultiPoly, line: Line3) -> bool:
    return restrict_to_line(p, line.base, line.dir).is_zero()


class Degenerate(Exception):
    pass


def regulus_line_count(lines: Sequence[Line3], l1: Line3, l2: Line3, l3: Line3):
    """Quadric through three pairwise skew lines and how many input lines it contains."""
    from .surfaces import fit_vanishing_polynomial, vanishing_space

    if not pairwise_skew([l1, l2, l3]):
        raise ValueError("regulus seeds must be pairwise skew")
    pts = sample_points(l1) + sample_points(l2) + sample_points(l3)
    if len(vanishing_space(pts, 2)) != 1:
        raise Degenerate("quadric through the seed lines is not unique")
    f = fit_vanishing_polynomial(pts, 2)
    count = sum(1 for l in dedup(lines) if contains_line(f, l))
    return f, count


# -- projection --------------------------------------------------------------------

class GenericityFailure(Exception):
    """The projection direction collapses structure; retry with another."""


@dataclass(frozen=True)
class Line2:
    """``a x + b y = c`` normalized so the first nonzero of (a, b) is 1."""

    a: Fraction
    b: Fraction
    c: Fraction

    @classmethod
    def through(cls, p, direction) -> Line2:
        a, b = direction[1], -direction[0]
        c = a * p[0] + b * p[1]
        s = a if a else b
        return cls(a / s, b / s, c / s)

    def contains(self, x) -> bool:
        return self.a * x[0] + self.b * x[1] == self.c


@dataclass
class Projection:
    direction: Point3
    lines2d: list[Line2]
    rich_points2d: dict[tuple[Fraction, Fraction], int]
    lines_through_images: dict[tuple[Fraction, Fraction], int]


def _projector(direction: Point3):
    u = next(cross(direction, e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))
             if cross(direction, e) != (0, 0, 0))
    w = cross(direction, u)
    return lambda x: (dot(u, x), dot(w, x))


def project_generic(lines: Sequence[Line3], direction: Sequence,
                    rich_points: dict[Point3, int] | None = None) -> Projection:
    """Project along ``direction`` to a plane; verify distinctness of lines and rich points."""
    direction = _vec(direction)
    if direction == (0, 0, 0):
        raise ValueError("projection direction must be nonzero")
    lines = dedup(lines)
    proj = _projector(direction)
    images = []
    for l in lines:
        dd = proj(l.dir)
        if dd == (0, 0):
            raise GenericityFailure(f"direction is parallel to {l!r}")
        images.append(Line2.through(proj(l.base), dd))
    if len(set(images)) != len(images):
        raise GenericityFailure("two lines project to the same planar line")
    if rich_points is None:
        rich_points = incidence_histogram(lines).rich_points
    img_pts: dict[tuple[Fraction, Fraction], int] = {}
    for x, m in rich_points.items():
        y = proj(x)
        if y in img_pts:
            raise GenericityFailure("two rich points project to the same point")
        img_pts[y] = m
    through = {y: sum(1 for l2 in images if l2.contains(y)) for y in img_pts}
    for y, m in img_pts.items():
        if through[y] != m:
            raise GenericityFailure("a projected rich point gained extra lines")
    return Projection(direction, images, img_pts, through)


def random_direction(rng: random.Random, span: int = 97) -> Point3:
    while True:
        d = tuple(Fraction(rng.randint(-span, span)) for _ in range(3))
        if d != (0, 0, 0):
            return d


def project_with_retries(lines, rng: random.Random, rich_points=None, attempts: int = 20) -> Projection:
    last = None
    for _ in range(attempts):
        try:
            return project_generic(lines, random_direction(rng), rich_points)
        except GenericityFailure as exc:
            last = exc
    raise GenericityFailure(f"no generic direction after {attempts} attempts: {last}")


# -- the partial-symmetry cross-check ------------------------------------------------

CROSS_CHECK_MAX_N = 12


def cross_check_Gk(P, k: int) -> tuple[int, int]:
    """(#points on >= k pair lines, #non-translation motions with |P ∩ gP| >= k)."""
    from .motions import Rotational, all_pair_lines, motion_fibers, multiplicity_from_fiber

    if k < 2:
        raise ValueError("k must be >= 2")
    if P.N > CROSS_CHECK_MAX_N:
        raise ValueError(f"cross_check_Gk enumerates quadruples; N must be <= {CROSS_CHECK_MAX_N}")
    hist = incidence_histogram(all_pair_lines(P), workers=1)
    via_lines = hist.s(k)
    fibers = motion_fibers(P)
    via_motions = sum(1 for g, f in fibers.items()
                      if isinstance(g, Rotational) and multiplicity_from_fiber(f) >= k)
    return via_lines, via_motions
