"""Orientation-preserving rigid motions of the plane and their line coordinates.

A rotational motion is stored as its fixed point ``center`` and the rational
parameter ``z``; the rotation angle satisfies

    cos = (z^2 - 1) / (z^2 + 1),   sin = -2 z / (z^2 + 1),

so ``z`` is minus the cotangent of half the counter-clockwise angle.  With this
convention the point ``(center, z)`` of 3-space lies on the line attached to a
pair ``(p, q)`` exactly when the motion sends ``p`` to ``q``.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact.poly import MultiPoly
from .lines import Line3
from .points import Point2, PointSet2, as_point2, sqdist

Point3 = tuple[Fraction, Fraction, Fraction]


class InvariantViolation(RuntimeError):
    """An exact postcondition failed; indicates a bug, never bad input."""


@dataclass(frozen=True)
class Translation:
    v: Point2

    def apply(self, x: Sequence) -> Point2:
        x = as_point2(x)
        return (x[0] + self.v[0], x[1] + self.v[1])

    def encode(self) -> str:
        return f"T:{_q(self.v[0])},{_q(self.v[1])}"


@dataclass(frozen=True)
class Rotational:
    center: Point2
    z: Fraction

    @property
    def cos(self) -> Fraction:
        z2 = self.z * self.z
        return (z2 - 1) / (z2 + 1)

    @property
    def sin(self) -> Fraction:
        return -2 * self.z / (self.z * self.z + 1)

    def apply(self, x: Sequence) -> Point2:
        x = as_point2(x)
        c, s = self.cos, self.sin
        dx = x[0] - self.center[0]
        dy = x[1] - self.center[1]
        return (self.center[0] + c * dx - s * dy, self.center[1] + s * dx + c * dy)

    def encode(self) -> str:
        return f"R:{_q(self.center[0])},{_q(self.center[1])},{_q(self.z)}"


RigidMotion = Translation | Rotational


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def translation(vx, vy) -> Translation:
    return Translation((Fraction(vx), Fraction(vy)))


def rotation(cx, cy, z) -> Rotational:
    return Rotational((Fraction(cx), Fraction(cy)), Fraction(z))


def decode_motion(text: str) -> RigidMotion:
    kind, _, body = text.partition(":")
    vals = [Fraction(s) for s in body.split(",")]
    if kind == "T" and len(vals) == 2:
        return translation(*vals)
    if kind == "R" and len(vals) == 3:
        return rotation(*vals)
    raise ValueError(f"not a motion encoding: {text!r}")


def apply(g: RigidMotion, x: Sequence) -> Point2:
    return g.apply(x)


def is_distance_quadruple(p1, p2, p3, p4) -> bool:
    d = sqdist(as_point2(p1), as_point2(p2))
    return d != 0 and d == sqdist(as_point2(p3), as_point2(p4))


def elekes_map(p1, p2, p3, p4) -> RigidMotion:
    """The unique motion ``g`` with ``g(p1) = p3`` and ``g(p2) = p4``."""
    p1, p2, p3, p4 = (as_point2(p) for p in (p1, p2, p3, p4))
    if not is_distance_quadruple(p1, p2, p3, p4):
        raise ValueError("not a distance quadruple: need d(p1,p2) = d(p3,p4) != 0")
    u = (p2[0] - p1[0], p2[1] - p1[1])
    w = (p4[0] - p3[0], p4[1] - p3[1])
    if u == w:
        g: RigidMotion = Translation((p3[0] - p1[0], p3[1] - p1[1]))
    else:
        # complex ratio w/u has modulus one
        n = u[0] * u[0] + u[1] * u[1]
        c = (w[0] * u[0] + w[1] * u[1]) / n
        s = (w[1] * u[0] - w[0] * u[1]) / n
        z = -s / (1 - c)
        # center solves (1 - R) c = p3 - R p1
        ax = p3[0] - (c * p1[0] - s * p1[1])
        ay = p3[1] - (s * p1[0] + c * p1[1])
        a, b = 1 - c, s
        det = a * a + b * b
        cx = (a * ax - b * ay) / det
        cy = (b * ax + a * ay) / det
        g = Rotational((cx, cy), z)
    if g.apply(p1) != p3 or g.apply(p2) != p4:
        raise InvariantViolation(f"elekes_map postcondition failed for {g.encode()}")
    return g


def rho(g: RigidMotion) -> Point3:
    if not isinstance(g, Rotational):
        raise ValueError("translations have no image under rho")
    return (g.center[0], g.center[1], g.z)


def rho_inverse(x: Sequence) -> Rotational:
    return Rotational((Fraction(x[0]), Fraction(x[1])), Fraction(x[2]))


def line_for_pair(p: Sequence, q: Sequence) -> Line3:
    """The line of rotational motions taking ``p`` to ``q`` in rho coordinates."""
    p, q = as_point2(p), as_point2(q)
    base = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2, Fraction(0))
    direction = ((q[1] - p[1]) / 2, (p[0] - q[0]) / 2, Fraction(1))
    return Line3(base, direction)


def param_point(p: Sequence, q: Sequence, t) -> Point3:
    """Point at parameter ``t`` of the uncanonicalized pair parametrization."""
    p, q = as_point2(p), as_point2(q)
    t = Fraction(t)
    return ((p[0] + q[0]) / 2 + t * (q[1] - p[1]) / 2,
            (p[1] + q[1]) / 2 + t * (p[0] - q[0]) / 2,
            t)


def all_pair_lines(P: PointSet2) -> list[Line3]:
    return [line_for_pair(p, q) for p in P for q in P]


def recover_q(p: Sequence, x: Sequence) -> tuple[Point2, Point3]:
    """The unique ``q`` with ``x`` on ``line_for_pair(p, q)``, and the tangent field there.

    The field is ``(z^2 + 1) * ((q_y - p_y)/2, (p_x - q_x)/2, 1)``.
    """
    px, py = as_point2(p)
    X, Y, z = (Fraction(c) for c in x)
    # [1 z; -z 1] (qx, qy) = (2X - px + z py, 2Y - py - z px)
    r1 = 2 * X - px + z * py
    r2 = 2 * Y - py - z * px
    det = 1 + z * z
    qx = (r1 - z * r2) / det
    qy = (z * r1 + r2) / det
    field = (det * (qy - py) / 2, det * (px - qx) / 2, det)
    return (qx, qy), field


def tangent_field(p: Sequence) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """The tangent field to the lines through ``p`` as polynomials of degree <= 2."""
    px, py = as_point2(p)
    X, Y, Z = (MultiPoly.var(3, i) for i in range(3))
    one = MultiPoly.constant(3, 1)
    r1 = X * 2 - px + Z * py
    r2 = Y * 2 - py - Z * px
    # (z^2+1) q = (r1 - z r2, z r1 + r2)
    bx = r1 - Z * r2
    by = Z * r1 + r2
    w = Z * Z + one
    v1 = (by - w * py) * Fraction(1, 2)
    v2 = (w * px - bx) * Fraction(1, 2)
    return v1, v2, w


# -- enumeration over quadruples ------------------------------------------------

def motion_fibers(P: PointSet2) -> Counter:
    """Motion -> number of quadruples of Q(P) that the Elekes map sends to it."""
    pts = P.points
    by_dist: dict[Fraction, list[tuple[Point2, Point2]]] = defaultdict(list)
    for a in pts:
        for b in pts:
            if a != b:
                by_dist[sqdist(a, b)].append((a, b))
    fibers: Counter = Counter()
    for pairs in by_dist.values():
        for p1, p2 in pairs:
            for p3, p4 in pairs:
                fibers[elekes_map(p1, p2, p3, p4)] += 1
    return fibers


def overlap(P: PointSet2, g: RigidMotion) -> int:
    """|P ∩ gP|."""
    s = P.as_set()
    return sum(1 for p in P if g.apply(p) in s)


def multiplicity_from_fiber(fiber: int) -> int:
    """Invert ``fiber = m (m - 1)``."""
    m = 2
    while m * (m - 1) < fiber:
        m += 1
    if m * (m - 1) != fiber:
        raise InvariantViolation(f"fiber size {fiber} is not of the form m(m-1)")
    return m


def partial_symmetry_counts(P: PointSet2, fibers: Counter | None = None) -> dict[int, int]:
    """k -> |G_k(P)| for 2 <= k <= N, motions taken from the Elekes image."""
    if fibers is None:
        fibers = motion_fibers(P)
    exact = Counter(overlap(P, g) for g in fibers)
    out = {}
    running = 0
    for k in range(P.N, 1, -1):
        running += exact.get(k, 0)
        out[k] = running
    return dict(sorted(out.items()))


def quadformula_total(gk: dict[int, int]) -> int:
    return sum((2 * k - 2) * c for k, c in gk.items())


@dataclass
class TranslationStats:
    k: int
    count: int
    quadruples: int
    overlaps: dict[Point2, int]


def translation_partial_symmetries(P: PointSet2, k: int) -> TranslationStats:
    """Translations ``v`` with |P ∩ (P + v)| >= k, and the quadruples they carry."""
    if not 2 <= k <= P.N:
        raise ValueError(f"k must satisfy 2 <= k <= N = {P.N}")
    s = P.as_set()
    overlaps: dict[Point2, int] = {}
    for a in P:
        for b in P:
            v = (b[0] - a[0], b[1] - a[1])
            if v in overlaps:
                continue
            overlaps[v] = sum(1 for p in P if (p[0] + v[0], p[1] + v[1]) in s)
    count = sum(1 for m in overlaps.values() if m >= k)
    quads = sum(m * (m - 1) for m in overlaps.values())
    if quads > P.N ** 3:
        raise InvariantViolation("translation quadruples exceed N^3")
    return TranslationStats(k, count, quads, overlaps)
