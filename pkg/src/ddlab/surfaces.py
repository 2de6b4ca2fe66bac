"""Algebraic surfaces in 3-space: vanishing fits, critical and flat points, flecnodes."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .exact.linalg import determinant, nullspace
from .exact.poly import (
    MultiPoly,
    directional_form,
    from_coefficients,
    monomials,
    monomials_upto,
    restrict_to_line,
    veronese,
)
from .exact.univariate import UniPoly, count_real_roots, gcd
from .io import poly_terms
from .lines import Line3, contains_line, cross

Point3 = tuple[Fraction, Fraction, Fraction]


# -- interpolation ---------------------------------------------------------------------

def vanishing_space(points: Sequence[Sequence], degree: int) -> list[MultiPoly]:
    """Basis of the polynomials of degree <= ``degree`` vanishing on ``points``."""
    basis = monomials_upto(3, degree)
    rows = [veronese(p, basis) for p in points]
    if not rows:
        return [MultiPoly(3, {e: 1}) for e in basis]
    return [from_coefficients(3, basis, v) for v in nullspace(rows)]


def fit_vanishing_polynomial(points: Sequence[Sequence], degree: int) -> MultiPoly:
    """A nonzero polynomial of degree <= ``degree`` vanishing on every point.

    Requires fewer points than monomials so that one is guaranteed to exist.
    When the solution space has dimension > 1 the first reduced basis element
    is returned, which makes the choice deterministic.
    """
    nmono = len(monomials_upto(3, degree))
    if len(points) >= nmono:
        raise ValueError(
            f"{len(points)} points >= {nmono} monomials of degree <= {degree}: "
            "a vanishing polynomial need not exist")
    return vanishing_space(points, degree)[0].scale_to_integers()


# -- critical points and lines -------------------------------------------------------

def _restrictions(polys: Sequence[MultiPoly], line: Line3) -> list[UniPoly]:
    return [restrict_to_line(p, line.base, line.dir) for p in polys]


def is_critical_line(p: MultiPoly, line: Line3) -> bool:
    if p.is_zero():
        raise ValueError("p must be nonzero")
    return all(r.is_zero() for r in _restrictions([p] + p.gradient(), line))


def critical_points_on_line(p: MultiPoly, line: Line3) -> int | None:
    """Number of critical points of Z(p) on ``line``; ``None`` for a critical line."""
    if p.is_zero():
        raise ValueError("p must be nonzero")
    g = UniPoly()
    for r in _restrictions([p] + p.gradient(), line):
        g = gcd(g, r)
    if g.is_zero():
        return None
    return count_real_roots(g)


def count_critical_lines(p: MultiPoly, candidates: Sequence[Line3]) -> int:
    return sum(1 for l in candidates if is_critical_line(p, l))


# -- flat points ---------------------------------------------------------------------

def flat_polynomials(p: MultiPoly) -> list[MultiPoly]:
    """The nine components of (Hess p . (e_j x grad p)) x grad p, j = 1, 2, 3."""
    grad = p.gradient()
    hess = [[g.diff(k) for k in range(3)] for g in grad]
    units = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    out = []
    for e in units:
        w = cross(tuple(MultiPoly.constant(3, c) for c in e), grad)
        hw = tuple(sum((hess[i][k] * w[k] for k in range(3)), MultiPoly(3)) for i in range(3))
        out.extend(cross(hw, grad))
    bound = 3 * max(p.degree(), 0)
    for f in out:
        if f.degree() > bound:
            raise AssertionError("flat polynomial exceeds degree 3d")
    return out


class PointClass(enum.Enum):
    CRITICAL = "Critical"
    REGULAR_FLAT = "RegularFlat"
    REGULAR_NON_FLAT = "RegularNonFlat"
    NOT_ON_SURFACE = "NotOnSurface"


@dataclass(frozen=True)
class SurfacePointClass:
    point: Point3
    cls: PointClass


def classify_point(p: MultiPoly, x: Sequence, flats: Sequence[MultiPoly] | None = None) -> SurfacePointClass:
    if p.is_zero():
        raise ValueError("p must be nonzero")
    x = tuple(Fraction(c) for c in x)
    if p.evaluate(x) != 0:
        c = PointClass.NOT_ON_SURFACE
    elif all(g.evaluate(x) == 0 for g in p.gradient()):
        c = PointClass.CRITICAL
    else:
        flats = flat_polynomials(p) if flats is None else flats
        c = PointClass.REGULAR_FLAT if all(f.evaluate(x) == 0 for f in flats) \
            else PointClass.REGULAR_NON_FLAT
    return SurfacePointClass(x, c)


def is_flat_line(p: MultiPoly, line: Line3) -> bool:
    if not contains_line(p, line) or is_critical_line(p, line):
        return False
    return all(r.is_zero() for r in _restrictions(flat_polynomials(p), line))


# -- flecnodes -----------------------------------------------------------------------

def flecnode_forms(p: MultiPoly, x: Sequence) -> list[MultiPoly]:
    """The three directional forms of orders 1, 2, 3 at ``x``, as polynomials in v."""
    return [directional_form(p, r).substitute_prefix(x) for r in (1, 2, 3)]


def _macaulay(forms: Sequence[MultiPoly]):
    degs = (1, 2, 3)
    D = sum(d - 1 for d in degs) + 1
    cols = monomials(3, D)
    index = {e: i for i, e in enumerate(cols)}
    rows = []
    reduced = []
    for e in cols:
        i = next(i for i in range(3) if e[i] >= degs[i])
        shift = list(e)
        shift[i] -= degs[i]
        row = [Fraction(0)] * len(cols)
        for m, c in forms[i].terms.items():
            row[index[tuple(a + b for a, b in zip(m, shift))]] += c
        rows.append(row)
        reduced.append(sum(1 for j in range(3) if e[j] >= degs[j]) == 1)
    keep = [k for k, r in enumerate(reduced) if not r]
    minor = [[rows[a][b] for b in keep] for a in keep]
    return rows, minor


def macaulay_resultant(forms: Sequence[MultiPoly], rng: random.Random | None = None) -> Fraction:
    """Resultant of ternary forms of degrees 1, 2, 3 via the 15 x 15 Macaulay matrix.

    ``Res = det(M) / det(A)`` with ``A`` the extraneous minor; when ``A`` is
    singular the forms are moved by a random rational change of variables
    ``T`` and the result divided by ``det(T)^6``.
    """
    for f, d in zip(forms, (1, 2, 3)):
        if f.nvars != 3 or any(sum(e) != d for e in f.terms):
            raise ValueError("forms must be homogeneous of degrees 1, 2, 3 in three variables")
    M, A = _macaulay(forms)
    detA = determinant(A) if A else Fraction(1)
    if detA:
        return determinant(M) / detA
    rng = rng or random.Random(0)
    for _ in range(50):
        T = [[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)]
        detT = determinant(T)
        if not detT:
            continue
        moved = [_linear_change(f, T) for f in forms]
        M2, A2 = _macaulay(moved)
        detA2 = determinant(A2) if A2 else Fraction(1)
        if detA2:
            return determinant(M2) / detA2 / detT ** 6
    raise RuntimeError("no change of variables made the extraneous minor invertible")


def _linear_change(f: MultiPoly, T) -> MultiPoly:
    lin = [MultiPoly.linear(T[i]) for i in range(3)]
    out = MultiPoly(3)
    for e, c in f.terms.items():
        term = MultiPoly.constant(3, c)
        for i, k in enumerate(e):
            if k:
                term = term * lin[i] ** k
        out = out + term
    return out


def _binary_forms_share_root(f: Sequence[Fraction], g: Sequence[Fraction]) -> bool:
    """Common projective root of binary forms given by coefficient lists (s^k t^(n-k))."""
    fz = all(c == 0 for c in f)
    gz = all(c == 0 for c in g)
    if fz or gz:
        # a nonzero binary form of positive degree always has a complex root
        return True
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + list(f) + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + list(g) + [Fraction(0)] * (size - n - 1 - i))
    return determinant(rows) == 0


def flecnode_certificate(forms: Sequence[MultiPoly]) -> bool:
    """Exact test for a common complex projective zero of the three forms.

    The linear form is solved for a 2-dimensional space of directions; the
    quadratic and cubic forms restricted there are binary forms whose
    Sylvester resultant decides a shared root.
    """
    f1, f2, f3 = forms
    lin = [f1.terms.get(e, Fraction(0)) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    if all(c == 0 for c in lin):
        # two plane curves of degrees 2 and 3 always meet in the projective plane
        return True
    basis = nullspace([lin])
    a, b = basis
    s_t = [UniPoly([a[i], b[i]]) for i in range(3)]  # v = a + u b, dehomogenized
    q2 = f2.compose_univariate(s_t)
    q3 = f3.compose_univariate(s_t)
    c2 = [q2.coeffs[k] if k < len(q2.coeffs) else Fraction(0) for k in range(3)]
    c3 = [q3.coeffs[k] if k < len(q3.coeffs) else Fraction(0) for k in range(4)]
    # homogenize in (u : w) with formal degrees 2 and 3, highest power of u first
    return _binary_forms_share_root(c2[::-1], c3[::-1])


def _check_flecnode_input(p: MultiPoly, x) -> tuple[Fraction, ...]:
    if p.nvars != 3:
        raise ValueError("flecnode tests need a polynomial in x, y, z")
    if p.degree() < 3:
        raise ValueError("flecnode tests need degree >= 3")
    x = tuple(Fraction(c) for c in x)
    if p.evaluate(x) != 0:
        raise ValueError(f"point {x} is not on the surface")
    return x


def flecnode_eval(p: MultiPoly, x: Sequence) -> Fraction:
    """Macaulay resultant of the three directional forms at a surface point."""
    x = _check_flecnode_input(p, x)
    return macaulay_resultant(flecnode_forms(p, x))


def is_flecnode(p: MultiPoly, x: Sequence) -> bool:
    x = _check_flecnode_input(p, x)
    return flecnode_certificate(flecnode_forms(p, x))


@dataclass
class FlecnodeVerdict:
    point: Point3
    resultant: Fraction
    certificate: bool

    @property
    def agree(self) -> bool:
        return (self.resultant == 0) == self.certificate


def flecnode_verdict(p: MultiPoly, x: Sequence) -> FlecnodeVerdict:
    x = _check_flecnode_input(p, x)
    forms = flecnode_forms(p, x)
    return FlecnodeVerdict(x, macaulay_resultant(forms), flecnode_certificate(forms))


@dataclass
class RulednessReport:
    samples: int
    flecnodes: int
    witnesses: list[Point3] = field(default_factory=list)
    disagreements: int = 0

    @property
    def consistent_with_ruled(self) -> bool:
        return not self.witnesses


def ruledness_scan(p: MultiPoly, sampler: Callable[[int], Sequence], sample_count: int) -> RulednessReport:
    """Test the flecnode condition at sampled surface points.

    Any non-flecnode sample certifies that the surface is not ruled; all-zero
    is consistent with (not a proof of) ruledness.
    """
    report = RulednessReport(sample_count, 0)
    for i in range(sample_count):
        x = tuple(Fraction(c) for c in sampler(i))
        if p.evaluate(x) != 0:
            raise ValueError(f"sampler produced {x}, which is not on the surface")
        v = flecnode_verdict(p, x)
        if not v.agree:
            report.disagreements += 1
        if v.certificate:
            report.flecnodes += 1
        else:
            report.witnesses.append(x)
    return report


# -- tracked factorizations and shared lines ---------------------------------------

FACTOR_TAGS = ("plane", "regulus", "ruled-other", "unruled", "unknown")


@dataclass(frozen=True)
class Factor:
    poly: MultiPoly
    multiplicity: int = 1
    tag: str = "unknown"


class FactoredPoly:
    """A polynomial kept as a product of tracked, pairwise non-proportional factors."""

    def __init__(self, factors: Sequence[Factor | MultiPoly]):
        fs = [f if isinstance(f, Factor) else Factor(f, 1, _guess_tag(f)) for f in factors]
        for i, a in enumerate(fs):
            if a.tag not in FACTOR_TAGS:
                raise ValueError(f"unknown factor tag {a.tag!r}")
            if a.poly.degree() < 1:
                raise ValueError("factors must be non-constant")
            for b in fs[i + 1:]:
                if a.poly.is_proportional(b.poly):
                    raise ValueError("factors must be pairwise non-proportional")
        self.factors = list(fs)
        self._product: MultiPoly | None = None

    @property
    def product(self) -> MultiPoly:
        if self._product is None:
            out = MultiPoly.constant(3, 1)
            for f in self.factors:
                out = out * f.poly ** f.multiplicity
            self._product = out
        return self._product

    def degree(self) -> int:
        return sum(f.poly.degree() * f.multiplicity for f in self.factors)

    def contains_line(self, line: Line3) -> bool:
        return any(contains_line(f.poly, line) for f in self.factors)

    def shares_factor_with(self, other: FactoredPoly) -> bool:
        return any(a.poly.is_proportional(b.poly) for a in self.factors for b in other.factors)

    def serialize(self) -> list[dict]:
        return [{"tag": f.tag, "multiplicity": f.multiplicity, "terms": poly_terms(f.poly)}
                for f in self.factors]


def _guess_tag(f: MultiPoly) -> str:
    return "plane" if f.degree() == 1 else "unknown"


class CommonFactorError(ValueError):
    pass


def shared_lines_bound_check(p: FactoredPoly, q: FactoredPoly,
                             candidate_lines: Sequence[Line3]) -> tuple[int, int]:
    """(#candidate lines in Z(p) ∩ Z(q), deg p * deg q); the first never exceeds the second."""
    if p.shares_factor_with(q):
        raise CommonFactorError("p and q share a factor")
    seen = set()
    shared = 0
    for l in candidate_lines:
        if l in seen:
            continue
        seen.add(l)
        if p.contains_line(l) and q.contains_line(l):
            shared += 1
    bound = p.degree() * q.degree()
    if shared > bound:
        raise AssertionError(f"{shared} shared lines exceed the bound {bound}")
    return shared, bound


def factorwise_ruledness(fp: FactoredPoly, samplers: dict[int, Callable[[int], Sequence]],
                         sample_count: int) -> list[dict]:
    """Ruledness verdict per tracked factor.

    Planes and quadrics are ruled over the complex numbers, so only factors of
    degree >= 3 are scanned; ``samplers`` maps factor index to a point sampler.
    """
    out = []
    for i, f in enumerate(fp.factors):
        if f.poly.degree() < 3:
            out.append({"factor": i, "tag": f.tag, "ruled": True, "scanned": False})
            continue
        if i not in samplers:
            raise ValueError(f"no sampler supplied for factor {i} of degree {f.poly.degree()}")
        rep = ruledness_scan(f.poly, samplers[i], sample_count)
        out.append({"factor": i, "tag": f.tag, "ruled": rep.consistent_with_ruled,
                    "scanned": True, "report": rep})
    return out


# -- named example surfaces --------------------------------------------------------

X = MultiPoly.var(3, 0)
Y = MultiPoly.var(3, 1)
Z = MultiPoly.var(3, 2)


@dataclass(frozen=True)
class LibrarySurface:
    name: str
    poly: MultiPoly
    sampler: Callable[[int], Point3]
    lines: Callable[[], list[Line3]]
    tag: str


def _param(i: int) -> Fraction:
    # deterministic rational parameters: 1, -1, 2, -1/2, 3, -1/3, ...
    k = i // 2 + 1
    return Fraction(k) if i % 2 == 0 else Fraction(-1, k)


def _cone_sample(i):
    s = _param(i)
    h = Fraction(i % 5 + 1)
    return (h * (1 - s * s) / (1 + s * s), h * 2 * s / (1 + s * s), h)


def _cone_lines():
    out = []
    for i in range(6):
        x, y, z = _cone_sample(i)
        out.append(Line3((0, 0, 0), (x, y, z)))
    return out


def _regulus_sample(i):
    s, t = _param(i), _param(i + 3)
    return (s, t, s * t)


def _regulus_lines():
    return ([Line3((0, c, 0), (1, 0, c)) for c in range(-2, 3)]
            + [Line3((c, 0, 0), (0, 1, c)) for c in range(-2, 3)])


def _whitney_sample(i):
    s, t = _param(i), _param(i + 7)
    return (s * t, t, s * s)


def _whitney_lines():
    return [Line3((0, 0, s * s), (s, 1, 0)) for s in map(Fraction, range(-3, 4))]


def _fermat_sample(i):
    # Mahler's identity (9t^4)^3 + (3t - 9t^4)^3 + (1 - 9t^3)^3 = 1
    t = _param(i)
    return (9 * t ** 4, 3 * t - 9 * t ** 4, 1 - 9 * t ** 3)


def _fermat_lines():
    return [Line3((1, 0, 0), (0, 1, -1)), Line3((0, 1, 0), (1, 0, -1)), Line3((0, 0, 1), (1, -1, 0))]


LIBRARY: dict[str, LibrarySurface] = {
    "cone": LibrarySurface("cone", X * X + Y * Y - Z * Z, _cone_sample, _cone_lines, "ruled-other"),
    "regulus": LibrarySurface("regulus", Z - X * Y, _regulus_sample, _regulus_lines, "regulus"),
    "whitney": LibrarySurface("whitney", X * X - Y * Y * Z, _whitney_sample, _whitney_lines, "ruled-other"),
    "fermat3": LibrarySurface("fermat3", X ** 3 + Y ** 3 + Z ** 3 - 1, _fermat_sample, _fermat_lines, "unruled"),
}
