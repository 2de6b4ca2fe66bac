"""Discrete polynomial ham-sandwich cuts and iterated cell decompositions in 3-space.

A polynomial ``f`` bisects a finite set ``S`` when at most ``floor(|S|/2)``
points of ``S`` have ``f > 0`` and at most ``floor(|S|/2)`` have ``f < 0``.
Polynomials of degree <= d are coefficient vectors over the monomial basis of
``monomials_upto(3, d)``, so evaluation at a point is a dot product with its
Veronese lift.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, gcd, lcm
from typing import Sequence

import numpy as np

from .exact.linalg import nullspace, solve
from .exact.poly import MultiPoly, from_coefficients, monomials_upto, product, veronese
from .exact.univariate import UniPoly, sample_between_roots
from .lines import Line3

Point3 = tuple[Fraction, Fraction, Fraction]

EXACT_MAX_POINTS = 60
EXACT_MAX_CANDIDATES = 200_000


class BudgetExceeded(ValueError):
    """Input too large for the exhaustive engine; use ``bisect_heuristic``."""


class EngineFailure(RuntimeError):
    def __init__(self, message: str, partial: CellDecomposition | None = None,
                 failure: Failure | None = None):
        super().__init__(message)
        self.partial = partial
        self.failure = failure


def as_point3(p: Sequence) -> Point3:
    if len(p) != 3:
        raise ValueError(f"expected a point of 3-space, got {p!r}")
    return (Fraction(p[0]), Fraction(p[1]), Fraction(p[2]))


def max_sets(d: int) -> int:
    """Number of sets a degree-d polynomial can bisect simultaneously."""
    return comb(d + 3, 3) - 1


def degree_for_step(j: int) -> int:
    """Smallest d with C(d+3, 3) - 1 >= 2^(j-1)."""
    d = 1
    while max_sets(d) < 2 ** (j - 1):
        d += 1
    return d


def _integer_lift(x: Point3, basis) -> list[int]:
    # positive rescaling of the Veronese vector: same signs, integer arithmetic
    row = veronese(x, basis)
    den = 1
    for v in row:
        den = lcm(den, v.denominator)
    return [int(v * den) for v in row]


def _sign(vec: Sequence[int], lift: Sequence[int]) -> int:
    s = sum(a * b for a, b in zip(vec, lift))
    return (s > 0) - (s < 0)


# -- verification ---------------------------------------------------------------------

@dataclass(frozen=True)
class SetMargin:
    size: int
    positive: int
    negative: int

    @property
    def excess(self) -> int:
        """max(#pos, #neg) - floor(size/2); bisected iff <= 0."""
        return max(self.positive, self.negative) - self.size // 2


def bisection_margins(f: MultiPoly, sets: Sequence[Sequence[Sequence]]) -> list[SetMargin]:
    out = []
    for S in sets:
        vals = [f.evaluate(x) for x in S]
        out.append(SetMargin(len(vals), sum(1 for v in vals if v > 0), sum(1 for v in vals if v < 0)))
    return out


def verify_bisection(f: MultiPoly, sets: Sequence[Sequence[Sequence]]) -> bool:
    """Exact check that ``f`` is nonzero and bisects every set (any dimension)."""
    if f.is_zero():
        return False
    return all(m.excess <= 0 for m in bisection_margins(f, sets))


def _check_sets(sets, d: int) -> list[list[Point3]]:
    if d < 1:
        raise ValueError("degree must be >= 1")
    if len(sets) > max_sets(d):
        raise ValueError(f"{len(sets)} sets exceed C({d}+3,3) - 1 = {max_sets(d)}")
    return [[as_point3(x) for x in S] for S in sets]


class _Lifted:
    """Distinct points of all sets with integer lifts, and per-set index lists."""

    def __init__(self, sets: list[list[Point3]], d: int):
        self.basis = monomials_upto(3, d)
        index: dict[Point3, int] = {}
        self.points: list[Point3] = []
        self.members: list[list[int]] = []
        for S in sets:
            ids = []
            for x in S:
                if x not in index:
                    index[x] = len(self.points)
                    self.points.append(x)
                ids.append(index[x])
            self.members.append(ids)
        self.lifts = [_integer_lift(x, self.basis) for x in self.points]

    def excess(self, vec: Sequence[int]) -> list[int]:
        signs = [_sign(vec, l) for l in self.lifts]
        out = []
        for ids in self.members:
            pos = sum(1 for i in ids if signs[i] > 0)
            neg = sum(1 for i in ids if signs[i] < 0)
            out.append(max(pos, neg) - len(ids) // 2)
        return out

    def bisects(self, vec: Sequence[int]) -> bool:
        return any(vec) and all(e <= 0 for e in self.excess(vec))

    def refine(self, vec: Sequence[int]) -> list[int]:
        """Move zero points off the cut where the bisection allows it.

        Each zero point gets a target sign on the lighter side of its sets (or
        stays zero); a correction ``g`` with those values is added as
        ``K * f + g`` with ``K`` large enough to keep every other sign.
        """
        vec = [int(v) for v in vec]
        signs = [_sign(vec, l) for l in self.lifts]
        zeros = [i for i, s in enumerate(signs) if s == 0]
        if not zeros:
            return vec
        owners: dict[int, list[int]] = {}
        pos, neg = [], []
        for k, ids in enumerate(self.members):
            pos.append(sum(1 for i in ids if signs[i] > 0))
            neg.append(sum(1 for i in ids if signs[i] < 0))
            for i in ids:
                owners.setdefault(i, []).append(k)
        rows = [self.lifts[i] for i in zeros]
        g = None
        for target in self._targets(zeros, owners, pos, neg):
            g = solve(rows, target)
            if g is not None:
                break
        if g is None:
            return vec
        den = 1
        for v in g:
            den = lcm(den, v.denominator)
        gi = [int(v * den) for v in g]
        K = 1
        for l, s in zip(self.lifts, signs):
            if s:
                fv = abs(sum(a * b for a, b in zip(vec, l)))
                gv = abs(sum(a * b for a, b in zip(gi, l)))
                K = max(K, gv // fv + 1)
        out = [K * a + b for a, b in zip(vec, gi)]
        h = 0
        for v in out:
            h = gcd(h, v)
        out = [v // h for v in out]
        return out if self.bisects(out) else vec

    def _targets(self, zeros, owners, pos, neg, limit: int = 2000):
        """Sign targets for the zero points, most points moved first (depth-first)."""
        pos, neg = list(pos), list(neg)
        target = [0] * len(zeros)
        found = 0

        def options(i):
            ks = owners.get(i, [])
            mult = {k: self.members[k].count(i) for k in ks}
            fits = {t: all((pos if t > 0 else neg)[k] + mult[k] <= len(self.members[k]) // 2
                           for k in ks) for t in (1, -1)}
            lighter = 1 if sum(pos[k] for k in ks) <= sum(neg[k] for k in ks) else -1
            return [t for t in (lighter, -lighter) if fits[t]] + [0], ks, mult

        def walk(j):
            nonlocal found
            if found >= limit:
                return
            if j == len(zeros):
                if any(target):
                    found += 1
                    yield list(target)
                return
            opts, ks, mult = options(zeros[j])
            if len(zeros) > 12:
                opts = opts[:1]
            for t in opts:
                side = pos if t > 0 else neg
                if t:
                    for k in ks:
                        side[k] += mult[k]
                target[j] = t
                yield from walk(j + 1)
                if t:
                    for k in ks:
                        side[k] -= mult[k]
            target[j] = 0

        yield from walk(0)

    def poly(self, vec: Sequence) -> MultiPoly:
        return from_coefficients(3, self.basis, vec).scale_to_integers()


# -- exhaustive engine ---------------------------------------------------------------

def bisect_exact(sets: Sequence[Sequence[Sequence]], d: int,
                 max_points: int = EXACT_MAX_POINTS,
                 max_candidates: int = EXACT_MAX_CANDIDATES) -> MultiPoly:
    """Simultaneous bisector of degree <= d by exhaustive search over lifted hyperplanes.

    If some bisector exists, the cone of polynomials whose sign at every point
    is weakly that of the bisector (zero where it is zero) consists of
    bisectors.  Either it contains a polynomial vanishing on all points, or it
    is pointed and has an extreme ray cut out by M = C(d+3,3) - 1 points with
    independent lifts.  Enumerating those M-subsets is therefore complete
    without any perturbation.
    """
    sets = _check_sets(sets, d)
    lifted = _Lifted(sets, d)
    n = len(lifted.points)
    M = max_sets(d)
    if sum(len(S) for S in sets) > max_points or (n > M and comb(n, M) > max_candidates):
        raise BudgetExceeded(
            f"exact engine budget exceeded ({n} distinct points, degree {d}); "
            "use bisect_heuristic")
    if n == 0:
        return MultiPoly.constant(3, 1)
    common = nullspace(lifted.lifts)
    if common:
        return lifted.poly(lifted.refine(common[0]))
    seen = set()
    for combo in combinations(range(n), M):
        ns = nullspace([lifted.lifts[i] for i in combo])
        if len(ns) != 1 or ns[0] in seen:
            continue
        seen.add(ns[0])
        if lifted.bisects(ns[0]):
            return lifted.poly(lifted.refine(ns[0]))
    raise EngineFailure("exhaustive search found no bisector; existence guarantees one")


# -- heuristic engine ---------------------------------------------------------------

@dataclass
class Failure:
    """Best margins reached by an unsuccessful heuristic run."""

    margins: list[int]
    restarts: int
    iterations: int

    @property
    def worst_excess(self) -> int:
        return max(self.margins, default=0)


def _normalizer(points: Sequence[Point3]):
    """Exact affine map to roughly the unit cube (center, power-of-two scale)."""
    if not points:
        return (Fraction(0),) * 3, Fraction(1)
    center = tuple(
        Fraction(float(sum(x[i] for x in points) / len(points))).limit_denominator(1024)
        for i in range(3))
    spread = max(abs(x[i] - center[i]) for x in points for i in range(3))
    scale = Fraction(1)
    while scale < spread:
        scale *= 2
    while scale / 2 >= spread and spread > 0:
        scale /= 2
    return center, scale


def _affine_pullback(f: MultiPoly, center, scale) -> MultiPoly:
    """f((x - center) / scale) as a polynomial in x."""
    subs = [MultiPoly.linear([Fraction(int(i == k)) / scale for i in range(3)], -center[k] / scale)
            for k in range(3)]
    out = MultiPoly(3)
    for e, c in f.terms.items():
        out = out + c * product((subs[i] ** k for i, k in enumerate(e) if k), 3)
    return out


class _FloatProblem:
    def __init__(self, lifted: _Lifted):
        A = np.array([[float(v) for v in row] for row in lifted.lifts], dtype=float)
        norms = np.linalg.norm(A, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        self.A = A / norms
        self.members = [np.array(ids, dtype=int) for ids in lifted.members]

    def medians(self, f: np.ndarray, even_too: bool) -> list[int]:
        v = self.A @ f
        out = []
        for ids in self.members:
            if len(ids) and (len(ids) % 2 or even_too):
                order = ids[np.argsort(v[ids], kind="stable")]
                out.append(int(order[(len(ids) - 1) // 2]))
        return out

    def project(self, f: np.ndarray, zeros: list[int]) -> np.ndarray:
        if not zeros:
            return f
        Q, _ = np.linalg.qr(self.A[zeros].T)
        g = f - Q @ (Q.T @ f)
        n = np.linalg.norm(g)
        return g / n if n > 0 else g

    def excess(self, f: np.ndarray, eps: float = 1e-10) -> int:
        v = self.A @ f
        w = -1
        for ids in self.members:
            if len(ids):
                vals = v[ids]
                w = max(w, int((vals > eps).sum()) - len(ids) // 2,
                        int((vals < -eps).sum()) - len(ids) // 2)
        return w

    def gauss_newton(self, f: np.ndarray, tau: float) -> tuple[np.ndarray, float]:
        rows, res = [], []
        for ids in self.members:
            if not len(ids):
                continue
            S = self.A[ids]
            t = np.tanh(S @ f / tau)
            res.append(t.sum())
            rows.append(((1 - t * t) / tau) @ S)
        r = np.array(res)
        J = np.array(rows)
        J = J - np.outer(J @ f, f)
        delta = -np.linalg.lstsq(J, r, rcond=None)[0]
        step = min(1.0, 0.3 / (np.linalg.norm(delta) + 1e-30))
        g = f + step * delta
        return g / np.linalg.norm(g), float(np.abs(r).max())


def _exact_finish(lifted: _Lifted, f: np.ndarray, zeros: list[int]) -> list[int] | None:
    """Round ``f`` to an integer vector vanishing exactly at ``zeros``; verified."""
    m = len(lifted.basis)
    if zeros:
        basis = nullspace([lifted.lifts[i] for i in zeros])
        if not basis:
            return None
    else:
        basis = [tuple(int(i == k) for i in range(m)) for k in range(m)]
    basis = [[int(v) for v in b] for b in basis]
    B = np.array([[float(v) for v in b] for b in basis], dtype=float)
    # basis vectors are in the original monomial coordinates; the float problem
    # rescaled each lift by a positive factor, which does not change f itself
    coef = np.linalg.lstsq(B.T, f, rcond=None)[0]
    big = np.abs(coef).max()
    if not np.isfinite(big) or big == 0:
        return None
    for bits in (30, 50):
        c = [int(round(x)) for x in coef / big * 2 ** bits]
        vec = [sum(ci * b[k] for ci, b in zip(c, basis)) for k in range(m)]
        g = 0
        for v in vec:
            g = gcd(g, v)
        if g == 0:
            continue
        vec = [v // g for v in vec]
        if lifted.bisects(vec):
            return lifted.refine(vec)
    return None


def bisect_heuristic(sets: Sequence[Sequence[Sequence]], d: int,
                     rng: random.Random | None = None,
                     restarts: int = 20, iterations: int = 300) -> MultiPoly | Failure:
    """Simultaneous bisector by smoothed Gauss-Newton with exact finishing.

    The float search drives sum(tanh(f(x)/tau)) to zero on every set while
    annealing tau; each iterate is projected to vanish at the median of every
    odd set (and, as a fallback, every set), rounded to an exact integer
    coefficient vector vanishing exactly at those medians, and accepted only
    after exact sign verification.
    """
    sets = _check_sets(sets, d)
    rng = rng or random.Random(0)
    allpts = [x for S in sets for x in S]
    center, scale = _normalizer(allpts)
    moved = [[tuple((x[i] - center[i]) / scale for i in range(3)) for x in S] for S in sets]
    lifted = _Lifted(moved, d)
    if not lifted.points:
        return MultiPoly.constant(3, 1)
    prob = _FloatProblem(lifted)
    nprng = np.random.default_rng(rng.getrandbits(64))
    m = len(lifted.basis)
    best = [len(ids) for ids in lifted.members]
    best_worst = max(best)
    for r in range(restarts):
        f = nprng.standard_normal(m)
        f /= np.linalg.norm(f)
        tau = 1.0
        for it in range(iterations):
            for even_too in (False, True):
                zeros = prob.medians(f, even_too)
                g = prob.project(f, zeros)
                if prob.excess(g) <= 0:
                    vec = _exact_finish(lifted, g, zeros)
                    if vec is not None:
                        return _affine_pullback(lifted.poly(vec), center, scale).scale_to_integers()
            f, worst_residual = prob.gauss_newton(f, tau)
            if worst_residual < 1.0:
                tau *= 0.7
        vec = [int(round(x * 2 ** 30)) for x in prob.project(f, prob.medians(f, False))]
        if any(vec):
            ex = lifted.excess(vec)
            if max(ex) < best_worst:
                best, best_worst = ex, max(ex)
    return Failure(best, restarts, iterations)


# -- cell decomposition ---------------------------------------------------------------

@dataclass
class CellDecomposition:
    points: list[Point3]
    cut_polys: list[MultiPoly] = field(default_factory=list)
    cells: dict[str, list[int]] = field(default_factory=lambda: {"": []})
    surface_points: list[int] = field(default_factory=list)
    _product: MultiPoly | None = field(default=None, repr=False)

    @property
    def J(self) -> int:
        return len(self.cut_polys)

    @property
    def degrees(self) -> list[int]:
        return [p.degree() for p in self.cut_polys]

    @property
    def product_degree(self) -> int:
        return sum(self.degrees)

    @property
    def product(self) -> MultiPoly:
        if self._product is None:
            self._product = product(self.cut_polys, 3)
        return self._product

    def sign_vector(self, x: Sequence) -> str | None:
        """Cell key of ``x``; ``None`` if some cut polynomial vanishes there."""
        key = []
        for p in self.cut_polys:
            v = p.evaluate(x)
            if v == 0:
                return None
            key.append("+" if v > 0 else "-")
        return "".join(key)

    def cell_size_histogram(self) -> dict[int, int]:
        """Cell size -> number of sign vectors (out of 2^J) with that many points."""
        hist: dict[int, int] = {}
        for key in _all_keys(self.J):
            n = len(self.cells.get(key, ()))
            hist[n] = hist.get(n, 0) + 1
        return dict(sorted(hist.items()))

    def degree_constant(self) -> float:
        """C in deg(product) = C * 2^(J/3)."""
        return self.product_degree / 2 ** (self.J / 3)

    def verify(self) -> None:
        """Exact postconditions; raises AssertionError on violation."""
        n = len(self.points)
        seen = sorted(i for ids in self.cells.values() for i in ids) + sorted(self.surface_points)
        if sorted(seen) != list(range(n)):
            raise AssertionError("cells and surface points do not partition the input")
        for key, ids in self.cells.items():
            if len(ids) * 2 ** self.J > n:
                raise AssertionError(f"cell {key} holds {len(ids)} > 2^-J * {n} points")
            for i in ids:
                if self.sign_vector(self.points[i]) != key:
                    raise AssertionError(f"point {i} is not in cell {key}")
        for i in self.surface_points:
            if self.sign_vector(self.points[i]) is not None:
                raise AssertionError(f"point {i} is not on the surface")

    def report(self) -> dict:
        return {
            "J": self.J,
            "degrees": self.degrees,
            "product_degree": self.product_degree,
            "degree_constant_approx": round(self.degree_constant(), 6),
            "cell_sizes": {str(k): v for k, v in self.cell_size_histogram().items()},
            "max_cell_size": max((len(v) for v in self.cells.values()), default=0),
            "surface_point_count": len(self.surface_points),
        }


def _primitive(f: MultiPoly) -> MultiPoly:
    """Positive multiple of ``f`` with coprime integer coefficients; signs are kept."""
    g = f.scale_to_integers()
    e, c = f.sorted_terms()[0]
    return g if (g.terms[e] > 0) == (c > 0) else -g


def _all_keys(J: int) -> list[str]:
    keys = [""]
    for _ in range(J):
        keys = [k + s for k in keys for s in "+-"]
    return keys


ENGINES = ("exact", "heuristic")


def build_partition(points: Sequence[Sequence], J: int, engine: str = "heuristic",
                    rng: random.Random | None = None) -> CellDecomposition:
    """J rounds of simultaneous bisection of all current cells.

    Round j uses degree ``degree_for_step(j)``; cells are keyed by the sign
    string of the cut polynomials and points where a cut vanishes move to the
    surface.
    """
    if J < 1:
        raise ValueError("J must be >= 1")
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}")
    rng = rng or random.Random(0)
    pts = [as_point3(p) for p in points]
    dec = CellDecomposition(pts, cells={"": list(range(len(pts)))})
    for j in range(1, J + 1):
        d = degree_for_step(j)
        keys = sorted(dec.cells)
        sets = [[pts[i] for i in dec.cells[k]] for k in keys]
        if engine == "exact":
            try:
                f = bisect_exact(sets, d)
            except (BudgetExceeded, EngineFailure) as e:
                raise EngineFailure(f"step {j}: {e}", partial=dec) from e
        else:
            f = bisect_heuristic(sets, d, rng)
            if isinstance(f, Failure):
                raise EngineFailure(
                    f"step {j}: heuristic engine failed (worst excess {f.worst_excess})",
                    partial=dec, failure=f)
        if not verify_bisection(f, sets):
            raise AssertionError(f"step {j}: engine returned an unverified cut")
        f = _primitive(f)
        cells: dict[str, list[int]] = {}
        for k in keys:
            pos, neg = [], []
            for i in dec.cells[k]:
                v = f.evaluate(pts[i])
                if v > 0:
                    pos.append(i)
                elif v < 0:
                    neg.append(i)
                else:
                    dec.surface_points.append(i)
            if len(pos) > len(dec.cells[k]) // 2 or len(neg) > len(dec.cells[k]) // 2:
                raise AssertionError(f"step {j}: cell {k} was not halved")
            cells[k + "+"] = pos
            cells[k + "-"] = neg
        dec.cut_polys.append(f)
        dec.cells = {k: v for k, v in cells.items() if v}
    dec.surface_points.sort()
    dec.verify()
    return dec


@dataclass(frozen=True)
class LineCrossing:
    count: int
    contained_in_z: bool = False


def cells_met_by_line(dec: CellDecomposition, line: Line3) -> LineCrossing:
    """Number of distinct cells (sign vectors) met by ``line``; at most deg + 1."""
    restricted = [p.compose_univariate([UniPoly([b, v]) for b, v in zip(line.base, line.dir)])
                  for p in dec.cut_polys]
    if any(r.is_zero() for r in restricted):
        return LineCrossing(0, True)
    q = UniPoly([1])
    for r in restricted:
        q = q * r
    keys = {tuple(r(t) > 0 for r in restricted) for t in sample_between_roots(q)}
    if len(keys) > dec.product_degree + 1:
        raise AssertionError(f"line meets {len(keys)} cells, more than degree + 1")
    return LineCrossing(len(keys))


def random_points3(n: int, rng: random.Random, den: int = 1000) -> list[Point3]:
    """``n`` distinct points with coordinates k/den, |k| <= den."""
    pts: set[Point3] = set()
    while len(pts) < n:
        pts.add(tuple(Fraction(rng.randint(-den, den), den) for _ in range(3)))
    return sorted(pts)
