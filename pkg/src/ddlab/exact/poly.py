"""Sparse multivariate polynomials with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import factorial, gcd, lcm
from typing import Iterable, Mapping, Sequence

from .univariate import UniPoly

Exponent = tuple[int, ...]


def monomials(nvars: int, degree: int) -> list[Exponent]:
    """All exponent vectors of total degree exactly ``degree``, lex-descending."""
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


def monomials_upto(nvars: int, degree: int) -> list[Exponent]:
    """Exponent vectors of total degree <= ``degree``, graded (constant first)."""
    return [e for d in range(degree + 1) for e in monomials(nvars, d)]


class MultiPoly:
    """Immutable sparse polynomial in a fixed number of variables.

    ``terms`` maps exponent tuples to nonzero ``Fraction`` coefficients.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not have {nvars} entries")
                c = Fraction(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> MultiPoly:
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> MultiPoly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> MultiPoly:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> MultiPoly:
        """``sum(coeffs[i] * x_i) + const``."""
        n = len(coeffs)
        terms = {(0,) * n: const}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, terms)

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponent, Fraction]) -> MultiPoly:
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    # -- structure ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, indices: Iterable[int]) -> int:
        idx = list(indices)
        return max((sum(e[i] for i in idx) for e in self.terms), default=-1)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-x for x in kv[0])))

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {self.to_string()!r})"

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = ("x", "y", "z") if self.nvars == 3 else [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return MultiPoly.constant(self.nvars, other)

    def __add__(self, other) -> MultiPoly:
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> MultiPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MultiPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            c = Fraction(other)
            if not c:
                return MultiPoly(self.nvars)
            return MultiPoly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MultiPoly:
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale_to_integers(self) -> MultiPoly:
        """Positive multiple with coprime integer coefficients, leading term positive."""
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        nums = {e: c.numerator * (den // c.denominator) for e, c in self.terms.items()}
        g = 0
        for v in nums.values():
            g = gcd(g, v)
        lead = self.sorted_terms()[0][0]
        if nums[lead] < 0:
            g = -g
        return MultiPoly._raw(self.nvars, {e: Fraction(v // g) for e, v in nums.items()})

    def is_proportional(self, other: MultiPoly) -> bool:
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if self.terms.keys() != other.terms.keys():
            return False
        return self.scale_to_integers() == other.scale_to_integers()

    # -- calculus / evaluation -------------------------------------------------
    def diff(self, i: int) -> MultiPoly:
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] = k - 1
                out[tuple(f)] = c * k
        return MultiPoly._raw(self.nvars, out)

    def gradient(self) -> list[MultiPoly]:
        return [self.diff(i) for i in range(self.nvars)]

    def __call__(self, *point) -> Fraction:
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        pts = [Fraction(x) for x in point]
        powers: list[dict[int, Fraction]] = [{0: Fraction(1)} for _ in pts]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    if k not in cache:
                        cache[k] = pts[i] ** k
                    term *= cache[k]
            total += term
        return total

    def substitute_prefix(self, values: Sequence) -> MultiPoly:
        """Fix the first ``len(values)`` variables; return a polynomial in the rest."""
        m = len(values)
        vals = [Fraction(v) for v in values]
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            term = c
            for i in range(m):
                if e[i]:
                    term *= vals[i] ** e[i]
            if term:
                rest = e[m:]
                out[rest] = out.get(rest, 0) + term
        return MultiPoly(self.nvars - m, out)

    def compose_univariate(self, subs: Sequence[UniPoly]) -> UniPoly:
        """Substitute a univariate polynomial for each variable."""
        cache: list[dict[int, UniPoly]] = [{0: UniPoly([1]), 1: s} for s in subs]

        def power(i, k):
            c = cache[i]
            if k not in c:
                c[k] = power(i, k - 1) * subs[i]
            return c[k]

        acc: list[Fraction] = []
        for e, c in self.terms.items():
            term = UniPoly([c])
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            coeffs = term.coeffs
            if len(coeffs) > len(acc):
                acc.extend([Fraction(0)] * (len(coeffs) - len(acc)))
            for j, v in enumerate(coeffs):
                acc[j] += v
        return UniPoly(acc)


def restrict_to_line(p: MultiPoly, base: Sequence, direction: Sequence) -> UniPoly:
    """``q(t) = p(base + t * direction)``."""
    if p.nvars != len(base) or len(base) != len(direction):
        raise ValueError("dimension mismatch between polynomial and line")
    if all(Fraction(d) == 0 for d in direction):
        raise ValueError("restrict_to_line: zero direction vector")
    subs = [UniPoly([b, d]) for b, d in zip(base, direction)]
    return p.compose_univariate(subs)


def directional_form(p: MultiPoly, order: int) -> MultiPoly:
    """r-th directional derivative of ``p`` as a polynomial in (x, v).

    Returns ``sum_{|a| = r} r!/a! * d^a p(x) * v^a`` in ``2n`` variables; the
    v-part is homogeneous of degree ``order``.
    """
    if order < 1 or order > 3:
        raise ValueError("directional_form supports orders 1, 2, 3")
    n = p.nvars
    out = MultiPoly(2 * n)
    for alpha in monomials(n, order):
        coef = factorial(order)
        for a in alpha:
            coef //= factorial(a)
        d = p
        for i, a in enumerate(alpha):
            for _ in range(a):
                d = d.diff(i)
        if d.is_zero():
            continue
        lifted = {e + alpha: c * coef for e, c in d.terms.items()}
        out = out + MultiPoly(2 * n, lifted)
    return out


def veronese(point: Sequence, basis: Sequence[Exponent]) -> list[Fraction]:
    """Monomial evaluation vector of ``point`` in the given exponent basis."""
    pts = [Fraction(x) for x in point]
    row = []
    for e in basis:
        v = Fraction(1)
        for x, k in zip(pts, e):
            if k:
                v *= x ** k
        row.append(v)
    return row


def from_coefficients(nvars: int, basis: Sequence[Exponent], coeffs: Sequence) -> MultiPoly:
    return MultiPoly(nvars, dict(zip(basis, coeffs)))


X, Y, Z = (MultiPoly.var(3, i) for i in range(3))


def product(polys: Iterable[MultiPoly], nvars: int = 3) -> MultiPoly:
    out = MultiPoly.constant(nvars, 1)
    for p in polys:
        out = out * p
    return out
