"""Dense univariate polynomials over Q with Sturm-sequence root counting."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

INF = float("inf")


def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class UniPoly:
    """Polynomial in one variable; ``coeffs[i]`` multiplies ``t**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs: tuple[Fraction, ...] = tuple(
            _trim([Fraction(c) for c in coeffs]))

    @classmethod
    def constant(cls, c) -> UniPoly:
        return cls([c])

    @classmethod
    def linear(cls, c0, c1) -> UniPoly:
        return cls([c0, c1])

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __add__(self, other: UniPoly) -> UniPoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    def __neg__(self) -> UniPoly:
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other: UniPoly) -> UniPoly:
        return self + (-other)

    def __mul__(self, other) -> UniPoly:
        if not isinstance(other, UniPoly):
            other = Fraction(other)
            return UniPoly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> UniPoly:
        result = UniPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, t) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self) -> UniPoly:
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> UniPoly:
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return UniPoly([c / lc for c in self.coeffs])

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        lc = other.coeffs[-1]
        m = len(other.coeffs)
        for k in range(dq, -1, -1):
            c = rem[k + m - 1] / lc
            quot[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] -= c * b
        return UniPoly(quot), UniPoly(rem[: m - 1])

    def __mod__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[1]

    def __floordiv__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[0]

    def sign_at(self, t) -> int:
        """Sign at ``t``; ``t`` may be ``+inf``/``-inf``."""
        if t == INF or t == -INF:
            if not self.coeffs:
                return 0
            s = 1 if self.coeffs[-1] > 0 else -1
            if t == -INF and self.degree() % 2:
                s = -s
            return s
        v = self(t)
        return (v > 0) - (v < 0)


def gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd; gcd(0, 0) is the zero polynomial."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(q: UniPoly) -> UniPoly:
    if q.degree() <= 0:
        return q.monic()
    g = gcd(q, q.derivative())
    return (q // g).monic()


def sturm_sequence(q: UniPoly) -> list[UniPoly]:
    seq = [q, q.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def _variations(seq: Sequence[UniPoly], t) -> int:
    signs = [s for s in (p.sign_at(t) for p in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(q: UniPoly, lo=-INF, hi=INF) -> int:
    """Number of distinct real roots of ``q`` in the closed interval [lo, hi]."""
    if q.is_zero():
        raise ValueError("count_real_roots: zero polynomial has infinitely many roots")
    if lo != -INF and hi != INF and Fraction(lo) > Fraction(hi):
        raise ValueError(f"empty interval [{lo}, {hi}]")
    sf = squarefree_part(q)
    if sf.degree() <= 0:
        return 0
    seq = sturm_sequence(sf)
    n = _variations(seq, lo) - _variations(seq, hi)
    if lo != -INF and sf(lo) == 0:
        n += 1
    return n


def root_bound(q: UniPoly) -> Fraction:
    """Cauchy bound: every real root lies strictly inside (-B, B)."""
    lc = abs(q.leading())
    return 1 + max((abs(c) / lc for c in q.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(q: UniPoly) -> list[tuple[Fraction, Fraction]]:
    """Sorted rational intervals, one per distinct real root of ``q``.

    An interval is either ``(r, r)`` for an exact rational root or an open
    interval ``(a, b)`` with exactly one root inside and no root at either end.
    Consecutive intervals are strictly separated (``b_i < a_{i+1}``).
    """
    if q.is_zero():
        raise ValueError("isolate_real_roots: zero polynomial")
    sf = squarefree_part(q)
    if sf.degree() <= 0:
        return []
    seq = sturm_sequence(sf)

    def count(a, b):
        # roots in the half-open interval (a, b]
        return _variations(seq, a) - _variations(seq, b)

    bound = root_bound(sf)
    found: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        n = count(a, b)
        if n == 0:
            continue
        if n == 1:
            found.append((b, b) if sf(b) == 0 else (a, b))
            continue
        m = (a + b) / 2
        stack.append((a, m))
        stack.append((m, b))
    found.sort()
    return _separate(sf, count, found)


def _shrink(sf, count, a, b):
    """Halve an isolating interval (a, b) once, keeping its root."""
    m = (a + b) / 2
    if sf(m) == 0:
        return m, m
    return (a, m) if count(a, m) == 1 else (m, b)


def _separate(sf, count, found):
    out = [list(iv) for iv in found]
    for iv in out:
        # open ends must not be roots themselves
        while iv[0] != iv[1] and sf(iv[0]) == 0:
            iv[0], iv[1] = _shrink(sf, count, iv[0], iv[1])
    changed = True
    while changed:
        changed = False
        for left, right in zip(out, out[1:]):
            if left[1] >= right[0]:
                changed = True
                if left[0] != left[1]:
                    left[0], left[1] = _shrink(sf, count, left[0], left[1])
                if right[0] != right[1]:
                    right[0], right[1] = _shrink(sf, count, right[0], right[1])
    return [(a, b) for a, b in out]


def sample_between_roots(q: UniPoly) -> list[Fraction]:
    """One rational parameter in each connected component of {q != 0}.

    The zero polynomial has no such component and yields ``[]``.
    """
    if q.is_zero():
        return []
    ivs = isolate_real_roots(q)
    if not ivs:
        return [Fraction(0)]
    samples = [ivs[0][0] - 1]
    for (_, b), (a, _) in zip(ivs, ivs[1:]):
        samples.append((b + a) / 2)
    samples.append(ivs[-1][1] + 1)
    return samples
