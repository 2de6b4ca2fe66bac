"""The grid example: the line family L0, its structured slice oracle, and growth reports.

L0 consists of the S^4 lines from (a, b, 0) to (c, d, 1) with 1 <= a, b, c, d <= S.
At height t = p/q (lowest terms, r = q - p) such a line passes through
((r a + p c)/q, (r b + p d)/q, p/q), so the two horizontal coordinates decouple:
the number of lines through the point (w1/q, w2/q, p/q) is m(w1) * m(w2) with

    m(w) = #{(a, c) in [1, S]^2 : r a + p c = w}.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .lines import IncidenceHistogram, Line3, s_counts_from_frequency
from .motions import line_for_pair
from .points import generate_grid, quadruple_count

# 3/pi^2 from 50 decimal digits of pi; the rational value is within 1e-49 of 3/pi^2
PI_50 = Fraction("3.14159265358979323846264338327950288419716939937510")
THREE_OVER_PI_SQ = 3 / (PI_50 * PI_50)
THREE_OVER_PI_SQ_DIGITS = 49


def _check_S(S: int) -> None:
    if S < 1:
        raise ValueError("grid parameter S must be >= 1")


def pair_for_line(a: int, b: int, c: int, d: int):
    """(p, q) with line_for_pair(p, q) equal to the line from (a, b, 0) to (c, d, 1)."""
    return (a + d - b, b - c + a), (a - d + b, b + c - a)


def build_L0(S: int, cross_check: int | None = 64) -> list[Line3]:
    """The S^4 lines of L0; the first ``cross_check`` are compared with line_for_pair."""
    _check_S(S)
    lines = []
    r = range(1, S + 1)
    for a in r:
        for b in r:
            for c in r:
                for d in r:
                    line = Line3((a, b, 0), (c - a, d - b, 1))
                    if cross_check is None or len(lines) < cross_check:
                        p, q = pair_for_line(a, b, c, d)
                        if line_for_pair(p, q) != line:
                            raise AssertionError(f"line ({a},{b},{c},{d}) differs from L_pq")
                    lines.append(line)
    return lines


# -- one height: F_x overlaps ----------------------------------------------------------

def _check_height(p: int, q: int) -> None:
    if not (0 < p < q) or math.gcd(p, q) != 1:
        raise ValueError(f"height {p}/{q} must satisfy 0 < p < q with gcd(p, q) = 1")


def line_count_1d(w: int, p: int, r: int, S: int) -> int:
    """#{a in [1, S] : c = (w - r a)/p is an integer in [1, S]} by residue counting."""
    lo = max(1, -((p * S - w) // r))  # ceil((w - pS) / r)
    hi = min(S, (w - p) // r)
    if lo > hi:
        return 0
    a0 = (w * pow(r, -1, p)) % p if p > 1 else 0
    return (hi - a0) // p - (lo - 1 - a0) // p


def _frequencies(p: int, r: int, S: int) -> dict[int, int]:
    """w -> m(w) over the possible offsets w = r a + p c."""
    out = {}
    top = (p + r) * S
    for w in range(p + r, top + 1):
        m = line_count_1d(w, p, r, S)
        if m:
            out[w] = m
    return out


def _middle(S: int) -> range:
    # (1/4) S <= a <= (3/4) S
    return range(-(-S // 4), (3 * S) // 4 + 1)


@dataclass
class SliceRecord:
    p: int
    q: int
    S: int
    mult_1d: dict[int, int]
    overlap_hist: dict[int, int]
    X_size: int

    @property
    def height(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def max_overlap(self) -> int:
        return max(self.overlap_hist, default=0)

    def overlap_bound(self) -> Fraction:
        r = self.q - self.p
        return 4 * min(Fraction(self.S ** 2, r * r), Fraction(self.S ** 2, self.p ** 2))


def fx_overlap(p: int, q: int, S: int) -> SliceRecord:
    """|F_x(G) ∩ G| for every point x at height p/q, by lattice counting.

    ``overlap_hist`` maps an overlap size k >= 1 to the number of points at
    this height lying on exactly k lines; ``X_size`` counts the points reached
    from the middle half of G.
    """
    _check_S(S)
    _check_height(p, q)
    r = q - p
    m = _frequencies(p, r, S)
    freq = Counter(m.values())
    hist: Counter = Counter()
    for m1, f1 in freq.items():
        for m2, f2 in freq.items():
            hist[m1 * m2] += f1 * f2
    mid = _middle(S)
    w_mid = {r * a + p * c for a in mid for c in range(1, S + 1)}
    rec = SliceRecord(p, q, S, dict(sorted(freq.items())), dict(sorted(hist.items())), len(w_mid) ** 2)
    if p < S and r < S and rec.max_overlap > rec.overlap_bound():
        raise AssertionError(f"overlap {rec.max_overlap} exceeds the bound at height {p}/{q}")
    return rec


def rich_heights(S: int) -> list[tuple[int, int]]:
    """Heights p/q in (0, 1) where two lines of L0 can meet: p, q - p <= S - 1."""
    return [(p, p + r) for p in range(1, S) for r in range(1, S) if math.gcd(p, r) == 1]


def slab_histogram_oracle(S: int, with_points: bool = False) -> IncidenceHistogram:
    """Exact rich-point histogram of L0 on the closed slab 0 <= z <= 1, no line pairs.

    Two lines meeting strictly inside the slab at height p/q need p | a - a' and
    (q - p) | c - c' with |a - a'|, |c - c'| < S, so only ``rich_heights`` occur.
    The planes z = 0 and z = 1 add 2 S^2 points of multiplicity S^2.
    """
    _check_S(S)
    freq: Counter = Counter()
    points: dict = {}
    if S >= 2:
        freq[S * S] += 2 * S * S
        if with_points:
            for a in range(1, S + 1):
                for b in range(1, S + 1):
                    points[(Fraction(a), Fraction(b), Fraction(0))] = S * S
                    points[(Fraction(a), Fraction(b), Fraction(1))] = S * S
    for p, q in rich_heights(S):
        rec = fx_overlap(p, q, S)
        for k, n in rec.overlap_hist.items():
            if k >= 2:
                freq[k] += n
        if with_points:
            m = _frequencies(p, q - p, S)
            z = Fraction(p, q)
            for w1, m1 in m.items():
                for w2, m2 in m.items():
                    if m1 * m2 >= 2:
                        points[(Fraction(w1, q), Fraction(w2, q), z)] = m1 * m2
    return IncidenceHistogram(points, s_counts_from_frequency(dict(freq)))


def in_closed_slab(x) -> bool:
    return 0 <= x[2] <= 1


# -- reports ----------------------------------------------------------------------

@dataclass
class ScalingReport:
    """Rows (k, |S_k|, |S_k| k^2 / S^6) and log-log fits.

    ``slope`` weights each k by 1/k, i.e. uniformly in log k, so every octave
    of the range counts equally; ``slope_unweighted`` gives every integer k the
    same weight and is dominated by the top octave.
    """

    S: int
    rows: list[tuple[int, int, float]]
    slope: float
    intercept: float
    slope_unweighted: float
    residuals: list[float] = field(default_factory=list)

    @property
    def band(self) -> float:
        """max/min of |S_k| k^2 / S^6 over rows with |S_k| > 0."""
        vals = [r for _, s, r in self.rows if s > 0]
        return max(vals) / min(vals) if vals else math.inf


def _fit(xs: Sequence[float], ys: Sequence[float],
         ws: Sequence[float] | None = None) -> tuple[float, float, list[float]]:
    """Weighted least-squares line y = intercept + slope * x."""
    ws = [1.0] * len(xs) if ws is None else list(ws)
    tw = sum(ws)
    mx = sum(w * x for w, x in zip(ws, xs)) / tw
    my = sum(w * y for w, y in zip(ws, ys)) / tw
    sxx = sum(w * (x - mx) ** 2 for w, x in zip(ws, xs))
    if sxx == 0:
        raise ValueError("need at least two distinct k values for a slope")
    slope = sum(w * (x - mx) * (y - my) for w, x, y in zip(ws, xs, ys)) / sxx
    intercept = my - slope * mx
    return slope, intercept, [y - (intercept + slope * x) for x, y in zip(xs, ys)]


def scaling_report(S: int, k_range: Iterable[int]) -> ScalingReport:
    """|S_k| from the slab oracle, with the log-log slope over k in ``k_range``.

    Values k with |S_k| = 0 are listed but excluded from the fit.
    """
    ks = sorted(set(k_range))
    if not ks:
        raise ValueError("k_range must be nonempty")
    if ks[0] < 2:
        raise ValueError("k_range must start at k >= 2")
    hist = slab_histogram_oracle(S)
    rows = [(k, hist.s(k), hist.s(k) * k * k / S ** 6) for k in ks]
    fit_rows = [(k, s) for k, s, _ in rows if s > 0]
    if len(fit_rows) < 2:
        raise ValueError("fewer than two k values with |S_k| > 0")
    xs = [math.log(k) for k, _ in fit_rows]
    ys = [math.log(s) for _, s in fit_rows]
    slope, intercept, res = _fit(xs, ys, [1 / k for k, _ in fit_rows])
    flat = _fit(xs, ys)[0]
    return ScalingReport(S, rows, slope, intercept, flat, res)


def totient_table(x: int) -> list[int]:
    """phi(0..x) by a sieve."""
    phi = list(range(x + 1))
    for i in range(2, x + 1):
        if phi[i] == i:
            for j in range(i, x + 1, i):
                phi[j] -= phi[j] // i
    return phi


def totient_sum(x: int) -> int:
    if x < 1:
        raise ValueError("x must be >= 1")
    return sum(totient_table(x)[1:])


def totient_sum_gcd(x: int) -> int:
    """Independent count: pairs 1 <= a <= q <= x with gcd(a, q) = 1."""
    return sum(1 for q in range(1, x + 1) for a in range(1, q + 1) if math.gcd(a, q) == 1)


@dataclass
class TotientCheck:
    x: int
    total: int
    main_term: Fraction
    relative_error: Fraction

    @property
    def main_term_approx(self) -> float:
        return float(self.main_term)


def totient_sum_check(x: int) -> TotientCheck:
    """Sum of phi(q), q <= x, against (3/pi^2) x^2; error relative to x^2."""
    total = totient_sum(x)
    main = THREE_OVER_PI_SQ * x * x
    return TotientCheck(x, total, main, abs(total - main) / (x * x))


@dataclass
class GrowthRow:
    S: int
    N: int
    Q: int

    @property
    def ratio(self) -> float:
        return self.Q / (self.N ** 3 * math.log(self.N))


def qp_growth_report(S_range: Iterable[int]) -> list[GrowthRow]:
    Ss = list(S_range)
    if not Ss:
        raise ValueError("S_range must be nonempty")
    out = []
    for S in Ss:
        P = generate_grid(S)
        out.append(GrowthRow(S, P.N, quadruple_count(P)))
    return out
