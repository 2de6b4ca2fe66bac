"""Report assembly: one result dictionary and one CSV table per command.

Exact rationals are written as ``"num/den"`` strings; floats appear only in
fields whose name ends in ``_approx``.
"""

from __future__ import annotations

import csv
import io as _stdio
import json
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .exact.poly import MultiPoly
from .grid import (
    THREE_OVER_PI_SQ_DIGITS,
    build_L0,
    fx_overlap,
    in_closed_slab,
    qp_growth_report,
    rich_heights,
    scaling_report,
    slab_histogram_oracle,
    totient_sum_check,
)
from .io import format_rational, poly_terms
from .lines import (
    Degenerate,
    Line3,
    incidence_histogram,
    intersect,
    SKEW,
    contains_line,
    max_coplanar_cluster,
    regulus_line_count,
)
from .motions import (
    Rotational,
    Translation,
    motion_fibers,
    multiplicity_from_fiber,
    overlap,
    partial_symmetry_counts,
    quadformula_total,
    translation_partial_symmetries,
)
from .partition import CellDecomposition, build_partition, cells_met_by_line
from .points import PointSet2, cs_lower_bound, distance_histogram
from .surfaces import (
    LIBRARY,
    PointClass,
    classify_point,
    critical_points_on_line,
    flat_polynomials,
    flecnode_verdict,
    is_critical_line,
    is_flat_line,
    ruledness_scan,
)

MOTIONS_MAX_N = 200


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    S: int | None = None
    J: int | None = None
    k: int | None = None
    degree: int | None = None
    engine: str = "heuristic"
    seed: int = 0
    workers: int | None = None
    format: str = "json"
    output: str | None = None
    n_points: int | None = None
    report: str | None = None
    surface: str | None = None
    poly: str | None = None
    samples: int | None = None
    points: list[str] = field(default_factory=list)
    lines: int | None = None
    x: int | None = None
    k_min: int | None = None
    k_max: int | None = None
    rich_points: bool = False
    points_input: str | None = None

    def rng(self) -> random.Random:
        return random.Random(self.seed)


@dataclass
class Report:
    command: str
    config: RunConfig
    result: dict[str, Any]
    table: list[dict[str, Any]]

    def envelope(self) -> dict[str, Any]:
        cfg = asdict(self.config)
        # the output destination does not change the content
        cfg.pop("output", None)
        return {"ddlab_version": __version__, "command": self.command,
                "config": cfg, "result": self.result}

    def to_json(self) -> str:
        return json.dumps(self.envelope(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = _stdio.StringIO()
        if self.table:
            w = csv.DictWriter(buf, fieldnames=list(self.table[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(self.table)
        return buf.getvalue()


def q(x) -> str:
    return format_rational(x)


def qpoint(x: Sequence) -> list[str]:
    return [q(c) for c in x]


def qline(l: Line3) -> dict[str, list[str]]:
    return {"base": qpoint(l.base), "dir": qpoint(l.dir)}


# -- distances ------------------------------------------------------------------------

def distances_report(cfg: RunConfig, P: PointSet2) -> Report:
    hist = distance_histogram(P)
    Q = sum(n * n for n in hist.values())
    bound = cs_lower_bound(P)
    result = {
        "N": P.N,
        "histogram": {q(d): n for d, n in hist.items()},
        "distinct_distances": len(hist),
        "Q": Q,
        "cs_bound": q(bound),
        "cs_bound_approx": float(bound),
        "cs_holds": len(hist) * Q >= (P.N * P.N - P.N) ** 2,
    }
    table = [{"squared_distance": q(d), "count": n} for d, n in hist.items()]
    return Report("distances", cfg, result, table)


# -- motions ----------------------------------------------------------------------

def motions_report(cfg: RunConfig, P: PointSet2) -> Report:
    if P.N > MOTIONS_MAX_N:
        raise ValueError(f"motions enumerates all quadruples; N must be <= {MOTIONS_MAX_N}")
    fibers = motion_fibers(P)
    fiber_ok = all(f == 2 * (m * (m - 1) // 2)
                   for g, f in fibers.items() for m in [overlap(P, g)])
    gk = partial_symmetry_counts(P, fibers)
    Q = sum(fibers.values())
    total = quadformula_total(gk)
    k = cfg.k if cfg.k is not None else 2
    tstats = translation_partial_symmetries(P, k)
    rot = sum(1 for g in fibers if isinstance(g, Rotational))
    result = {
        "N": P.N,
        "Q": Q,
        "motion_count": len(fibers),
        "rotation_count": rot,
        "translation_count": sum(1 for g in fibers if isinstance(g, Translation)),
        "G_k": {str(kk): v for kk, v in gk.items()},
        "quadformula_total": total,
        "quadformula_holds": total == Q,
        "fiber_formula_holds": fiber_ok,
        "rotations_by_multiplicity": _rotation_multiplicities(fibers),
        "translations": {
            "k": k,
            "count": tstats.count,
            "quadruples": tstats.quadruples,
            "quadruples_le_N3": tstats.quadruples <= P.N ** 3,
        },
    }
    table = [{"k": kk, "G_k": v} for kk, v in gk.items()]
    return Report("motions", cfg, result, table)


def _rotation_multiplicities(fibers) -> dict[str, int]:
    out: dict[int, int] = {}
    for g, f in fibers.items():
        if isinstance(g, Rotational):
            m = multiplicity_from_fiber(f)
            out[m] = out.get(m, 0) + 1
    return {str(m): c for m, c in sorted(out.items())}


# -- incidence --------------------------------------------------------------------

def _first_skew_triple(lines: Sequence[Line3], limit: int = 30):
    head = list(lines[:limit])
    for i, a in enumerate(head):
        for j in range(i + 1, len(head)):
            b = head[j]
            if intersect(a, b) is not SKEW:
                continue
            for c in head[j + 1:]:
                if intersect(a, c) is SKEW and intersect(b, c) is SKEW:
                    return a, b, c
    return None


def incidence_report(cfg: RunConfig, lines: list[Line3], source: str, S: int | None = None) -> Report:
    hist = incidence_histogram(lines, cfg.workers)
    result: dict[str, Any] = {
        "source": source,
        "line_count": len(lines),
        "s_counts": {str(k): v for k, v in hist.s_counts.items()},
        "rich_point_count": len(hist.rich_points),
    }
    if len(lines) >= 2:
        plane, count = max_coplanar_cluster(lines)
        result["max_coplanar"] = {"plane": poly_terms(plane), "count": count}
    else:
        result["max_coplanar"] = None
    triple = _first_skew_triple(lines)
    result["regulus"] = None
    if triple is not None:
        try:
            quad, count = regulus_line_count(lines, *triple)
            result["regulus"] = {"seeds": [qline(l) for l in triple],
                                 "quadric": poly_terms(quad), "count": count}
        except Degenerate:
            result["regulus"] = {"seeds": [qline(l) for l in triple], "degenerate": True}
    if S is not None:
        slab = hist.restricted(in_closed_slab)
        oracle = slab_histogram_oracle(S, with_points=True)
        result["slab_oracle_agrees"] = slab.rich_points == oracle.rich_points
    if cfg.rich_points:
        result["rich_points"] = [{"point": qpoint(x), "multiplicity": m}
                                 for x, m in hist.rich_points.items()]
    table = [{"k": k, "s_k": v} for k, v in hist.s_counts.items()]
    return Report("incidence", cfg, result, table)


# -- partition --------------------------------------------------------------------

def partition_report(cfg: RunConfig, points, source: str, rng: random.Random | None = None) -> Report:
    J = cfg.J if cfg.J is not None else 3
    rng = cfg.rng() if rng is None else rng
    dec: CellDecomposition = build_partition(points, J, cfg.engine, rng)
    result = dec.report()
    result.update({
        "N": len(points),
        "source": source,
        "engine": cfg.engine,
        "verified": True,
        "cut_polys": [poly_terms(p) for p in dec.cut_polys],
    })
    if cfg.lines:
        worst = 0
        contained = 0
        for _ in range(cfg.lines):
            line = _random_line(rng)
            c = cells_met_by_line(dec, line)
            contained += c.contained_in_z
            worst = max(worst, c.count)
        result["crossings"] = {"lines": cfg.lines, "max_cells_met": worst,
                               "bound": dec.product_degree + 1, "contained_in_z": contained}
    table = [{"cell_size": k, "cells": v} for k, v in dec.cell_size_histogram().items()]
    return Report("partition", cfg, result, table)


def _random_line(rng: random.Random) -> Line3:
    base = [Fraction(rng.randint(-1000, 1000), 1000) for _ in range(3)]
    while True:
        d = [Fraction(rng.randint(-9, 9)) for _ in range(3)]
        if any(d):
            return Line3(base, d)


# -- surface ------------------------------------------------------------------------

def surface_report(cfg: RunConfig, p: MultiPoly, name: str, points: list) -> Report:
    lib = LIBRARY.get(name)
    deg = p.degree()
    flats = flat_polynomials(p)
    rows = []
    for x in points:
        c = classify_point(p, x, flats)
        row: dict[str, Any] = {"point": qpoint(c.point), "class": c.cls.value}
        if deg >= 3 and c.cls is not PointClass.NOT_ON_SURFACE:
            v = flecnode_verdict(p, c.point)
            row.update(flecnode=v.certificate, resultant=q(v.resultant), agree=v.agree)
        rows.append(row)
    result: dict[str, Any] = {
        "name": name,
        "poly": poly_terms(p),
        "degree": deg,
        "tag": lib.tag if lib else "unknown",
        "points": rows,
    }
    if lib is not None:
        lines = lib.lines()
        lrows = []
        for l in lines:
            crit = is_critical_line(p, l)
            lrows.append({
                "line": qline(l),
                "contained": contains_line(p, l),
                "critical": crit,
                "flat": is_flat_line(p, l),
                "critical_points": critical_points_on_line(p, l),
            })
        result["lines"] = lrows
        result["critical_line_count"] = sum(r["critical"] for r in lrows)
        result["critical_line_bound"] = deg * deg
        result["flat_line_count"] = sum(r["flat"] for r in lrows)
        result["flat_line_bound"] = 3 * deg * deg
        if deg >= 3:
            n = cfg.samples if cfg.samples is not None else 20
            rep = ruledness_scan(p, lib.sampler, n)
            result["ruledness"] = {
                "samples": rep.samples,
                "flecnodes": rep.flecnodes,
                "disagreements": rep.disagreements,
                "consistent_with_ruled": rep.consistent_with_ruled,
                "witnesses": [qpoint(w) for w in rep.witnesses],
            }
    table = [{"x": r["point"][0], "y": r["point"][1], "z": r["point"][2], "class": r["class"],
              "flecnode": r.get("flecnode", "")} for r in rows]
    return Report("surface", cfg, result, table)


# -- grid ----------------------------------------------------------------------------

GRID_REPORTS = ("scaling", "growth", "totient", "l0", "slices")


def grid_report(cfg: RunConfig) -> Report:
    kind = cfg.report or "scaling"
    S = cfg.S if cfg.S is not None else 4
    if kind == "scaling":
        kmin = cfg.k_min if cfg.k_min is not None else 2
        kmax = cfg.k_max if cfg.k_max is not None else S * S
        rep = scaling_report(S, range(kmin, kmax + 1))
        result = {
            "report": kind, "S": S, "k_min": kmin, "k_max": kmax,
            "rows": [{"k": k, "s_k": s, "normalized_approx": r} for k, s, r in rep.rows],
            "slope_approx": rep.slope,
            "slope_unweighted_approx": rep.slope_unweighted,
            "intercept_approx": rep.intercept,
            "band_approx": rep.band,
            "residuals_approx": rep.residuals,
        }
        table = [{"S": S, "k": k, "s_k": s, "normalized_approx": r,
                  "slope": rep.slope, "slope_unweighted": rep.slope_unweighted}
                 for k, s, r in rep.rows]
    elif kind == "growth":
        rows = qp_growth_report(range(1, S + 1))
        ratios = [r.ratio for r in rows]
        result = {
            "report": kind,
            "rows": [{"S": r.S, "N": r.N, "Q": r.Q, "ratio_approx": r.ratio} for r in rows],
            "max_min_ratio_approx": max(ratios) / min(ratios),
        }
        table = result["rows"]
    elif kind == "totient":
        x = cfg.x if cfg.x is not None else 10_000
        t = totient_sum_check(x)
        result = {
            "report": kind, "x": x, "sum": t.total,
            "main_term": q(t.main_term), "main_term_approx": t.main_term_approx,
            "relative_error": q(t.relative_error),
            "relative_error_approx": float(t.relative_error),
            "constant_precision_digits": THREE_OVER_PI_SQ_DIGITS,
        }
        table = [{"x": x, "sum": t.total, "main_term_approx": t.main_term_approx,
                  "relative_error_approx": float(t.relative_error)}]
    elif kind == "l0":
        lines = build_L0(S, cross_check=None)
        result = {"report": kind, "S": S, "line_count": len(lines),
                  "distinct": len(set(lines)) == len(lines), "cross_checked": len(lines)}
        table = [{"bx": q(l.base[0]), "by": q(l.base[1]), "bz": q(l.base[2]),
                  "dx": q(l.dir[0]), "dy": q(l.dir[1]), "dz": q(l.dir[2])} for l in lines]
    elif kind == "slices":
        rows = []
        for p, qq in rich_heights(S):
            rec = fx_overlap(p, qq, S)
            rows.append({"p": p, "q": qq, "height": q(rec.height), "max_overlap": rec.max_overlap,
                         "overlap_bound": q(rec.overlap_bound()), "X_size": rec.X_size})
        result = {"report": kind, "S": S, "slices": rows}
        table = rows
    else:
        raise ValueError(f"unknown grid report {kind!r}; choose from {GRID_REPORTS}")
    return Report("grid", cfg, result, table)
