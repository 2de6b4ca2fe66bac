"""Command-line entry point: ``ddlab <command> [options]``.

Exit codes: 0 ok, 2 usage, 3 input, 4 engine failure, 5 invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, reports
from .grid import build_L0
from .io import InputError, parse_points3, parse_poly, read_lines, read_points, read_points3, read_poly
from .motions import InvariantViolation, all_pair_lines
from .partition import BudgetExceeded, EngineFailure, random_points3
from .points import generate_grid
from .surfaces import LIBRARY, fit_vanishing_polynomial

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_ENGINE = 4
EXIT_INVARIANT = 5

SEED_LIMIT = 2 ** 64


class UsageError(ValueError):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="RNG seed, 0 <= seed < 2^64")
    p.add_argument("--workers", type=int, help="worker processes (default: DDLAB_WORKERS or 1)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", help="report path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ddlab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"ddlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distances", help="distance histogram, |d(P)|, |Q(P)| and the CS bound")
    p.add_argument("--input", help="CSV of planar points x,y")
    p.add_argument("--S", type=int, help="use the grid |x|,|y| <= 2S instead of --input")
    _common(p)

    p = sub.add_parser("motions", help="Elekes-image motions, G_k table and quadruple identity")
    p.add_argument("--input", help="CSV of planar points x,y")
    p.add_argument("--S", type=int, help="use the grid |x|,|y| <= 2S instead of --input")
    p.add_argument("--k", type=int, help="threshold for the translation statistics (default 2)")
    _common(p)

    p = sub.add_parser("incidence", help="rich-point histogram and plane/regulus clusters")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input", help="CSV of lines bx,by,bz,dx,dy,dz")
    src.add_argument("--points", help="CSV of planar points; uses all lines L_pq")
    p.add_argument("--S", type=int, help="use the line family L0 of the grid example")
    p.add_argument("--rich-points", action="store_true", help="list every rich point")
    _common(p)

    p = sub.add_parser("partition", help="build and verify a polynomial cell decomposition")
    p.add_argument("--input", help="CSV of 3-D points x,y,z")
    p.add_argument("--n-points", type=int, help="random rational points instead of --input")
    p.add_argument("--J", type=int, default=3, help="number of bisection steps")
    p.add_argument("--engine", choices=("heuristic", "exact"), default="heuristic")
    p.add_argument("--lines", type=int, help="also count cells met by this many random lines")
    _common(p)

    p = sub.add_parser("surface", help="classify points and lines, flecnode scans")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--surface", choices=sorted(LIBRARY), help="named library surface")
    src.add_argument("--poly", help="polynomial as 'coef:e1,e2,e3' terms")
    src.add_argument("--input", help="file holding a polynomial in term format")
    p.add_argument("--point", action="append", default=[], metavar="X,Y,Z",
                   help="point to classify (repeatable)")
    p.add_argument("--degree", type=int, help="fit a vanishing polynomial of this degree to the points")
    p.add_argument("--samples", type=int, help="flecnode scan size for library surfaces (default 20)")
    _common(p)

    p = sub.add_parser("grid", help="grid example: L0, scaling, Q growth, totient sums")
    p.add_argument("--S", type=int, default=4)
    p.add_argument("--report", choices=reports.GRID_REPORTS, default="scaling")
    p.add_argument("--k-min", type=int, help="scaling: smallest k (default 2)")
    p.add_argument("--k-max", type=int, help="scaling: largest k (default S^2)")
    p.add_argument("--x", type=int, help="totient: upper limit (default 10000)")
    _common(p)
    return ap


def config_from_args(ns: argparse.Namespace) -> reports.RunConfig:
    if not 0 <= ns.seed < SEED_LIMIT:
        raise UsageError("--seed must satisfy 0 <= seed < 2^64")
    if ns.workers is not None and ns.workers < 1:
        raise UsageError("--workers must be >= 1")
    return reports.RunConfig(
        command=ns.command,
        input=getattr(ns, "input", None),
        S=getattr(ns, "S", None),
        J=getattr(ns, "J", None),
        k=getattr(ns, "k", None),
        degree=getattr(ns, "degree", None),
        engine=getattr(ns, "engine", "heuristic"),
        seed=ns.seed,
        workers=ns.workers,
        format=ns.format,
        output=ns.output,
        n_points=getattr(ns, "n_points", None),
        report=getattr(ns, "report", None),
        surface=getattr(ns, "surface", None),
        poly=getattr(ns, "poly", None),
        samples=getattr(ns, "samples", None),
        points=list(getattr(ns, "point", [])),
        lines=getattr(ns, "lines", None),
        x=getattr(ns, "x", None),
        k_min=getattr(ns, "k_min", None),
        k_max=getattr(ns, "k_max", None),
        rich_points=getattr(ns, "rich_points", False),
        points_input=getattr(ns, "points", None),
    )


def _planar(cfg: reports.RunConfig):
    if (cfg.input is None) == (cfg.S is None):
        raise UsageError("give exactly one of --input or --S")
    return read_points(cfg.input) if cfg.input else generate_grid(cfg.S)


def _incidence(cfg: reports.RunConfig) -> reports.Report:
    given = [x is not None for x in (cfg.input, cfg.points_input, cfg.S)]
    if sum(given) != 1:
        raise UsageError("give exactly one of --input, --points or --S")
    if cfg.input:
        return reports.incidence_report(cfg, read_lines(cfg.input), "lines")
    if cfg.points_input:
        return reports.incidence_report(cfg, all_pair_lines(read_points(cfg.points_input)), "pair_lines")
    return reports.incidence_report(cfg, build_L0(cfg.S), "L0", S=cfg.S)


def _partition(cfg: reports.RunConfig) -> reports.Report:
    if (cfg.input is None) == (cfg.n_points is None):
        raise UsageError("give exactly one of --input or --n-points")
    if cfg.input:
        return reports.partition_report(cfg, read_points3(cfg.input), "input")
    if cfg.n_points < 1:
        raise UsageError("--n-points must be >= 1")
    # point generation and the engine draw from one seeded stream
    rng = cfg.rng()
    pts = random_points3(cfg.n_points, rng)
    return reports.partition_report(cfg, pts, "random", rng)


def _surface(cfg: reports.RunConfig) -> reports.Report:
    points = parse_points3("\n".join(cfg.points)) if cfg.points else []
    if cfg.surface:
        return reports.surface_report(cfg, LIBRARY[cfg.surface].poly, cfg.surface, points)
    if cfg.poly is not None:
        return reports.surface_report(cfg, parse_poly(cfg.poly), "input", points)
    if cfg.input:
        return reports.surface_report(cfg, read_poly(cfg.input), "input", points)
    if cfg.degree is None:
        raise UsageError("give --surface, --poly, --input, or --degree with --point")
    if not points:
        raise UsageError("--degree needs at least one --point")
    return reports.surface_report(cfg, fit_vanishing_polynomial(points, cfg.degree), "fitted", points)


def build_report(cfg: reports.RunConfig) -> reports.Report:
    if cfg.command == "distances":
        return reports.distances_report(cfg, _planar(cfg))
    if cfg.command == "motions":
        return reports.motions_report(cfg, _planar(cfg))
    if cfg.command == "incidence":
        return _incidence(cfg)
    if cfg.command == "partition":
        return _partition(cfg)
    if cfg.command == "surface":
        return _surface(cfg)
    if cfg.command == "grid":
        return reports.grid_report(cfg)
    raise UsageError(f"unknown command {cfg.command!r}")


def run(cfg: reports.RunConfig) -> int:
    """Build the report for ``cfg`` and write it; returns the exit status."""
    try:
        rep = build_report(cfg)
        text = rep.to_json() if cfg.format == "json" else rep.to_csv()
    except InputError as e:
        print(f"ddlab: input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (EngineFailure, BudgetExceeded) as e:
        print(f"ddlab: engine failure: {e}", file=sys.stderr)
        return EXIT_ENGINE
    except (InvariantViolation, AssertionError) as e:
        print(f"ddlab: invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as e:
        print(f"ddlab: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.output:
        try:
            Path(cfg.output).write_text(text, encoding="utf-8")
        except OSError as e:
            print(f"ddlab: cannot write {cfg.output}: {e}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        cfg = config_from_args(ns)
    except UsageError as e:
        print(f"ddlab: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
