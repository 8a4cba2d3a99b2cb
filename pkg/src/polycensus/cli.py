"""Command-line surface: counting sweeps, decompositions, measure checks, fits.

Polynomials are written as ascending comma-separated integers, so
"5,2,3,2,1" is x^4 + 2x^3 + 3x^2 + 2x + 5.  Count output is CSV (default)
or JSON lines with the schema
    d,monic,variant,m,n,H,count,method,workers,elapsed_seconds
where m,n are empty for the total variant and counts are exact integers.
Identical invocations produce byte-identical bodies; wall-clock timings stay
out of the body unless --timings is passed (the run manifest carries them).

Exit codes: 0 success, 2 malformed input or refused budget, 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .asymptotics import fit_growth, predicted_growth, spf
from .census import (
    BudgetError,
    CountQuery,
    CountResult,
    count_bruteforce,
    count_forward,
    ordered_splits,
)
from .decompose import DecompositionError, decompose_split, full_decomposition
from .mahler import RootConvergenceError, mahler_measure, roots, sandwich_bounds
from .poly_core import degree, format_poly, height, parse_poly

CSV_HEADER = "d,monic,variant,m,n,H,count,method,workers,elapsed_seconds"


@dataclass
class RunManifest:
    """Provenance record written alongside every output file."""

    command: List[str]
    started_utc: str
    finished_utc: str
    workers: int
    budget: Optional[int]
    configuration: dict
    versions: dict = field(default_factory=dict)

    def write(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _utcnow() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def _split_fields(q: CountQuery) -> Tuple[str, str]:
    if q.variant == "split":
        return str(q.split[0]), str(q.split[1])
    if q.variant == "indecomp_pair":
        ell = spf(q.d)
        return str(q.d // ell), str(ell)
    return "", ""


def _result_row(r: CountResult, timings: bool) -> dict:
    m, n = _split_fields(r.query)
    return {
        "d": r.query.d,
        "monic": "true" if r.query.monic else "false",
        "variant": r.query.variant,
        "m": m,
        "n": n,
        "H": r.query.H,
        "count": str(r.count),
        "method": r.method,
        "workers": r.workers,
        "elapsed_seconds": f"{r.elapsed_seconds:.3f}" if timings else "",
    }


def _emit(row: dict, fmt: str, out) -> None:
    if fmt == "csv":
        out.write(
            f"{row['d']},{row['monic']},{row['variant']},{row['m']},{row['n']},"
            f"{row['H']},{row['count']},{row['method']},{row['workers']},"
            f"{row['elapsed_seconds']}\n"
        )
    else:
        out.write(json.dumps(row) + "\n")


def _parse_variant(text: str) -> Tuple[str, Optional[Tuple[int, int]]]:
    if text == "total":
        return "total", None
    if text == "indecomp-pair":
        return "indecomp_pair", None
    if text.startswith("split:"):
        body = text[len("split:") :]
        parts = body.split(",")
        if len(parts) != 2:
            raise ValueError(f"malformed split {text!r}; expected split:m,n")
        try:
            m, n = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"malformed split {text!r}; expected split:m,n") from None
        return "split", (m, n)
    raise ValueError(f"unknown variant {text!r}")


def _parse_grid(args) -> List[int]:
    if args.grid is None:
        if args.height_max is None:
            raise ValueError("need --height-max or --grid")
        return [args.height_max]
    if args.grid.startswith("geometric:"):
        if args.height_max is None:
            raise ValueError("--grid geometric:k needs --height-max")
        k = int(args.grid.split(":", 1)[1])
        if k < 1:
            raise ValueError("geometric grid needs at least one point")
        pts = sorted({max(2, round(args.height_max / 2**i)) for i in range(k)})
        return pts
    try:
        pts = [int(p) for p in args.grid.split(",")]
    except ValueError:
        raise ValueError(f"malformed grid {args.grid!r}") from None
    if any(b <= a for a, b in zip(pts, pts[1:])):
        raise ValueError("grid must be strictly ascending")
    return pts


def _cmd_count(args) -> int:
    started = _utcnow()
    variant, split = _parse_variant(args.variant)
    grid = _parse_grid(args)
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        if args.out == "csv":
            out.write(CSV_HEADER + "\n")
        for H in grid:
            q = CountQuery(args.degree, H, args.monic, variant, split)
            results: List[CountResult] = []
            if args.method in ("forward", "both"):
                results.append(count_forward(q, workers=args.jobs, budget=args.budget))
            if args.method in ("oracle", "both"):
                results.append(count_bruteforce(q, budget=args.budget))
            if args.method == "both" and results[0].count != results[1].count:
                raise RuntimeError(
                    f"method disagreement at d={q.d}, H={H}: "
                    f"forward={results[0].count} oracle={results[1].count}"
                )
            for r in results:
                _emit(_result_row(r, args.timings), args.out, out)
            out.flush()
    finally:
        if args.output:
            out.close()
    manifest_path = args.manifest or (args.output + ".manifest.json" if args.output else None)
    if manifest_path:
        RunManifest(
            command=args.raw_argv,
            started_utc=started,
            finished_utc=_utcnow(),
            workers=args.jobs,
            budget=args.budget,
            configuration={
                "degree": args.degree,
                "monic": args.monic,
                "variant": args.variant,
                "grid": grid,
                "method": args.method,
                "format": args.out,
                "timings": args.timings,
            },
            versions={"polycensus": __version__, "python": platform.python_version()},
        ).write(manifest_path)
    return 0


def _cmd_decompose(args) -> int:
    f = parse_poly(args.poly)
    if degree(f) < 2:
        raise ValueError("decomposition needs degree >= 2")
    if args.split:
        parts = args.split.split(",")
        if len(parts) != 2:
            raise ValueError(f"malformed split {args.split!r}; expected m,n")
        m, n = int(parts[0]), int(parts[1])
        w = decompose_split(f, m, n)
        if w is None:
            print("indecomposable")
        else:
            print(f"g = {format_poly(w.g)} ; h = {format_poly(w.h)}")
        return 0
    chain = full_decomposition(f)
    if len(chain) == 1:
        print("indecomposable")
    elif len(chain) == 2:
        print(f"g = {format_poly(chain[0])} ; h = {format_poly(chain[1])}")
    else:
        print(" ; ".join(f"f{i + 1} = {format_poly(p)}" for i, p in enumerate(chain)))
    return 0


def _cmd_mahler(args) -> int:
    f = parse_poly(args.poly)
    if degree(f) < 1:
        raise ValueError("measure needs degree >= 1")
    res = roots(f)
    for r in sorted(res.roots, key=lambda z: (z.real, z.imag)):
        print(f"root: {r.real:+.15e} {r.imag:+.15e}j")
    lo, hi = sandwich_bounds(f)
    print(f"H(f) = {height(f)}")
    print(f"M(f) = {res.measure:.15e}")
    print(f"residual_bound = {res.residual_bound:.3e}")
    print(f"slack lower (M - H*2^-d)      = {res.measure - lo:+.6e}")
    print(f"slack upper (H*sqrt(d+1) - M) = {hi - res.measure:+.6e}")
    return 0


def _cmd_fit(args) -> int:
    import csv as csvmod

    fh = sys.stdin if args.csv == "-" else open(args.csv)
    try:
        reader = csvmod.DictReader(fh)
        groups: dict = {}
        for row in reader:
            key = (int(row["d"]), row["monic"] == "true", row["variant"], row["m"], row["n"])
            groups.setdefault(key, []).append((int(row["H"]), int(row["count"])))
    finally:
        if args.csv != "-":
            fh.close()
    if not groups:
        raise ValueError("no data rows in CSV input")
    for (d, monic, variant, m, n), pts in sorted(groups.items()):
        pts.sort()
        label = f"d={d} {'monic' if monic else 'non-monic'} {variant}" + (
            f" ({m},{n})" if m else ""
        )
        split = (int(m), int(n)) if variant == "split" else None
        pvariant = "total" if variant != "split" else "split"
        pred = predicted_growth(d, monic, pvariant, split)
        try:
            fit = fit_growth(pts)
        except ValueError as exc:
            print(f"{label}: no fit ({exc}); predicted {pred.describe()}")
            continue
        model = "H^a*logH" if fit.log_model_preferred else "H^a"
        print(
            f"{label}: fitted a={fit.exponent:.4f} ({model}, const={fit.constant:.4g}, "
            f"rms={fit.rms_residual:.4f}, points={fit.points_used}) ; "
            f"predicted {pred.describe()}"
        )
    return 0


def _cmd_verify(args) -> int:
    from .verify import run_criteria

    wanted = None
    if args.criteria:
        wanted = {int(c) for c in args.criteria.split(",")}
    outcomes = run_criteria(wanted, jobs=args.jobs)
    failed = [o for o in outcomes if not o.passed]
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polycensus",
        description="Exact census of decomposable integer polynomials.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="count decomposable polynomials")
    c.add_argument("--degree", type=int, required=True)
    mg = c.add_mutually_exclusive_group()
    mg.add_argument("--monic", dest="monic", action="store_true", default=True)
    mg.add_argument("--non-monic", dest="monic", action="store_false")
    c.add_argument("--height-max", type=int, default=None)
    c.add_argument("--grid", type=str, default=None, help="explicit list 'a,b,c' or geometric:k")
    c.add_argument(
        "--variant", type=str, default="total", help="total | split:m,n | indecomp-pair"
    )
    c.add_argument("--method", choices=("forward", "oracle", "both"), default="forward")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--out", choices=("csv", "json"), default="csv")
    c.add_argument("--output", type=str, default=None, help="write body to this file")
    c.add_argument("--manifest", type=str, default=None, help="write the run manifest here")
    c.add_argument("--budget", type=int, default=None)
    c.add_argument("--timings", action="store_true", help="fill elapsed_seconds in the body")

    d = sub.add_parser("decompose", help="decompose one polynomial")
    d.add_argument("poly")
    d.add_argument("--split", type=str, default=None, help="m,n")

    m = sub.add_parser("mahler", help="roots, measure, inequality slacks")
    m.add_argument("poly")

    f = sub.add_parser("fit", help="fit growth exponents from a count CSV")
    f.add_argument("csv", help="CSV path or - for stdin")

    v = sub.add_parser("verify", help="run the canned acceptance suites")
    v.add_argument("--criteria", type=str, default=None, help="comma list, e.g. 1,4,13")
    v.add_argument("--jobs", type=int, default=1)

    return ap


def run(argv: Sequence[str]) -> int:
    """Entry point; returns the exit code instead of raising SystemExit."""
    import re

    argv = list(argv)
    # Let polynomials with a negative leading coefficient pass as positionals.
    if argv and argv[0] in ("decompose", "mahler") and "--" not in argv:
        for i, a in enumerate(argv[1:], 1):
            if a.startswith("-") and re.fullmatch(r"-?\d+(,-?\d+)*", a):
                argv.insert(i, "--")
                break
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.raw_argv = list(argv)
    try:
        if args.command == "count":
            return _cmd_count(args)
        if args.command == "decompose":
            return _cmd_decompose(args)
        if args.command == "mahler":
            return _cmd_mahler(args)
        if args.command == "fit":
            return _cmd_fit(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return 2
    except (BudgetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DecompositionError, RootConvergenceError, RuntimeError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
