"""Command-line front end.

Subcommands:

* ``crystal``  - build the crystal and polar body of a cost, export vertex
  files and a figure overlaying crystal, cost graph, and polar body.
* ``distance`` - anisotropic distance between two points, with uniqueness
  classification and (optionally) a constructed geodesic plus certificate.
* ``verify``   - check a path file; exit code 0 iff it is a geodesic.
* ``suite``    - run the cross-module invariant battery on a cost.

Exit codes: 0 success/verified, 1 negative verdict or invariant failure,
2 usage or parse error. All floating output is rounded to 12 significant
digits for reproducible diffs. Nothing is random without a seed; the suite
defaults to seed 0.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path as FilePath

import numpy as np

from . import fileio
from .crystal import CrystalContext
from .geodesics import (
    GeodesicClass,
    classify,
    construct_geodesic,
    geodesic_family,
    is_geodesic,
    resample_polyline,
)
from .integrand import SphereGrid
from .suite import run_suite
from .svgplot import crystal_figure


def _context(args) -> CrystalContext:
    integrand, spec_grid = fileio.load_integrand_spec(args.spec)
    count = args.grid or spec_grid or 720
    return CrystalContext(integrand, SphereGrid.planar(count))


def _spec_digest(path) -> str:
    return hashlib.sha256(FilePath(path).read_bytes()).hexdigest()


def _base_report(args, ctx: CrystalContext) -> dict:
    return {
        "command": " ".join(getattr(args, "_argv", [args.command])),
        "spec_digest": _spec_digest(args.spec),
        "grid": {"size": ctx.grid.size, "resolution": ctx.grid.resolution},
    }


def _emit(report: dict, fmt: str) -> None:
    if fmt == "csv":
        sys.stdout.write(fileio.report_csv(report))
    else:
        print(fileio.report_json(report))


def _parse_point(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.replace(",", " ").split()])
    except ValueError as exc:
        raise fileio.SpecError(f"not a point: {text!r}") from exc


def cmd_crystal(args) -> int:
    ctx = _context(args)
    out_dir = FilePath(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = {
        "crystal_vertices": out_dir / "crystal_vertices.txt",
        "crystal_halfspaces": out_dir / "crystal_halfspaces.txt",
        "polar_vertices": out_dir / "polar_vertices.txt",
        "polar_halfspaces": out_dir / "polar_halfspaces.txt",
        "graph_samples": out_dir / "graph_samples.txt",
    }
    fileio.save_rows(files["crystal_vertices"], ctx.crystal.vertices, "crystal vertices (CCW)")
    fileio.save_rows(
        files["crystal_halfspaces"],
        np.column_stack([ctx.crystal.normals, ctx.crystal.offsets]),
        "crystal halfspaces: normal_x normal_y offset",
    )
    fileio.save_rows(files["polar_vertices"], ctx.polar_body.vertices, "polar body vertices (CCW)")
    fileio.save_rows(
        files["polar_halfspaces"],
        np.column_stack([ctx.polar_body.normals, ctx.polar_body.offsets]),
        "polar body halfspaces: normal_x normal_y offset",
    )
    graph = ctx.grid.directions * ctx.integrand.values_on(ctx.grid.directions)[:, None]
    fileio.save_rows(files["graph_samples"], graph, "cost polar graph samples")
    svg = FilePath(args.svg) if args.svg else out_dir / "crystal.svg"
    crystal_figure(ctx, svg)
    files["figure"] = svg

    report = _base_report(args, ctx)
    report["results"] = {
        "crystal_vertex_count": len(ctx.crystal.vertices),
        "polar_vertex_count": len(ctx.polar_body.vertices),
        "crystal_area": ctx.crystal.area,
        "files": {k: str(v) for k, v in files.items()},
    }
    report["pass"] = True
    _emit(report, args.format)
    return 0


def cmd_distance(args) -> int:
    ctx = _context(args)
    x = _parse_point(args.start)
    y = _parse_point(args.end)
    if x.shape != (2,) or y.shape != (2,):
        raise fileio.SpecError("points must be planar (two coordinates)")
    if np.linalg.norm(y - x) <= 1e-12:
        raise fileio.SpecError("start and end coincide; distance query undefined")
    label = classify(ctx, x, y)
    results = {
        "start": list(x),
        "end": list(y),
        "distance": ctx.distance(x, y),
        "classification": label.value,
    }
    if args.geodesic:
        path = construct_geodesic(ctx, x, y)
        cert = is_geodesic(ctx, path, args.tol)
        results["geodesic_breakpoints"] = [list(p) for p in path.points]
        results["certificate"] = cert.as_dict()
        if label is GeodesicClass.INFINITELY_MANY:
            halfway = geodesic_family(ctx, x, y, 0.5)
            results["family_midpoint_breakpoints"] = [list(p) for p in halfway.points]
    report = _base_report(args, ctx)
    report["results"] = results
    report["tolerances"] = {"verification": args.tol or ctx.default_tol}
    report["pass"] = True
    _emit(report, args.format)
    return 0


def cmd_verify(args) -> int:
    ctx = _context(args)
    path = fileio.load_path_file(args.path, dim=2)
    if args.resample:
        path = resample_polyline(path, args.resample)
    cert = is_geodesic(ctx, path, args.tol)
    report = _base_report(args, ctx)
    report["results"] = cert.as_dict()
    report["results"]["breakpoint_count"] = len(path.points)
    report["tolerances"] = {"verification": cert.tolerance}
    report["pass"] = cert.verdict
    _emit(report, args.format)
    return 0 if cert.verdict else 1


def cmd_suite(args) -> int:
    ctx = _context(args)
    checks = run_suite(ctx, seed=args.seed)
    report = _base_report(args, ctx)
    report["results"] = {"checks": [c.as_dict() for c in checks]}
    failed = [c.name for c in checks if not c.passed]
    report["pass"] = not failed
    if failed:
        report["failed"] = failed
    _emit(report, args.format)
    if failed:
        print(f"FAILED: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anisogeo",
        description="Anisotropic geodesics, Wulff crystals, and polar duality.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("spec", help="cost spec file (JSON)")
        p.add_argument("--grid", type=int, default=None, help="planar grid size (default 720)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("crystal", help="build and export the crystal geometry")
    common(p)
    p.add_argument("--out", default="crystal-out", help="output directory")
    p.add_argument("--svg", default=None, help="figure path (default <out>/crystal.svg)")
    p.set_defaults(handler=cmd_crystal)

    p = sub.add_parser("distance", help="anisotropic distance between two points")
    common(p)
    p.add_argument("start", help="start point, e.g. '0,0'")
    p.add_argument("end", help="end point, e.g. '1,1'")
    p.add_argument("--geodesic", action="store_true", help="construct and certify a geodesic")
    p.add_argument("--tol", type=float, default=None, help="verification tolerance")
    p.set_defaults(handler=cmd_distance)

    p = sub.add_parser("verify", help="check whether a path file is a geodesic")
    common(p)
    p.add_argument("path", help="path file (one breakpoint per line)")
    p.add_argument("--tol", type=float, default=None, help="verification tolerance")
    p.add_argument(
        "--resample",
        type=int,
        default=None,
        help="resample a densely sampled smooth curve to this many breakpoints",
    )
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("suite", help="run the invariant battery")
    common(p)
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.set_defaults(handler=cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = list(argv) if argv is not None else sys.argv[1:]
    try:
        return args.handler(args)
    except fileio.SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
