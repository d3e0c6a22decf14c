"""Command-line front end.

Summaries go to stdout as JSON records carrying ``schema_version``; bulk
tube samples go to a CSV file. Exit codes: 0 success, 1 domain error,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from pathlib import Path
from typing import Sequence

from . import calculus, deformation, explorer
from .core import Coordinate, Discrete, DomainError, GeometryError, NegativeSigmaError, VectorPQ
from .world_functions import GEOMETRY_TYPES, ConfigError, WorldFunction, load_geometry

SCHEMA_VERSION = "1"

QUANTITY_ARITY = {"sigma": 2, "magnitude": 2, "scalar": 3, "cosine": 3}


class UsageError(Exception):
    pass


def record(command: str, geometry: str, payload: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "geometry": geometry, "payload": payload}


def _geometry(args) -> WorldFunction:
    if args.geometry and args.geometry_json:
        raise UsageError("give only one of --geometry and --geometry-json")
    if args.geometry:
        path = Path(args.geometry)
        try:
            text = path.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read geometry file {args.geometry!r}: {exc.strerror}") from None
        return load_geometry(text, base_dir=path.parent)
    if args.geometry_json:
        return load_geometry(args.geometry_json)
    raise UsageError("a geometry is required (--geometry or --geometry-json)")


def _point(wf: WorldFunction, text: str):
    try:
        if wf.is_coordinate:
            return Coordinate(tuple(float(c) for c in text.split(",") if c.strip() != ""))
        return Discrete(int(text))
    except (ValueError, GeometryError):
        raise UsageError(f"cannot parse point {text!r}") from None


def _coords(p) -> list | int:
    return list(p.coords) if isinstance(p, Coordinate) else p.id


def cmd_eval(args) -> dict:
    wf = _geometry(args)
    pts = [_point(wf, t) for t in args.points]
    registry = deformation.default_registry()
    q = args.quantity
    if q.startswith("predicate:"):
        name = q.split(":", 1)[1]
        if name not in registry:
            raise UsageError(f"unknown predicate {name!r}; known: {', '.join(registry.names())}")
        arity = registry[name].arity
    elif q in QUANTITY_ARITY:
        arity = QUANTITY_ARITY[q]
    else:
        raise UsageError(f"unknown quantity {q!r}")
    if len(pts) != arity:
        raise UsageError(f"{q} takes {arity} points, got {len(pts)}")

    payload = {"quantity": q, "points": [_coords(p) for p in pts]}
    if q == "sigma":
        payload["value"] = wf(*pts)
    elif q == "magnitude":
        payload["value"] = calculus.magnitude(wf, VectorPQ(*pts))
    elif q == "scalar":
        payload["value"] = calculus.scalar_product(wf, *pts)
    elif q == "cosine":
        res = calculus.cosine_angle(wf, *pts)
        payload.update(
            value=res.cosine, angle_radians=res.angle_radians,
            degenerate=res.degenerate, clamp_excess=res.clamp_excess,
        )
    else:
        residual = deformation.evaluate(registry, q.split(":", 1)[1], wf, pts)
        payload.update(value=residual, residual=residual)
    return record("eval", wf.name, payload)


def cmd_tube(args) -> dict:
    if not args.spacing > 0:
        raise UsageError(f"--spacing must be positive, got {args.spacing}")
    if not args.extent >= 0:
        raise UsageError(f"--extent must be non-negative, got {args.extent}")
    wf = _geometry(args)
    if not wf.is_coordinate:
        raise UsageError(f"{wf.name} is not a coordinate geometry")
    p0, p1 = _point(wf, args.p0), _point(wf, args.p1)
    grid = explorer.TubeGrid(args.extent, args.spacing, args.dimension)
    rep = explorer.sample_tube(wf, p0, p1, grid, tol=args.tol, seed=args.seed)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["axial", "radial", "residual", "member"])
            for a, r, res, m in zip(rep.axial, rep.radial, rep.residual, rep.member):
                writer.writerow([repr(float(a)), repr(float(r)), repr(float(res)), int(m)])
    payload = rep.summary()
    payload.update(extent=args.extent, spacing=args.spacing, seed=args.seed)
    return record("tube", wf.name, payload)


def _read_points_file(wf: WorldFunction, path: str) -> list:
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise UsageError(f"cannot read points file {path!r}: {exc.strerror}") from None
    return [_point(wf, ",".join(r)) for r in rows]


def cmd_embed(args) -> dict:
    wf = _geometry(args)
    if args.base is None:
        raise UsageError("--base is required")
    if bool(args.points) == bool(args.points_file):
        raise UsageError("give exactly one of --points and --points-file")
    base = _point(wf, args.base)
    pts = [_point(wf, t) for t in args.points] if args.points else _read_points_file(wf, args.points_file)
    rep = calculus.gram_report(wf, base, pts, tol_embed=args.tol_embed)
    payload = {"base": _coords(base), "points": [_coords(p) for p in pts], **rep.as_dict()}
    return record("embed", wf.name, payload)


def cmd_parallel(args) -> dict:
    if args.trials < 0:
        raise UsageError("--trials must be non-negative")
    wf = _geometry(args)
    if not wf.is_coordinate:
        raise UsageError(f"{wf.name} is not a coordinate geometry")
    rep = explorer.find_intransitivity(wf, trials=args.trials, box=args.box, tol=args.tol, seed=args.seed)
    payload = rep.as_dict()
    payload.update(box=args.box, seed=args.seed)
    return record("parallel", wf.name, payload)


def cmd_list(args) -> dict:
    payload = {
        "geometries": [{"type": k, "fields": v} for k, v in GEOMETRY_TYPES.items()],
        "predicates": [
            {"name": p.name, "arity": p.arity} for p in deformation.default_registry().entries.values()
        ],
    }
    return record("list-geometries", "", payload)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--geometry", metavar="PATH", help="JSON geometry config file")
    common.add_argument("--geometry-json", metavar="JSON", help="inline JSON geometry config")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--out", metavar="PATH", help="CSV output file (tube)")

    parser = argparse.ArgumentParser(prog="tgeom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a sigma quantity or predicate")
    p.add_argument("quantity", help="sigma | magnitude | scalar | cosine | predicate:<name>")
    p.add_argument("points", nargs="+", help="points as x,y,... or integer ids")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("tube", parents=[common], help="sample the tube through two points")
    p.add_argument("p0")
    p.add_argument("p1")
    p.add_argument("--extent", type=float, default=1.0)
    p.add_argument("--spacing", type=float, default=0.01)
    p.add_argument("--dimension", type=int, default=None)
    p.set_defaults(func=cmd_tube)

    p = sub.add_parser("embed", parents=[common], help="Gram-matrix embeddability report")
    p.add_argument("--base")
    p.add_argument("--points", nargs="+")
    p.add_argument("--points-file")
    p.add_argument("--tol-embed", type=float, default=None)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("parallel", parents=[common], help="search for intransitive remote parallelism")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--box", type=float, default=3.0)
    p.set_defaults(func=cmd_parallel)

    p = sub.add_parser("list-geometries", parents=[common], help="list geometry types and predicates")
    p.set_defaults(func=cmd_list)

    # let "-1,0.5" through as a point rather than an unknown option
    coords_like = re.compile(r"^-\d*\.?\d+([eE][-+]?\d+)?(,[-+]?\d*\.?\d*([eE][-+]?\d+)?)*$")
    for sp in [parser, *sub.choices.values()]:
        sp._negative_number_matcher = coords_like
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = args.func(args)
    except (UsageError, ConfigError, deformation.RegistryError) as exc:
        print(f"tgeom {args.command}: {exc}", file=sys.stderr)
        return 2
    except (DomainError, NegativeSigmaError, GeometryError) as exc:
        print(f"tgeom {args.command}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(json.dumps(out, indent=2) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
