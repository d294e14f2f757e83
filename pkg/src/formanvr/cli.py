"""Command-line entry point: ``formanvr <command> [options]``.

Exit status: 0 on success, 2 for usage or input errors, 3 when an internal
invariant check fails (including ``frc --verify`` mismatches).
"""

from __future__ import annotations

import argparse
import bisect
import json
import math
import os
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import oracle
from .complex import enumerate_vr_filtration, format_filtration_rows, pairwise_distances
from .engine import cutoff_grid, iter_samples
from .errors import FRCInputError, InvariantViolation
from .geometrize import geometrize
from .io import SeriesWriter, read_distance_csv, read_points_csv, write_points_csv
from .perturb import run_perturbation
from .synth import RggSpec, gen_rgg_points, radius_for_density


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def _threads() -> int:
    raw = os.environ.get("FRC_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise FRCInputError(f"FRC_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise FRCInputError(f"FRC_THREADS must be a positive integer, got {raw!r}")
    # enumeration runs on one thread, which honours any cap
    return 1


def _load_distances(args):
    if args.kind == "points":
        pts, _, _ = read_points_csv(args.input, header=args.header)
        return pairwise_distances(pts, args.metric)
    if args.metric != "euclidean":
        raise FRCInputError("--metric applies to point-cloud input only")
    return read_distance_csv(args.input, header=args.header)


def _sidecar(out: Path, command: str, args, started: float, **extra) -> None:
    params = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()
              if k not in ("func",)}
    for k, v in params.items():
        if isinstance(v, float) and not math.isfinite(v):
            params[k] = str(v)
    meta = {
        "command": command,
        "parameters": params,
        "seed": params.get("seed"),
        "versions": {
            "formanvr": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
        },
        "wall_time_s": round(time.perf_counter() - started, 6),
    }
    meta.update(extra)
    Path(str(out) + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True))


def _nodes_path(out: Path) -> Path:
    return out.with_name(f"{out.stem}.nodes{out.suffix}")


class _OracleCheck:
    """Compares emitted snapshots with the oracle; one oracle build per distinct prefix."""

    def __init__(self, filt, d_max):
        self.filt, self.d_max = filt, d_max
        self.weights = [f.weight for f in filt.faces]
        self._last = None
        self.checked = 0

    def __call__(self, cutoff, snap):
        k = bisect.bisect_right(self.weights, cutoff)
        if k == self._last:
            return
        self._last = k
        cx = oracle.StaticComplex.from_filtration(self.filt, cutoff)
        for d in range(1, self.d_max + 1):
            if snap.face_density(d) != oracle.face_density(cx, d):
                raise InvariantViolation(f"{d}-face density mismatch at cutoff {cutoff!r}")
            if snap.avg_frc(d) != oracle.global_frc(cx, d):
                raise InvariantViolation(f"avg {d}-FRC mismatch at cutoff {cutoff!r}")
            if snap.node_frc(d) != oracle.local_frcs(cx, d):
                raise InvariantViolation(f"local {d}-FRC mismatch at cutoff {cutoff!r}")
            if sum(snap.node_frc(d)) != snap.avg_frc(d):
                raise InvariantViolation(f"node sums differ from avg {d}-FRC at cutoff {cutoff!r}")
        self.checked += 1


def cmd_frc(args) -> int:
    started = time.perf_counter()
    if args.dmax < 1:
        raise FRCInputError(f"--dmax must be >= 1, got {args.dmax}")
    threads = _threads()
    dist = _load_distances(args)
    filt = enumerate_vr_filtration(dist, args.dmax, args.max_dist, cofaces=args.verify)
    end = args.max_dist
    if not math.isfinite(end):
        end = float(dist.max())
    grid = cutoff_grid(args.precision, end)
    check = _OracleCheck(filt, args.dmax) if args.verify else None
    out = Path(args.out)
    events = 0

    def count(w, engine):
        nonlocal events
        events += 1

    with SeriesWriter(out, _nodes_path(out), args.dmax, args.format) as writer:
        for cutoff, snap in iter_samples(filt, grid, args.dmax, on_event=count):
            if check is not None:
                check(cutoff, snap)
            writer.write(cutoff, snap)
    _sidecar(out, "frc", args, started, n_nodes=len(dist), n_faces=len(filt.faces),
             n_events=events, verified=bool(args.verify),
             oracle_checks=check.checked if check else 0, threads=threads,
             nodes_output=str(_nodes_path(out)))
    return 0


def cmd_geometrize(args) -> int:
    started = time.perf_counter()
    if args.kind == "points":
        data, labels, ids = read_points_csv(args.input, header=args.header,
                                            label_column=args.label_column, drop_invalid=True)
    else:
        if args.label_column is not None:
            raise FRCInputError("--label-column applies to point-cloud input only")
        data, labels = read_distance_csv(args.input, header=args.header), None
        ids = list(range(len(data)))
    table = geometrize(data, args.dim, args.precision, args.max_dist, kind=args.kind,
                       metric=args.metric, normalize=args.normalize,
                       observations=ids, labels=labels)
    out = Path(args.out)
    if args.format == "json":
        out.write_text(json.dumps({"columns": table.header(), "rows": list(table.rows())}, indent=1))
    else:
        table.to_csv(out)
    _sidecar(out, "geometrize", args, started, n_observations=len(ids))
    return 0


def cmd_perturb(args) -> int:
    started = time.perf_counter()
    pts, _, _ = read_points_csv(args.input, header=args.header)
    header = None
    if args.header:
        with open(args.input, newline="") as fh:
            header = next(l for l in fh if l.strip()).strip().split(",")
    run = run_perturbation(pts, args.iterations, args.temp, args.scale, args.seed,
                           ddof=0 if args.population_std else 1, max_effective=args.max_effective)
    out = Path(args.out)
    write_points_csv(out, run.dataset, header)
    _sidecar(out, "perturb", args, started, **run.metadata())
    return 0


def cmd_gen_rgg(args) -> int:
    started = time.perf_counter()
    spec = RggSpec(args.n, args.dim, args.density, args.seed)
    pts = gen_rgg_points(spec)
    out = Path(args.out)
    write_points_csv(out, pts)
    radius = radius_for_density(pairwise_distances(pts), spec.target_density)
    _sidecar(out, "gen-rgg", args, started, radius_for_density=radius)
    return 0


def cmd_filtration(args) -> int:
    started = time.perf_counter()
    dist = _load_distances(args)
    filt = enumerate_vr_filtration(dist, args.dmax, args.max_dist)
    out = Path(args.out)
    with out.open("w") as fh:
        fh.write("weight,dim,node_ids\n")
        for row in format_filtration_rows(filt):
            fh.write(",".join(row) + "\n")
    _sidecar(out, "filtration", args, started, n_faces=len(filt.faces))
    return 0


def _input_flags(p, with_kind=True):
    p.add_argument("--input", required=True, type=Path, help="input CSV")
    if with_kind:
        p.add_argument("--kind", choices=("points", "distances"), default="points")
        p.add_argument("--metric", default="euclidean",
                       help="scipy pdist metric name for point input (default: euclidean)")
    p.add_argument("--header", action="store_true", help="first row is a header")
    p.add_argument("--out", required=True, type=Path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="formanvr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("frc", help="curvature-vs-cutoff series of a point cloud or distance matrix")
    _input_flags(p)
    p.add_argument("--dmax", type=int, default=1)
    p.add_argument("--max-dist", type=_positive_float, default=math.inf)
    p.add_argument("--precision", type=int, default=2, help="grid step is 10^-precision")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--verify", action="store_true", help="cross-check every event against the oracle")
    p.add_argument("--seed", type=int, default=None, help="recorded in metadata only")
    p.set_defaults(func=cmd_frc)

    p = sub.add_parser("geometrize", help="per-observation local curvature curves")
    _input_flags(p)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--max-dist", type=_positive_float, default=None)
    p.add_argument("--precision", type=int, default=2)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--label-column", default=None, help="header name or 0-based index carried to output")
    p.add_argument("--normalize", action="store_true", help="z-score features before distances")
    p.set_defaults(func=cmd_geometrize)

    p = sub.add_parser("perturb", help="statistics-preserving randomization")
    _input_flags(p, with_kind=False)
    p.add_argument("--iterations", type=int, required=True)
    p.add_argument("--temp", type=float, default=1.0)
    p.add_argument("--scale", type=_positive_float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-effective", type=int, default=None)
    p.add_argument("--population-std", action="store_true", help="use the n denominator for std")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("gen-rgg", help="uniform points in the unit hypercube")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--density", type=float, default=0.25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=cmd_gen_rgg)

    p = sub.add_parser("filtration", help="dump the sorted face list (debug)")
    _input_flags(p)
    p.add_argument("--dmax", type=int, default=1)
    p.add_argument("--max-dist", type=_positive_float, default=math.inf)
    p.set_defaults(func=cmd_filtration)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FRCInputError as exc:
        print(f"formanvr {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"formanvr {args.command}: invariant violated: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"formanvr {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
