"""Command-line surface: fiber polylines for plotting, map validation,
type indicators, and homogeneity checks, emitted as machine-readable
reports.

Reports are JSON documents with a fixed field order so equal runs diff
cleanly; repeated runs with the same seed and flags are byte-identical
except for the ``timestamp`` field. Exit codes: 0 success, 1 a check
failed (the report is still written), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .algebra import as_rng, random_unit_vectors
from .grassmann import smallest_principal_angle_batch
from .hopf import (
    complex_hopf_fiber,
    octonionic_hopf_fiber,
    octonionic_hopf_map_coords,
    quaternionic_hopf_fiber,
)
from .moduli import (
    ConstantMap,
    IdentityMap,
    PolarContraction,
    classify_round_value,
    homogeneity_scan,
    validate_distance_decreasing,
    MapFibration,
)
from .repcheck import character, fs_indicator, group_sampler
from .symmetry import (
    figure1_fibration,
    fiber_preservation_check,
    hopf_transitivity_witness,
    screw_transitivity_check,
)

FORMAT_VERSION = 1


# ---------------------------------------------------------------------------
# Report plumbing.


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


def _check_finite(node, path="report"):
    if isinstance(node, dict):
        for key, value in node.items():
            _check_finite(value, f"{path}.{key}")
    elif isinstance(node, (list, tuple)):
        for idx, value in enumerate(node):
            _check_finite(value, f"{path}[{idx}]")
    elif isinstance(node, float) and not math.isfinite(node):
        raise RuntimeError(f"non-finite number at {path}; this is a defect")


def build_report(command: str, parameters: dict, seed: int, outcomes: list) -> dict:
    report = {
        "format_version": FORMAT_VERSION,
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "outcomes": outcomes,
        "version": __version__,
        "timestamp": _timestamp(),
    }
    _check_finite(report)
    return report


def report_to_csv(report: dict) -> str:
    lines = ["name,ok,metric,value"]
    for outcome in report["outcomes"]:
        for metric, value in outcome.get("metrics", {}).items():
            lines.append(f"{outcome['name']},{outcome['ok']},{metric},{value}")
    return "\n".join(lines) + "\n"


def polyline_file_to_csv(doc: dict) -> str:
    width = len(doc["fibers"][0]["points"][0]) if doc["fibers"] else 0
    header = "fiber_id,point_index," + ",".join(f"c{i}" for i in range(width))
    lines = [header]
    for fiber in doc["fibers"]:
        for idx, point in enumerate(fiber["points"]):
            lines.append(f"{fiber['id']},{idx}," + ",".join(repr(c) for c in point))
    return "\n".join(lines) + "\n"


def write_output(text: str, out_path):
    """Write atomically (temp file then rename) or print to stdout."""
    if out_path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out_path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hopflab-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(doc: dict, args, to_csv) -> None:
    if args.format == "csv":
        text = to_csv(doc)
    else:
        text = json.dumps(doc, indent=2) + "\n"
    write_output(text, args.out)


# ---------------------------------------------------------------------------
# fibers


def stereographic_projection(points: np.ndarray) -> np.ndarray:
    """Project S^3 points from the pole (0, 0, 0, 1) into R^3."""
    denom = 1.0 - points[:, 3]
    if np.any(np.abs(denom) < 1e-9):
        raise ValueError("a fiber point coincides with the projection pole")
    return points[:, :3] / denom[:, None]


_FAMILY_FIBER = {
    "complex": complex_hopf_fiber,
    "quaternionic": quaternionic_hopf_fiber,
}


def _family_compatible(family: str, sphere_dim: int) -> bool:
    if family == "complex":
        return sphere_dim >= 3 and sphere_dim % 2 == 1
    if family == "quaternionic":
        return sphere_dim >= 3 and sphere_dim % 4 == 3
    if family == "octonionic":
        return sphere_dim == 15
    return False


def cmd_fibers(args, parser) -> int:
    if not _family_compatible(args.family, args.sphere_dim):
        parser.error(
            f"family {args.family!r} is incompatible with sphere dimension {args.sphere_dim}"
        )
    if args.projection == "stereographic" and args.sphere_dim != 3:
        parser.error("stereographic output is only offered for the 3-sphere")
    rng = as_rng(args.seed)
    fibers = []
    for idx in range(args.count):
        if args.family == "octonionic":
            base = random_unit_vectors(8, rng, 1)[0]
            sampler = octonionic_hopf_fiber(base)
        else:
            x = random_unit_vectors(args.sphere_dim, rng, 1)[0]
            sampler = _FAMILY_FIBER[args.family](x)
        points = sampler.grid_points(args.grid)
        if args.projection == "stereographic":
            points = stereographic_projection(points)
        fibers.append({"id": idx, "points": [[float(c) for c in row] for row in points]})
    doc = {
        "format_version": FORMAT_VERSION,
        "ambient_dim": args.sphere_dim,
        "projection": args.projection,
        "fibers": fibers,
    }
    _check_finite(doc)
    emit(doc, args, polyline_file_to_csv)
    return 0


# ---------------------------------------------------------------------------
# validate-map


def _parse_point(text: str) -> np.ndarray:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError("points on the 2-sphere have 3 coordinates")
    arr = np.asarray(parts)
    return arr / np.linalg.norm(arr)


def _build_map(args, parser):
    if args.map == "constant":
        return ConstantMap(_parse_point(args.point))
    if args.map == "polar-contraction":
        if not 0.0 < args.ratio < 1.0:
            parser.error("--ratio must lie in (0, 1)")
        return PolarContraction(args.ratio)
    if args.map == "identity":
        return IdentityMap()
    parser.error(f"unknown map spec {args.map!r}")


def cmd_validate_map(args, parser) -> int:
    f = _build_map(args, parser)
    rng = as_rng(args.seed)
    outcomes = []

    validation = validate_distance_decreasing(f, pairs=args.pairs, seed=rng.spawn(1)[0])
    outcomes.append(
        {
            "name": "distance-decreasing",
            "ok": validation.ok,
            "metrics": {"worst_ratio": validation.worst_ratio},
        }
    )

    verdict = "rejected"
    if validation.ok:
        fibration = MapFibration(f)
        scan_rng = as_rng(rng.spawn(1)[0])
        # stay clear of the domain boundary so differentials are defined
        pts = f.domain.sample(scan_rng, 4 * args.scan_points)
        pts = pts[[f.domain.boundary_margin(p) > 0.05 for p in pts]][: args.scan_points]

        bases = np.stack([fibration.plane(p).basis for p in pts])
        half = len(bases) // 2
        angles = smallest_principal_angle_batch(bases[:half], bases[half : 2 * half])
        outcomes.append(
            {
                "name": "fiber-disjointness",
                "ok": bool(np.all(angles > 1e-6)),
                "metrics": {"smallest_principal_angle": float(angles.min())},
            }
        )

        # constant_axes False is a finding (the fibration is not locally
        # fiberwise homogeneous), not a check failure
        scan = homogeneity_scan(f, pts)
        outcomes.append(
            {
                "name": "homogeneity-scan",
                "ok": True,
                "metrics": {
                    "constant_axes": bool(scan.constant_axes),
                    "sigma_major_spread": float(scan.spread[0]),
                    "sigma_minor_spread": float(scan.spread[1]),
                },
            }
        )

        if scan.constant_axes and np.max(scan.sigma_field[:, 0] - scan.sigma_field[:, 1]) < 1e-3:
            verdict = classify_round_value(float(scan.sigma_field.mean()), atol=1e-3)
        else:
            verdict = "not-locally-homogeneous"

    outcomes.append({"name": "round-map-verdict", "ok": True, "metrics": {"verdict": verdict}})
    report = build_report(
        command="validate-map",
        parameters={
            "map": args.map,
            "point": args.point if args.map == "constant" else None,
            "ratio": args.ratio if args.map == "polar-contraction" else None,
            "pairs": args.pairs,
            "scan_points": args.scan_points,
        },
        seed=args.seed,
        outcomes=outcomes,
    )
    emit(report, args, report_to_csv)
    return 0 if all(o["ok"] for o in outcomes) else 1


# ---------------------------------------------------------------------------
# fs


def cmd_fs(args, parser) -> int:
    try:
        sampler = group_sampler(args.group)
        chi = character(args.group, args.rep)
    except ValueError as exc:
        parser.error(str(exc))
    est = fs_indicator(chi, sampler, n=args.n, seed=args.seed)
    nearest, label = est.nearest_type()
    confident = abs(est.estimate - nearest) <= max(5.0 * est.stderr, 1e-9)
    report = build_report(
        command="fs",
        parameters={"group": sampler.group_id, "rep": chi.rep_id, "n": args.n},
        seed=args.seed,
        outcomes=[
            {
                "name": "type-indicator",
                "ok": confident,
                "metrics": {
                    "estimate": est.estimate,
                    "stderr": est.stderr,
                    "nearest": nearest,
                    "type": label,
                    "confident": confident,
                },
            }
        ],
    )
    emit(report, args, report_to_csv)
    return 0 if confident else 1


# ---------------------------------------------------------------------------
# homogeneity


def cmd_homogeneity(args, parser) -> int:
    outcomes = []
    if args.target == "hopf-s3":
        rng = as_rng(args.seed)
        xs = random_unit_vectors(3, rng, args.trials)
        ys = random_unit_vectors(3, rng, args.trials)
        worst = 0.0
        for x, y in zip(xs, ys):
            witness = hopf_transitivity_witness(x, y)
            target = complex_hopf_fiber(y)
            moved = witness.apply(complex_hopf_fiber(x).grid_points(8))
            worst = max(worst, float(np.max(target.min_distances_to(moved))))
            worst = max(worst, float(np.linalg.norm(witness.apply(x) - y)))
        outcomes.append(
            {
                "name": "hopf-transitivity",
                "ok": worst < 1e-9,
                "metrics": {"worst_residual": worst},
            }
        )
        check = fiber_preservation_check(
            complex_hopf_fiber, hopf_transitivity_witness(xs[0], ys[0]), trials=min(args.trials, 64), seed=args.seed
        )
        outcomes.append(
            {
                "name": "fiber-preservation",
                "ok": check.ok,
                "metrics": {"worst_residual": check.worst_residual},
            }
        )
    elif args.target == "figure1":
        report = screw_transitivity_check(figure1_fibration(args.alpha), pairs=args.trials, seed=args.seed)
        outcomes.append(
            {
                "name": "screw-transitivity",
                "ok": report.ok,
                "metrics": {"worst_residual": report.worst_residual, "alpha": args.alpha},
            }
        )
    else:
        parser.error(f"unknown target {args.target!r}")

    report = build_report(
        command="homogeneity",
        parameters={"target": args.target, "alpha": args.alpha, "trials": args.trials},
        seed=args.seed,
        outcomes=outcomes,
    )
    emit(report, args, report_to_csv)
    return 0 if all(o["ok"] for o in outcomes) else 1


# ---------------------------------------------------------------------------
# Parser.


def _default_seed() -> int:
    env = os.environ.get("HOPFLAB_DEFAULT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(2)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hopflab",
        description="Hopf fibration construction and fiberwise-homogeneity checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="RNG seed (default: HOPFLAB_DEFAULT_SEED or 0)")
        p.add_argument("--out", type=str, default=None, help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    fibers = sub.add_parser("fibers", help="sample fibers as polyline data for plotting")
    fibers.add_argument("--family", choices=("complex", "quaternionic", "octonionic"), required=True)
    fibers.add_argument("--sphere-dim", type=int, required=True)
    fibers.add_argument("--count", type=int, default=8)
    fibers.add_argument("--grid", type=int, default=128)
    fibers.add_argument("--projection", choices=("none", "stereographic"), default="none")
    common(fibers)

    vmap = sub.add_parser("validate-map", help="validate a map and classify its fibration")
    vmap.add_argument("--map", choices=("constant", "polar-contraction", "identity"), required=True)
    vmap.add_argument("--point", type=str, default="1,0,0", help="constant value c as 'x,y,z'")
    vmap.add_argument("--ratio", type=float, default=0.5, help="polar contraction ratio in (0,1)")
    vmap.add_argument("--pairs", type=int, default=20000)
    vmap.add_argument("--scan-points", type=int, default=64)
    common(vmap)

    fs = sub.add_parser("fs", help="Monte Carlo representation-type indicator")
    fs.add_argument("--group", type=str, required=True, help="SU2, SO3, U1, SU3, or Sp2")
    fs.add_argument("--rep", type=str, required=True, help="trivial, defining, vector, conjugate, adjoint")
    fs.add_argument("--n", type=int, default=100000)
    common(fs)

    hom = sub.add_parser("homogeneity", help="witness-based fiberwise-homogeneity checks")
    hom.add_argument("--target", choices=("hopf-s3", "figure1"), required=True)
    hom.add_argument("--alpha", type=float, default=1.0, help="turning rate for the figure1 target")
    hom.add_argument("--trials", type=int, default=1000)
    common(hom)

    return parser


_HANDLERS = {
    "fibers": cmd_fibers,
    "validate-map": cmd_validate_map,
    "fs": cmd_fs,
    "homogeneity": cmd_homogeneity,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    return _HANDLERS[args.command](args, parser)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
