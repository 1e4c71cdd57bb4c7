"""Command-line entry point.

Subcommands: exact2d, mc, bounds, verify, dr, dr-converge, epi, suite.
Exit codes: 0 all pass, 1 any check failed, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import entropy as ent
from . import exact2d as ex2
from . import mc as mcmod
from . import transport as tp
from .bounds import BOUND_CATALOG, Verdict, gaussian_constant
from .errors import InvalidArgumentError
from .experiment import load_experiment_config, run_verify_experiment
from .geometry import NormKind, ParallelSetSpec, PointSet, load_points
from .mc import McConfig
from .suite import SUITES, SuiteConfig, run_suite, write_reports_csv, write_reports_json


def _fmt(x) -> str:
    return f"{x:.17g}"


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_spec_file(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(f"{path}: not valid JSON ({exc})")
    if not isinstance(data, dict):
        raise InvalidArgumentError(f"{path}: expected a JSON object")
    return data


def _spec_from_dict(data: dict, path) -> ParallelSetSpec:
    if "points_file" in data:
        points = load_points(data["points_file"])
    elif "points" in data:
        points = PointSet(np.asarray(data["points"], dtype=np.float64))
    else:
        raise InvalidArgumentError(f"{path}: need 'points' or 'points_file'")
    return ParallelSetSpec(
        base=points,
        norm=NormKind.parse(data.get("norm", "l2")),
        radius=float(data.get("radius", 1.0)),
    )


def _load_measure(path, weighted: bool) -> tp.EmpiricalMeasure:
    p = Path(path)
    if p.suffix.lower() == ".json":
        data = json.loads(p.read_text())
        if isinstance(data, dict) and "points" in data:
            points = PointSet(np.asarray(data["points"], dtype=np.float64))
            if "weights" in data and weighted:
                return tp.EmpiricalMeasure(
                    points=points, weights=np.asarray(data["weights"], dtype=np.float64)
                )
            return tp.EmpiricalMeasure.uniform(points)
    return tp.EmpiricalMeasure.uniform(load_points(path))


def _cmd_exact2d(args) -> int:
    centers = load_points(args.centers)
    if args.shape == "disk":
        decomp = ex2.disk_union_boundary(centers, args.radius)
        payload = {"shape": "disk", "perimeter": decomp.perimeter()}
        if args.area:
            payload["area"] = decomp.area()
        if args.boundary_out:
            with open(args.boundary_out, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["center_index", "theta_start", "theta_end"])
                for i, t0, t1 in decomp.arcs:
                    writer.writerow([i, _fmt(t0), _fmt(t1)])
    else:
        decomp = ex2.square_union_boundary(centers, args.radius)
        payload = {"shape": "square", "perimeter": decomp.perimeter()}
        if args.area:
            payload["area"] = ex2.square_union_area(centers, args.radius)
        if args.boundary_out:
            with open(args.boundary_out, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(
                    ["orientation", "fixed_coord", "span_start", "span_end", "outward_sign"]
                )
                for s in decomp.segments:
                    writer.writerow(
                        [s.orientation, _fmt(s.fixed_coord), _fmt(s.span_start), _fmt(s.span_end), s.outward_sign]
                    )
    _emit(payload, args.out)
    return 0


def _cmd_mc(args) -> int:
    data = _load_spec_file(args.spec)
    cfg = McConfig(
        samples=args.samples,
        seed=args.seed,
        shell_delta=args.delta,
        workers=args.workers,
    )
    if args.op == "volume":
        est = mcmod.mc_volume(_spec_from_dict(data, args.spec), cfg)
    elif args.op == "shell":
        est = mcmod.mc_shell_lebesgue(_spec_from_dict(data, args.spec), cfg)
    elif args.op == "gshell":
        if data.get("predicate") == "halfspace":
            target = mcmod.halfspace_predicate(int(data.get("dim", 2)))
        else:
            target = _spec_from_dict(data, args.spec)
        est = mcmod.mc_gaussian_shell(target, cfg, sigma=args.sigma)
    elif args.op == "kneser":
        spec = _spec_from_dict(data, args.spec)
        rep = mcmod.kneser_shell_check(
            spec.base,
            spec.norm,
            float(data.get("a_k", spec.radius / 2.0)),
            float(data.get("b_k", spec.radius)),
            float(data.get("t", 1.5)),
            cfg,
        )
        _emit(
            {
                "value": rep.measured,
                "bound": rep.bound_value,
                "std_error": rep.std_error,
                "samples": args.samples,
                "verdict": rep.verdict.value,
            },
            args.out,
        )
        return 0 if rep.verdict is not Verdict.FAIL else 1
    elif args.op == "angle":
        rep = mcmod.inscribed_angle_check(
            int(data.get("dim", 2)),
            float(data.get("cap_half_angle", 0.9)),
            int(data.get("trials", 10)),
            args.seed,
            directions=args.samples,
        )
        _emit(
            {
                "worst_deficit": rep.measured,
                "std_error": rep.std_error,
                "samples": args.samples,
                "verdict": rep.verdict.value,
            },
            args.out,
        )
        return 0 if rep.verdict is not Verdict.FAIL else 1
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidArgumentError(f"unknown op {args.op}")
    _emit(
        {"value": est.value, "std_error": est.std_error, "samples": est.samples_used},
        args.out,
    )
    return 0


def _parse_kv_params(text: str) -> dict:
    params: dict = {}
    if not text:
        return params
    for item in text.split(","):
        if "=" not in item:
            raise InvalidArgumentError(f"malformed parameter {item!r}, expected k=v")
        key, value = item.split("=", 1)
        key = key.strip()
        value = value.strip()
        if key == "norm":
            params[key] = NormKind.parse(value)
        elif key in ("d",):
            params[key] = int(value)
        else:
            params[key] = float(value)
    return params


def _cmd_bounds(args) -> int:
    if args.list:
        payload = {
            name: {"parameters": list(sig)} for name, (_, sig) in sorted(BOUND_CATALOG.items())
        }
        _emit(payload, args.out)
        return 0
    if not args.eval:
        raise InvalidArgumentError("bounds: need --list or --eval NAME")
    if args.eval not in BOUND_CATALOG:
        raise InvalidArgumentError(
            f"unknown bound {args.eval!r}; see 'parset bounds --list'"
        )
    fn, sig = BOUND_CATALOG[args.eval]
    params = _parse_kv_params(args.params or "")
    unknown = set(params) - set(sig)
    if unknown:
        raise InvalidArgumentError(f"unknown parameter(s) {sorted(unknown)} for {args.eval}")
    value = fn(**params)
    payload: dict = {"name": args.eval, "parameters": {k: getattr(v, "value", v) for k, v in params.items()}}
    if args.eval == "bounded-support":
        payload["ball"], payload["cube"] = value
    else:
        payload["value"] = value
    if args.eval == "gaussian-surface":
        breakdown = gaussian_constant(int(params["d"]), params.get("norm", NormKind.L2))
        payload["constant_C"] = breakdown.constant_C
        payload["sandwich"] = [breakdown.lower_sandwich, breakdown.upper_sandwich]
    _emit(payload, args.out)
    return 0


def _cmd_verify(args) -> int:
    cfg = load_experiment_config(args.experiment)
    reports = run_verify_experiment(cfg)
    out_path = args.out or cfg.output_path
    rows = [("verify", rep) for rep in reports]
    if out_path:
        if args.format == "json":
            write_reports_json(out_path, cfg.name, rows)
        else:
            write_reports_csv(out_path, cfg.name, rows)
    for rep in reports:
        print(f"[{rep.verdict.value.upper()}] {rep.bound_name}: "
              f"measured={'' if rep.measured is None else _fmt(rep.measured)} "
              f"bound={_fmt(rep.bound_value)}")
    return 0 if all(r.verdict is not Verdict.FAIL for r in reports) else 1


def _cmd_dr(args) -> int:
    mu0 = _load_measure(args.mu0, args.weighted)
    mu1 = _load_measure(args.mu1, args.weighted)
    if args.weighted:
        result = tp.d_r_weighted(mu0, mu1, args.radius)
    else:
        if len(mu0.points) != len(mu1.points):
            raise InvalidArgumentError(
                "uniform transport needs equal sample counts; pass --weighted otherwise"
            )
        result = tp.d_r_uniform(mu0.points, mu1.points, args.radius)
    _emit(
        {
            "value": result.value,
            "threshold_r": result.threshold_r,
            "matched_mass": 1.0 - result.value,
            "robust_risk": tp.robust_risk(result.value),
            "n0": len(mu0.points),
            "n1": len(mu1.points),
        },
        args.out,
    )
    return 0


_CONVERGE_KEYS = {"gen0", "gen1", "r", "sigma", "n_grid", "trials", "seed"}
_GEN_KEYS = {"kind", "dim", "atoms", "weights", "sigma", "center", "radius"}


def _gen_from_dict(data: dict, path) -> tp.DistributionSpec:
    for key in data:
        if key not in _GEN_KEYS:
            raise InvalidArgumentError(f"{path}: unknown generator key {key!r}")
    return tp.DistributionSpec(
        kind=data.get("kind", "gaussian-mixture"),
        dim=int(data.get("dim", 2)),
        atoms=tuple(tuple(a) for a in data.get("atoms", ())),
        weights=tuple(data.get("weights", ())),
        sigma=float(data.get("sigma", 0.0)),
        center=tuple(data.get("center", ())),
        radius=float(data.get("radius", 1.0)),
    )


def _cmd_dr_converge(args) -> int:
    data = _load_spec_file(args.config)
    for key in data:
        if key not in _CONVERGE_KEYS:
            raise InvalidArgumentError(f"{args.config}: unknown key {key!r}")
    for key in ("gen0", "gen1", "r", "n_grid"):
        if key not in data:
            raise InvalidArgumentError(f"{args.config}: missing required key {key!r}")
    seed = int(data.get("seed", args.seed))
    result = tp.convergence_experiment(
        _gen_from_dict(data["gen0"], args.config),
        _gen_from_dict(data["gen1"], args.config),
        r=float(data["r"]),
        sigma=float(data.get("sigma", 0.0)),
        n_grid=data["n_grid"],
        trials=int(data.get("trials", 10)),
        seed=seed,
    )
    target = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(target)
        writer.writerow(["n", "trial", "d_r", "abs_dev"])
        for n, trial, d_r, dev in result.rows:
            writer.writerow([n, trial, _fmt(d_r), _fmt(dev)])
    finally:
        if args.out:
            target.close()
    print(f"reference d_r = {_fmt(result.reference)} at n_ref = {result.n_ref}",
          file=sys.stderr)
    return 0


def _load_mixture_file(path, variance: float) -> ent.GaussianMixture:
    data = _load_spec_file(path)
    atoms = np.asarray(data["atoms"], dtype=np.float64)
    weights = data.get("weights")
    if weights is None:
        weights = np.full(len(atoms), 1.0 / len(atoms))
    return ent.GaussianMixture(atoms=atoms, weights=np.asarray(weights, dtype=np.float64), variance=variance)


def _cmd_epi(args) -> int:
    gm_x = _load_mixture_file(args.x, args.smoothing)
    gm_y = _load_mixture_file(args.y, args.smoothing)
    rep = ent.reverse_epi_check(
        x_atoms=gm_x.atoms,
        x_weights=gm_x.weights,
        y_atoms=gm_y.atoms,
        y_weights=gm_y.weights,
        r=args.smoothing,
        n=args.samples,
        seed=args.seed,
    )
    h_x = ent.entropy_quadrature(gm_x).value if gm_x.dim == 1 else ent.entropy_mc(
        gm_x, n=args.samples, seed=args.seed
    ).value
    h_y = ent.entropy_quadrature(gm_y).value if gm_y.dim == 1 else ent.entropy_mc(
        gm_y, n=args.samples, seed=args.seed + 1
    ).value
    _emit(
        {
            "h_x": h_x,
            "h_y": h_y,
            "h_sum": rep.measured,
            "bound": rep.bound_value,
            "slack": rep.slack,
            "verdict": rep.verdict.value,
        },
        args.out,
    )
    return 0 if rep.verdict is not Verdict.FAIL else 1


def _cmd_suite(args) -> int:
    config = SuiteConfig(
        seed=args.seed,
        samples=args.samples,
        workers=args.workers,
        out_dir=args.out,
        fmt=args.format,
    )
    manifest = run_suite(args.name, config, log=print)
    print(f"suite {args.name}: {'all pass' if manifest.all_pass() else 'FAILURES'} "
          f"({len(manifest.reports)} checks)")
    return 0 if manifest.all_pass() else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base RNG seed")
    common.add_argument("--workers", type=int, default=1, help="worker threads")
    common.add_argument("--out", type=str, default=None, help="output path")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(prog="parset", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact2d", parents=[common], help="exact planar union measures")
    p.add_argument("--shape", choices=("disk", "square"), required=True)
    p.add_argument("--centers", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--area", action="store_true")
    p.add_argument("--boundary-out", type=str, default=None)
    p.set_defaults(fn=_cmd_exact2d)

    p = sub.add_parser("mc", parents=[common], help="Monte Carlo measures")
    p.add_argument("--op", choices=("volume", "shell", "gshell", "kneser", "angle"), required=True)
    p.add_argument("--spec", required=True, help="JSON instance description")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--sigma", type=float, default=1.0)
    p.set_defaults(fn=_cmd_mc)

    p = sub.add_parser("bounds", parents=[common], help="closed-form constants")
    p.add_argument("--list", action="store_true")
    p.add_argument("--eval", type=str, default=None)
    p.add_argument("--params", type=str, default=None, help="k=v,k=v parameter list")
    p.set_defaults(fn=_cmd_bounds)

    p = sub.add_parser("verify", parents=[common], help="measured-vs-bound experiment")
    p.add_argument("--experiment", required=True, help="ExperimentConfig JSON file")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("dr", parents=[common], help="thresholded transport cost")
    p.add_argument("--mu0", required=True)
    p.add_argument("--mu1", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--weighted", action="store_true")
    p.set_defaults(fn=_cmd_dr)

    p = sub.add_parser("dr-converge", parents=[common], help="plug-in convergence experiment")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=_cmd_dr_converge)

    p = sub.add_parser("epi", parents=[common], help="smoothed-sum entropy inequality")
    p.add_argument("--x", required=True, help="mixture JSON for the first variable")
    p.add_argument("--y", required=True, help="mixture JSON for the second variable")
    p.add_argument("--smoothing", type=float, required=True)
    p.add_argument("--samples", type=int, default=200_000)
    p.set_defaults(fn=_cmd_epi)

    p = sub.add_parser("suite", parents=[common], help="run a verification suite")
    p.add_argument("name", choices=tuple(SUITES))
    p.add_argument("--samples", type=int, default=None, help="smoke-mode sample budget")
    p.set_defaults(fn=_cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
