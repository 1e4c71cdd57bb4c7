"""Experiment configuration files and the measured-vs-bound verify runner.

Configs are JSON with a strict schema: unknown keys are rejected by name,
and a seed is mandatory because every experiment may sample.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import exact2d as ex2
from . import mc as mcmod
from ._rng import derive_seed
from .bounds import (
    BoundReport,
    bound_union_in_ball,
    bound_union_in_cube,
    bound_volume_constrained,
    gaussian_surface_bound,
)
from .errors import InvalidArgumentError
from .geometry import NormKind, ParallelSetSpec, PointSet, load_points
from .mc import McConfig

_MODULES = ("core-geometry", "exact2d", "mc-measure", "bounds", "robust-risk", "entropy")
_TOP_KEYS = {"name", "module", "parameters", "seed", "output_path"}
_PARAM_KEYS = {
    "points",
    "points_file",
    "norm",
    "radius",
    "samples",
    "delta",
    "sigma",
    "checks",
    "a_k",
    "b_k",
    "t",
}
_CHECK_NAMES = ("union-in-ball", "union-in-cube", "volume-constrained", "gaussian-surface", "kneser")


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    module: str
    parameters: dict
    seed: int
    output_path: str | None = None

    def __post_init__(self):
        if self.module not in _MODULES:
            raise InvalidArgumentError(
                f"unknown module {self.module!r}; expected one of {', '.join(_MODULES)}"
            )


def load_experiment_config(path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(f"{path}: not valid JSON ({exc})")
    if not isinstance(data, dict):
        raise InvalidArgumentError(f"{path}: expected a JSON object")
    for key in data:
        if key not in _TOP_KEYS:
            raise InvalidArgumentError(f"{path}: unknown key {key!r}")
    for key in ("name", "module", "seed"):
        if key not in data:
            raise InvalidArgumentError(f"{path}: missing required key {key!r}")
    params = data.get("parameters", {})
    if not isinstance(params, dict):
        raise InvalidArgumentError(f"{path}: 'parameters' must be an object")
    for key in params:
        if key not in _PARAM_KEYS:
            raise InvalidArgumentError(f"{path}: unknown parameter key {key!r}")
    return ExperimentConfig(
        name=str(data["name"]),
        module=str(data["module"]),
        parameters=params,
        seed=int(data["seed"]),
        output_path=data.get("output_path"),
    )


def _experiment_points(cfg: ExperimentConfig) -> PointSet:
    params = cfg.parameters
    if "points_file" in params:
        return load_points(params["points_file"])
    if "points" in params:
        return PointSet(np.asarray(params["points"], dtype=np.float64))
    raise InvalidArgumentError(f"{cfg.name}: need 'points' or 'points_file'")


def _enclosing_radius(points: np.ndarray, norm: NormKind) -> float:
    center = 0.5 * (points.min(axis=0) + points.max(axis=0))
    diffs = points - center
    if norm is NormKind.L2:
        return float(np.sqrt((diffs * diffs).sum(axis=1)).max())
    return float(np.abs(diffs).max())


def run_verify_experiment(cfg: ExperimentConfig) -> list[BoundReport]:
    """Measure the configured instance and compare against the named bounds."""
    params = cfg.parameters
    points = _experiment_points(cfg)
    norm = NormKind.parse(params.get("norm", "l2"))
    radius = float(params.get("radius", 1.0))
    if not (radius > 0.0):
        raise InvalidArgumentError(f"{cfg.name}: radius must be positive")
    samples = int(params.get("samples", 200_000))
    delta = params.get("delta")
    checks = params.get("checks", list(_CHECK_NAMES[:3]))
    for name in checks:
        if name not in _CHECK_NAMES:
            raise InvalidArgumentError(f"{cfg.name}: unknown check {name!r}")
    spec = ParallelSetSpec(base=points, norm=norm, radius=radius)
    d = points.dim
    exact2d_available = d == 2

    def surface_estimate():
        if exact2d_available:
            if norm is NormKind.L2:
                return ex2.disk_union_boundary(points, radius).perimeter(), 0.0
            return ex2.square_union_perimeter(points, radius), 0.0
        est = mcmod.mc_shell_lebesgue(
            spec,
            McConfig(samples=samples, seed=derive_seed(cfg.seed, "shell"), shell_delta=delta),
        )
        return est.value, est.std_error

    def volume_estimate():
        if exact2d_available:
            if norm is NormKind.L2:
                return ex2.disk_union_area(points, radius), 0.0
            return ex2.square_union_area(points, radius), 0.0
        est = mcmod.mc_volume(
            spec, McConfig(samples=samples, seed=derive_seed(cfg.seed, "volume"))
        )
        return est.value, est.std_error

    reports: list[BoundReport] = []
    for name in checks:
        if name == "union-in-ball":
            if norm is not NormKind.L2 or _enclosing_radius(points.points, norm) > radius:
                reports.append(BoundReport.uncompared(name, bound_union_in_ball(d, radius)))
                continue
            measured, se = surface_estimate()
            reports.append(
                BoundReport.compare(name, bound_union_in_ball(d, radius), measured, se)
            )
        elif name == "union-in-cube":
            if norm is not NormKind.LINF or _enclosing_radius(points.points, norm) > radius:
                reports.append(BoundReport.uncompared(name, bound_union_in_cube(d, radius)))
                continue
            measured, se = surface_estimate()
            reports.append(
                BoundReport.compare(name, bound_union_in_cube(d, radius), measured, se)
            )
        elif name == "volume-constrained":
            vol, vol_se = volume_estimate()
            measured, se = surface_estimate()
            bound = bound_volume_constrained(d, radius, vol + 4.0 * vol_se)
            reports.append(BoundReport.compare(name, bound, measured, se))
        elif name == "gaussian-surface":
            sigma = float(params.get("sigma", 1.0))
            est = mcmod.mc_gaussian_shell(
                spec,
                McConfig(samples=samples, seed=derive_seed(cfg.seed, "gshell"), shell_delta=delta),
                sigma=sigma,
            )
            bound = gaussian_surface_bound(d, radius, sigma, norm)
            reports.append(BoundReport.compare(name, bound, est.value, est.std_error))
        elif name == "kneser":
            a_k = float(params.get("a_k", radius / 2.0))
            b_k = float(params.get("b_k", radius))
            t = float(params.get("t", 1.5))
            reports.append(
                mcmod.kneser_shell_check(
                    points,
                    norm,
                    a_k,
                    b_k,
                    t,
                    McConfig(samples=samples, seed=derive_seed(cfg.seed, "kneser")),
                )
            )
    return reports
