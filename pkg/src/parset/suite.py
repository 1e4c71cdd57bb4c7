"""Verification suites: every bound and identity check, runnable end to end.

Each check returns BoundReports.  Aggregate reports over many random
instances follow one convention: measured is the worst 4-sigma-adjusted
excess over the per-instance bound (anything <= 0 passes), with bound_value 0
and std_error 0, unless the check says otherwise.

All randomness comes from streams derived from the suite seed, so a rerun
with the same seed reproduces every number bit for bit.  Result files are
byte-identical across reruns; the manifest carries wall time and is the one
artifact excluded from that guarantee.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import entropy as ent
from . import exact2d as ex2
from . import mc as mcmod
from . import transport as tp
from ._rng import chunk_generator, derive_seed, uniform_in_ball, uniform_in_cube
from .bounds import (
    BoundReport,
    Verdict,
    bound_volume_constrained,
    gaussian_surface_bound,
    reverse_bm_bound,
    reverse_epi_constant,
)
from .errors import InvalidArgumentError
from .geometry import NormKind, ParallelSetSpec, PointSet
from .mc import McConfig

_VERSION = "0.1.0"


@dataclass(frozen=True)
class Profile:
    """Sample budgets; the defaults match the stated tolerances."""

    mc_samples: int = 1_000_000
    halfspace_samples: int = 10_000_000
    shell3d_samples: int = 400_000
    kneser_samples: int = 1_000_000
    angle_directions: int = 200_000
    angle_pairs: int = 100
    entropy_samples: int = 200_000
    raster_instances: int = 50
    raster_grid: int = 4096
    random_configs: int = 1000
    dr_draws: int = 500
    w1_pairs: int = 100
    sandwich_count: int = 100
    convergence_grid: tuple = (25, 50, 100, 200, 400)
    convergence_trials: int = 20


FULL = Profile()


def profile_from_samples(samples: int | None) -> Profile:
    """Smoke-scale the budgets; None keeps the full profile."""
    if samples is None:
        return FULL
    s = max(int(samples), 16)
    frac = min(1.0, s / FULL.mc_samples)
    if frac >= 1.0:
        return FULL

    def shrink(v, floor=1000):
        return max(floor, int(v * frac))

    return Profile(
        mc_samples=s,
        halfspace_samples=shrink(FULL.halfspace_samples),
        shell3d_samples=shrink(FULL.shell3d_samples),
        kneser_samples=shrink(FULL.kneser_samples),
        angle_directions=shrink(FULL.angle_directions),
        angle_pairs=8,
        entropy_samples=shrink(FULL.entropy_samples),
        raster_instances=2,
        raster_grid=FULL.raster_grid,
        random_configs=200,
        dr_draws=50,
        w1_pairs=20,
        sandwich_count=20,
        convergence_grid=(25, 50),
        convergence_trials=3,
    )


def _ball_config(g, max_points: int, dim: int = 2) -> np.ndarray:
    return uniform_in_ball(g, int(g.integers(1, max_points + 1)), dim)


def _cube_config(g, max_points: int, dim: int = 2) -> np.ndarray:
    return uniform_in_cube(g, int(g.integers(1, max_points + 1)), dim)


# ---------------------------------------------------------------------------
# exact 2-d checks
# ---------------------------------------------------------------------------


def check_b_puzzle(seed: int, prof: Profile) -> list[BoundReport]:
    """Perimeter of confined unit-disk unions never beats the doubled disk."""
    four_pi = 4.0 * math.pi
    angles = [0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0]
    pts = PointSet([[0.0, 0.0]] + [[math.cos(a), math.sin(a)] for a in angles])
    decomp = ex2.disk_union_boundary(pts, 1.0)
    reports = [
        BoundReport.compare(
            "b-puzzle-equality-gap", 1e-9, abs(decomp.perimeter() - four_pi)
        ),
        BoundReport.compare("b-puzzle-center-arc", 1e-9, decomp.arc_length_of(0)),
    ]
    g = chunk_generator(derive_seed(seed, "b-puzzle"), 0)
    worst = 0.0
    for _ in range(prof.random_configs):
        centers = np.vstack([[0.0, 0.0], _ball_config(g, 50)])
        worst = max(worst, ex2.disk_union_boundary(PointSet(centers), 1.0).perimeter())
    reports.append(BoundReport.compare("b-puzzle-bound", four_pi + 1e-9, worst))
    return reports


def check_c_puzzle(seed: int, prof: Profile) -> list[BoundReport]:
    """Perimeter of confined unit-square unions never beats the doubled square."""
    g = chunk_generator(derive_seed(seed, "c-puzzle"), 0)
    worst = 0.0
    for _ in range(prof.random_configs):
        centers = np.vstack([[0.0, 0.0], _cube_config(g, 50)])
        worst = max(worst, ex2.square_union_perimeter(PointSet(centers), 1.0))
    return [BoundReport.compare("c-puzzle-bound", 16.0 + 1e-9, worst)]


def check_exact_vs_raster(seed: int, prof: Profile) -> list[BoundReport]:
    """Exact perimeter/area vs the marching-squares grid oracle."""
    g = chunk_generator(derive_seed(seed, "raster"), 0)
    worst_perim = 0.0
    worst_area = 0.0
    for k in range(prof.raster_instances):
        disk = k % 2 == 0
        r = float(g.uniform(0.6, 1.4))
        centers = PointSet(_ball_config(g, 20) if disk else _cube_config(g, 20))
        if disk:
            exact_p = ex2.disk_union_boundary(centers, r).perimeter()
            exact_a = ex2.disk_union_area(centers, r)
            area, perim = ex2.rasterized_measures(centers, r, NormKind.L2, prof.raster_grid)
        else:
            exact_p = ex2.square_union_perimeter(centers, r)
            exact_a = ex2.square_union_area(centers, r)
            area, perim = ex2.rasterized_measures(centers, r, NormKind.LINF, prof.raster_grid)
        worst_perim = max(worst_perim, abs(perim - exact_p) / exact_p)
        worst_area = max(worst_area, abs(area - exact_a) / exact_a)
    return [
        BoundReport.compare("raster-perimeter-rel-err", 0.01, worst_perim),
        BoundReport.compare("raster-area-rel-err", 0.001, worst_area),
    ]


def check_volume_constrained(seed: int, prof: Profile) -> list[BoundReport]:
    """Measured surface vs the volume-budget cap (V/r) * 2^(2d-1) * d."""
    g = chunk_generator(derive_seed(seed, "volume-constrained"), 0)
    worst2d = -math.inf
    for k in range(100):
        disk = k % 2 == 0
        r = float(g.uniform(0.4, 1.2))
        centers = PointSet((_ball_config(g, 30) if disk else _cube_config(g, 30)) * 1.5)
        if disk:
            perim = ex2.disk_union_boundary(centers, r).perimeter()
            vol = ex2.disk_union_area(centers, r)
        else:
            perim = ex2.square_union_perimeter(centers, r)
            vol = ex2.square_union_area(centers, r)
        worst2d = max(worst2d, perim - bound_volume_constrained(2, r, vol))
    reports = [BoundReport.compare("volume-constrained-2d", 0.0, worst2d)]
    worst3d = -math.inf
    for k in range(20):
        r = float(g.uniform(0.4, 1.0))
        centers = PointSet(uniform_in_ball(g, int(g.integers(1, 12)), 3) * 1.2)
        spec = ParallelSetSpec(base=centers, norm=NormKind.L2, radius=r)
        sub = derive_seed(seed, "volume-constrained-3d", k)
        vol = mcmod.mc_volume(spec, McConfig(samples=prof.shell3d_samples, seed=sub))
        shell = mcmod.mc_shell_lebesgue(
            spec, McConfig(samples=prof.shell3d_samples, seed=sub + 1)
        )
        bound = bound_volume_constrained(3, r, vol.value + 4.0 * vol.std_error)
        worst3d = max(worst3d, shell.value - 4.0 * shell.std_error - bound)
    reports.append(BoundReport.compare("volume-constrained-3d", 0.0, worst3d))
    return reports


def check_kneser(seed: int, prof: Profile) -> list[BoundReport]:
    """Shell scaling inequality over random configurations and scale factors."""
    g = chunk_generator(derive_seed(seed, "kneser"), 0)
    worst = -math.inf
    for k in range(20):
        dim = 2 if k % 2 == 0 else 3
        centers = PointSet(uniform_in_ball(g, int(g.integers(1, 9)), dim))
        norm = NormKind.L2 if k % 3 else NormKind.LINF
        for t in (1.2, 1.5, 2.0):
            rep = mcmod.kneser_shell_check(
                centers,
                norm,
                a_k=0.5,
                b_k=1.0,
                t=t,
                cfg=McConfig(
                    samples=prof.kneser_samples, seed=derive_seed(seed, "kneser", k, t)
                ),
            )
            worst = max(worst, rep.measured - 4.0 * rep.std_error - rep.bound_value)
    return [BoundReport.compare("kneser-shell-sweep", 0.0, worst)]


def check_inscribed_angle(seed: int, prof: Profile) -> list[BoundReport]:
    """Cap solid angle from an interior apex vs the central one."""
    # the 1% ratio tolerance needs ~1e6 directions; cheap even in smoke runs
    fa, fc, _, _ = mcmod.cap_solid_angle_fractions(
        2,
        cap_half_angle=0.9,
        apex=np.array([-1.0, 0.0]),
        directions=max(5 * prof.angle_directions, 1_000_000),
        seed=derive_seed(seed, "angle-antipode"),
    )
    reports = [BoundReport.compare("inscribed-angle-2d-ratio", 0.01, abs(fa / fc - 0.5))]
    g = chunk_generator(derive_seed(seed, "angle-3d"), 0)
    worst = -math.inf
    for k in range(prof.angle_pairs):
        rep = mcmod.inscribed_angle_check(
            3,
            cap_half_angle=float(g.uniform(0.2, 2.5)),
            trials=1,
            seed=derive_seed(seed, "angle-3d", k),
            directions=prof.angle_directions,
        )
        worst = max(worst, rep.measured - 4.0 * rep.std_error)
    reports.append(BoundReport.compare("inscribed-angle-3d-sweep", 0.0, worst))
    return reports


# ---------------------------------------------------------------------------
# gaussian checks
# ---------------------------------------------------------------------------


def check_gaussian_calibration(seed: int, prof: Profile) -> list[BoundReport]:
    """Halfspace shell estimate against the exact constant 1/sqrt(2 pi)."""
    est = mcmod.mc_gaussian_shell(
        mcmod.halfspace_predicate(3),
        McConfig(
            samples=prof.halfspace_samples,
            seed=derive_seed(seed, "halfspace"),
            shell_delta=1e-3,
        ),
    )
    target = 1.0 / math.sqrt(2.0 * math.pi)
    return [
        BoundReport.compare(
            "gaussian-halfspace", 3.0 * est.std_error, abs(est.value - target)
        )
    ]


def check_gaussian_surface_bound(seed: int, prof: Profile) -> list[BoundReport]:
    """Gaussian shell estimates stay under max(C, C/r) (loose by design)."""
    g = chunk_generator(derive_seed(seed, "gaussian-surface"), 0)
    worst = -math.inf
    k = 0
    for dim in (2, 3):
        for norm in (NormKind.L2, NormKind.LINF):
            r = float(g.uniform(0.3, 1.5))
            centers = PointSet(uniform_in_ball(g, int(g.integers(1, 9)), dim) * 1.5)
            spec = ParallelSetSpec(base=centers, norm=norm, radius=r)
            est = mcmod.mc_gaussian_shell(
                spec,
                McConfig(samples=prof.mc_samples, seed=derive_seed(seed, "gsurf", k)),
            )
            bound = gaussian_surface_bound(dim, r, 1.0, norm)
            worst = max(worst, est.value - 4.0 * est.std_error - bound)
            k += 1
    return [BoundReport.compare("gaussian-surface-bound", 0.0, worst)]


# ---------------------------------------------------------------------------
# reverse Brunn-Minkowski
# ---------------------------------------------------------------------------


def check_reverse_bm(seed: int, prof: Profile) -> list[BoundReport]:
    """Minkowski-sum volume vs volume product times 2^(4d)/(omega_d r^d).

    The sum of two radius-r disk unions is the disk union of all pairwise
    centre sums with radius 2r.  The sum volume is measured by Monte Carlo on
    that membership; the two factor volumes come from the exact planar area.
    The sum volume is also cross-checked against the exact area, which is
    available in 2-d.
    """
    g = chunk_generator(derive_seed(seed, "reverse-bm"), 0)
    samples = max(1000, prof.mc_samples // 5)
    worst = -math.inf
    worst_consistency = -math.inf
    for k in range(50):
        r = float(g.uniform(0.5, 1.2))
        k_pts = _ball_config(g, 8)
        l_pts = _ball_config(g, 8)
        vol_k = ex2.disk_union_area(PointSet(k_pts), r)
        vol_l = ex2.disk_union_area(PointSet(l_pts), r)
        sum_set = PointSet((k_pts[:, None, :] + l_pts[None, :, :]).reshape(-1, 2))
        est = mcmod.mc_volume(
            ParallelSetSpec(base=sum_set, norm=NormKind.L2, radius=2.0 * r),
            McConfig(samples=samples, seed=derive_seed(seed, "bm-mc", k)),
        )
        bound = vol_k * vol_l * reverse_bm_bound(2, r)
        worst = max(worst, est.value - 4.0 * est.std_error - bound)
        exact_sum = ex2.disk_union_area(sum_set, 2.0 * r)
        worst_consistency = max(
            worst_consistency, abs(est.value - exact_sum) - 4.0 * est.std_error
        )
    return [
        BoundReport.compare("reverse-bm", 0.0, worst),
        BoundReport.compare("reverse-bm-mc-vs-exact", 0.0, worst_consistency),
    ]


# ---------------------------------------------------------------------------
# robust risk checks
# ---------------------------------------------------------------------------


def check_dr_oracle(seed: int, prof: Profile) -> list[BoundReport]:
    """Matching cost equals brute force; weighted solver agrees on uniform
    inputs (both comparisons exact)."""
    g = chunk_generator(derive_seed(seed, "dr-oracle"), 0)
    mismatches = 0
    for _ in range(prof.dr_draws):
        n = int(g.integers(1, 8))
        dim = int(g.integers(1, 4))
        x = PointSet(g.standard_normal((n, dim)))
        y = PointSet(g.standard_normal((n, dim)))
        r = float(g.uniform(0.05, 1.5))
        if tp.d_r_uniform(x, y, r).value != tp.d_r_brute_force(x, y, r):
            mismatches += 1
    reports = [BoundReport.compare("dr-brute-force-agreement", 0.0, float(mismatches))]
    disagreements = 0
    for _ in range(50):
        n = int(g.integers(1, 12))
        dim = int(g.integers(1, 3))
        x = PointSet(g.standard_normal((n, dim)))
        y = PointSet(g.standard_normal((n, dim)))
        r = float(g.uniform(0.05, 1.5))
        uni = tp.d_r_uniform(x, y, r)
        wei = tp.d_r_weighted(
            tp.EmpiricalMeasure.uniform(x), tp.EmpiricalMeasure.uniform(y), r
        )
        if uni.value_exact != wei.value_exact:
            disagreements += 1
    reports.append(
        BoundReport.compare("dr-weighted-uniform-agreement", 0.0, float(disagreements))
    )
    return reports


def check_w1_domination_sweep(seed: int, prof: Profile) -> list[BoundReport]:
    g = chunk_generator(derive_seed(seed, "w1-dom"), 0)
    worst = -math.inf
    for _ in range(prof.w1_pairs):
        n = int(g.integers(2, 51))
        dim = int(g.integers(1, 4))
        x = PointSet(g.standard_normal((n, dim)) * float(g.uniform(0.5, 2.0)))
        y = PointSet(g.standard_normal((n, dim)) + g.uniform(-1, 1, dim))
        r = float(g.uniform(0.05, 1.0))
        rep = tp.check_w1_domination(
            tp.EmpiricalMeasure.uniform(x), tp.EmpiricalMeasure.uniform(y), r
        )
        worst = max(worst, rep.measured - rep.bound_value)
    return [BoundReport.compare("w1-domination-sweep", 1e-12, worst)]


def check_coupling_sandwich(seed: int, prof: Profile) -> list[BoundReport]:
    g = chunk_generator(derive_seed(seed, "sandwich"), 0)
    worst = -math.inf
    for _ in range(prof.sandwich_count):
        dim = int(g.integers(1, 4))
        r = float(g.uniform(0.3, 1.2))
        eta = min(float(g.uniform(0.02, 0.33)) * r, r / 3.0 * 0.95)

        def measure(scale, shift):
            n = int(g.integers(2, 31))
            pts = PointSet(g.standard_normal((n, dim)) * scale + shift)
            return tp.EmpiricalMeasure.uniform(pts)

        mu0 = measure(1.0, 0.0)
        mu1 = measure(float(g.uniform(0.5, 1.5)), float(g.uniform(-1, 1)))
        mu0n = measure(1.0, float(g.uniform(-0.2, 0.2)))
        mu1n = measure(1.0, float(g.uniform(-0.2, 0.2)))
        rep = tp.coupling_sandwich_check(mu0, mu1, mu0n, mu1n, r, eta)
        worst = max(worst, rep.measured)
    return [BoundReport.compare("coupling-sandwich-sweep", 0.0, worst)]


def check_convergence(seed: int, prof: Profile) -> list[BoundReport]:
    """Plug-in cost deviation shrinks along the sample grid (separated case)."""
    r = 0.5
    gen0 = tp.DistributionSpec(kind="gaussian-mixture", dim=2, atoms=((0.0, 0.0),))
    gen1 = tp.DistributionSpec(kind="gaussian-mixture", dim=2, atoms=((10.0 * r, 0.0),))
    result = tp.convergence_experiment(
        gen0,
        gen1,
        r=r,
        sigma=0.2,
        n_grid=prof.convergence_grid,
        trials=prof.convergence_trials,
        seed=derive_seed(seed, "convergence"),
    )
    meds = [result.medians[n] for n in sorted(result.medians)]
    inversions = sum(1 for a, b in zip(meds, meds[1:]) if b > a + 1e-12)
    return [
        BoundReport.compare("convergence-median-inversions", 1.0, float(inversions)),
        BoundReport.compare("convergence-final-median", 0.05, meds[-1]),
    ]


# ---------------------------------------------------------------------------
# entropy checks
# ---------------------------------------------------------------------------


def check_reverse_epi(seed: int, prof: Profile) -> list[BoundReport]:
    # single atoms: all three entropies analytic
    r = 0.7
    d = 2
    lhs = 0.5 * d * math.log(2.0 * math.pi * math.e * 2.0 * r)
    rhs = d * math.log(2.0 * math.pi * math.e * r) + reverse_epi_constant(d, r)
    reports = [BoundReport.compare("reverse-epi-analytic", rhs, lhs)]
    g = chunk_generator(derive_seed(seed, "epi"), 0)
    worst = -math.inf
    for _ in range(20):
        r = float(g.uniform(0.2, 1.5))
        kx = int(g.integers(1, 5))
        ky = int(g.integers(1, 5))
        wx = g.random(kx) + 0.1
        wy = g.random(ky) + 0.1
        rep = ent.reverse_epi_check(
            x_atoms=g.uniform(-3, 3, (kx, 1)),
            x_weights=wx / wx.sum(),
            y_atoms=g.uniform(-3, 3, (ky, 1)),
            y_weights=wy / wy.sum(),
            r=r,
        )
        worst = max(worst, rep.measured - rep.bound_value)
    reports.append(BoundReport.compare("reverse-epi-random", 1e-6, worst))
    # widely separated atoms: the gap approaches -(d/2) ln(pi e r)
    r = 0.3
    sep = 40.0 * math.sqrt(r)
    gm_x = ent.GaussianMixture(atoms=[[0.0], [sep]], weights=[0.5, 0.5], variance=r)
    gm_y = ent.GaussianMixture(atoms=[[0.0], [3.0 * sep]], weights=[0.5, 0.5], variance=r)
    h_x = ent.entropy_quadrature(gm_x).value
    h_y = ent.entropy_quadrature(gm_y).value
    h_sum = ent.entropy_quadrature(ent.convolve_mixtures(gm_x, gm_y)).value
    gap = h_sum - h_x - h_y
    target = -0.5 * math.log(math.pi * math.e * r)
    reports.append(BoundReport.compare("reverse-epi-far-gap", 0.02, abs(gap - target)))
    return reports


def check_fisher_de_bruijn(seed: int, prof: Profile) -> list[BoundReport]:
    g = chunk_generator(derive_seed(seed, "fisher"), 0)
    worst = -math.inf
    for k in range(20):
        dim = int(g.integers(1, 4))
        n_atoms = int(g.integers(1, 5))
        w = g.random(n_atoms) + 0.1
        gm = ent.GaussianMixture(
            atoms=g.uniform(-2, 2, (n_atoms, dim)),
            weights=w / w.sum(),
            variance=float(g.uniform(0.3, 1.5)),
        )
        est = ent.fisher_information_mc(
            gm, n=prof.entropy_samples, seed=derive_seed(seed, "fisher", k)
        )
        worst = max(worst, est.value - 4.0 * est.std_error - gm.dim / gm.variance)
    reports = [BoundReport.compare("fisher-bound-sweep", 0.0, worst)]
    worst_db = -math.inf
    for k in range(10):
        n_atoms = int(g.integers(1, 4))
        w = g.random(n_atoms) + 0.1
        rep = ent.de_bruijn_check(
            atoms=g.uniform(-2, 2, (n_atoms, 1)),
            weights=w / w.sum(),
            t0=float(g.uniform(0.5, 1.5)),
            dt=1e-3,
            n=prof.entropy_samples,
            seed=derive_seed(seed, "de-bruijn", k),
        )
        worst_db = max(worst_db, rep.measured - rep.bound_value)
    reports.append(BoundReport.compare("de-bruijn-sweep", 0.0, worst_db))
    return reports


# ---------------------------------------------------------------------------
# suite runner
# ---------------------------------------------------------------------------

CHECKS = {
    "b-puzzle": check_b_puzzle,
    "c-puzzle": check_c_puzzle,
    "exact-vs-raster": check_exact_vs_raster,
    "volume-constrained": check_volume_constrained,
    "kneser": check_kneser,
    "inscribed-angle": check_inscribed_angle,
    "gaussian-calibration": check_gaussian_calibration,
    "gaussian-surface-bound": check_gaussian_surface_bound,
    "reverse-bm": check_reverse_bm,
    "dr-oracle": check_dr_oracle,
    "w1-domination": check_w1_domination_sweep,
    "coupling-sandwich": check_coupling_sandwich,
    "convergence": check_convergence,
    "reverse-epi": check_reverse_epi,
    "fisher-de-bruijn": check_fisher_de_bruijn,
}

SUITES = {
    "euclidean": (
        "b-puzzle",
        "c-puzzle",
        "exact-vs-raster",
        "volume-constrained",
        "kneser",
        "inscribed-angle",
    ),
    "gaussian": ("gaussian-calibration", "gaussian-surface-bound"),
    "brunn-minkowski": ("reverse-bm",),
    "robust-risk": ("dr-oracle", "w1-domination", "coupling-sandwich", "convergence"),
    "epi": ("reverse-epi", "fisher-de-bruijn"),
}
SUITES["all"] = tuple(name for suite in SUITES.values() for name in suite)


@dataclass(frozen=True)
class SuiteConfig:
    seed: int
    samples: int | None = None
    workers: int = 1
    out_dir: str | None = None
    fmt: str = "csv"


@dataclass
class RunManifest:
    suite: str
    seed: int
    samples: int | None
    workers: int
    version: str
    wall_time_s: float
    reports: list[BoundReport]

    def all_pass(self) -> bool:
        return all(r.verdict is not Verdict.FAIL for r in self.reports)


def _fmt_float(x: float | None) -> str:
    return "" if x is None else f"{x:.17g}"


def _report_rows(suite: str, reports: list[tuple[str, BoundReport]]):
    for check, rep in reports:
        yield {
            "suite": suite,
            "check": check,
            "bound_name": rep.bound_name,
            "bound_value": _fmt_float(rep.bound_value),
            "measured": _fmt_float(rep.measured),
            "std_error": _fmt_float(rep.std_error),
            "slack": _fmt_float(rep.slack),
            "verdict": rep.verdict.value,
        }


def write_reports_csv(path, suite: str, reports) -> None:
    fields = [
        "suite",
        "check",
        "bound_name",
        "bound_value",
        "measured",
        "std_error",
        "slack",
        "verdict",
    ]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in _report_rows(suite, reports):
            writer.writerow(row)


def write_reports_json(path, suite: str, reports) -> None:
    with open(path, "w") as fh:
        json.dump(list(_report_rows(suite, reports)), fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_suite(suite_name: str, config: SuiteConfig, log=None) -> RunManifest:
    """Run one suite; writes results (and a timing manifest) when out_dir set."""
    if suite_name not in SUITES:
        raise InvalidArgumentError(
            f"unknown suite {suite_name!r}; choose from {', '.join(SUITES)}"
        )
    prof = profile_from_samples(config.samples)
    started = time.monotonic()
    collected: list[tuple[str, BoundReport]] = []
    for check_name in SUITES[suite_name]:
        for rep in CHECKS[check_name](config.seed, prof):
            collected.append((check_name, rep))
            if log is not None:
                status = rep.verdict.value.upper()
                log(f"[{status}] {check_name}/{rep.bound_name}: "
                    f"measured={_fmt_float(rep.measured)} bound={_fmt_float(rep.bound_value)}")
    wall = time.monotonic() - started
    manifest = RunManifest(
        suite=suite_name,
        seed=config.seed,
        samples=config.samples,
        workers=config.workers,
        version=_VERSION,
        wall_time_s=wall,
        reports=[rep for _, rep in collected],
    )
    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if config.fmt == "json":
            write_reports_json(out / "results.json", suite_name, collected)
        else:
            write_reports_csv(out / "results.csv", suite_name, collected)
        manifest_payload = {
            "suite": suite_name,
            "seed": config.seed,
            "samples": config.samples,
            "workers": config.workers,
            "version": _VERSION,
            "wall_time_s": wall,
            "n_reports": len(collected),
            "all_pass": manifest.all_pass(),
        }
        (out / "manifest.json").write_text(
            json.dumps(manifest_payload, indent=2, sort_keys=True) + "\n"
        )
    return manifest
