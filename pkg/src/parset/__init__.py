"""parset: measures of r-parallel sets, reverse isoperimetric bound checks,
and empirical robust-risk estimation."""

from ._kernels import backend_name
from .bounds import (
    BoundReport,
    GaussianConstantBreakdown,
    Verdict,
    bound_bounded_support,
    bound_shell_volume,
    bound_union_in_ball,
    bound_union_in_cube,
    bound_volume_constrained,
    gaussian_constant,
    gaussian_surface_bound,
    reverse_bm_bound,
    reverse_epi_constant,
    sample_complexity_n0,
)
from .entropy import (
    EntropyEstimate,
    EntropyMethod,
    GaussianMixture,
    convolve_mixtures,
    de_bruijn_check,
    entropy_mc,
    entropy_quadrature,
    fisher_information_mc,
    mixture_density,
    pointwise_lemma_check,
    reverse_epi_check,
)
from .errors import InvalidArgumentError, RangeOverflowError
from .exact2d import (
    ArcDecomposition,
    BoundarySegment,
    SegmentDecomposition,
    disk_union_area,
    disk_union_boundary,
    disk_union_perimeter,
    rasterized_measures,
    square_union_area,
    square_union_boundary,
    square_union_perimeter,
    star_shaped_check,
)
from .geometry import (
    DimensionConstants,
    NormKind,
    PackingResult,
    ParallelSetSpec,
    PointSet,
    contains,
    dimension_constants,
    distance_to_set,
    greedy_packing,
    load_points,
    load_points_csv,
    load_points_json,
    save_points_csv,
    save_points_json,
)
from .mc import (
    McConfig,
    MeasureEstimate,
    MembershipPredicate,
    ball_predicate,
    full_space_predicate,
    halfspace_predicate,
    inscribed_angle_check,
    kneser_shell_check,
    mc_gaussian_measure,
    mc_gaussian_shell,
    mc_shell_lebesgue,
    mc_volume,
)
from .suite import SUITES, Profile, RunManifest, SuiteConfig, run_suite
from .transport import (
    BallUnionRegion,
    DistributionSpec,
    EmpiricalMeasure,
    HalfspaceRegion,
    TransportResult,
    check_w1_domination,
    convergence_experiment,
    coupling_sandwich_check,
    d_r_brute_force,
    d_r_uniform,
    d_r_weighted,
    decision_region_risk,
    gaussian_smooth,
    robust_risk,
    sample_distribution,
    w1_empirical,
)

__version__ = "0.1.0"
