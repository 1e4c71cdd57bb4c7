"""Closed-form constants and bound comparisons.

Every formula is evaluated in log space with one final exponentiation; a
result past double range raises RangeOverflowError instead of returning inf.
All logarithms are natural, entropies are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import InvalidArgumentError, RangeOverflowError
from .geometry import NormKind, dimension_constants

_LOG_DBL_MAX = math.log(1.7976931348623157e308)


class Verdict(Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_COMPARED = "not-compared"


@dataclass(frozen=True)
class BoundReport:
    """A bound's value next to a measured quantity, with a 4-sigma verdict.

    fail only when measured - 4 * std_error > bound_value.
    """

    bound_name: str
    bound_value: float
    measured: float | None = None
    std_error: float = 0.0
    slack: float | None = field(default=None)
    verdict: Verdict = field(default=Verdict.NOT_COMPARED)

    @classmethod
    def compare(
        cls, name: str, bound_value: float, measured: float, std_error: float = 0.0
    ) -> "BoundReport":
        verdict = Verdict.FAIL if measured - 4.0 * std_error > bound_value else Verdict.PASS
        return cls(
            bound_name=name,
            bound_value=bound_value,
            measured=measured,
            std_error=std_error,
            slack=bound_value - measured,
            verdict=verdict,
        )

    @classmethod
    def uncompared(cls, name: str, bound_value: float) -> "BoundReport":
        return cls(bound_name=name, bound_value=bound_value)


@dataclass(frozen=True)
class GaussianConstantBreakdown:
    dim: int
    coefficients: tuple[float, ...]
    constant_C: float
    lower_sandwich: float
    upper_sandwich: float
    norm: NormKind


def _exp_checked(log_value: float, what: str) -> float:
    if log_value > _LOG_DBL_MAX:
        raise RangeOverflowError(f"{what} exceeds double range (log value {log_value:.3f})")
    return math.exp(log_value)


def _check_dim(d: int) -> None:
    if d < 1:
        raise InvalidArgumentError("dimension must be >= 1")


def _check_radius(r: float) -> None:
    if not (r > 0.0 and math.isfinite(r)):
        raise InvalidArgumentError("radius must be a positive finite real")


def bound_union_in_ball(d: int, r: float) -> float:
    """2^(d-1) * Omega_d * r^(d-1): surface cap for unions centred inside a ball."""
    _check_dim(d)
    _check_radius(r)
    dc = dimension_constants(d)
    return _exp_checked(
        (d - 1) * math.log(2.0) + math.log(dc.big_omega_d) + (d - 1) * math.log(r),
        "bound_union_in_ball",
    )


def bound_union_in_cube(d: int, r: float) -> float:
    """2d * (4r)^(d-1): surface cap for cube unions centred inside a cube."""
    _check_dim(d)
    _check_radius(r)
    return _exp_checked(
        math.log(2.0 * d) + (d - 1) * math.log(4.0 * r), "bound_union_in_cube"
    )


def bound_volume_constrained(d: int, r: float, volume: float) -> float:
    """(V/r) * 2^(2d-1) * d: surface cap given a volume budget."""
    _check_dim(d)
    _check_radius(r)
    if volume < 0.0:
        raise InvalidArgumentError("volume must be nonnegative")
    if volume == 0.0:
        return 0.0
    return _exp_checked(
        math.log(volume) - math.log(r) + (2 * d - 1) * math.log(2.0) + math.log(d),
        "bound_volume_constrained",
    )


def bound_shell_volume(d: int, r: float, delta: float, volume: float) -> float:
    """(V/r^d) * 2^(2d-1) * ((r+delta)^d - r^d): shell volume cap."""
    _check_dim(d)
    _check_radius(r)
    if delta <= 0.0:
        raise InvalidArgumentError("delta must be positive")
    if volume < 0.0:
        raise InvalidArgumentError("volume must be nonnegative")
    if volume == 0.0:
        return 0.0
    # (r+delta)^d - r^d = r^d * expm1(d * log1p(delta/r)), stable for tiny delta
    growth = math.expm1(d * math.log1p(delta / r))
    return _exp_checked(
        math.log(volume) + (2 * d - 1) * math.log(2.0) + math.log(growth),
        "bound_shell_volume",
    )


def bound_bounded_support(d: int, big_r: float, r: float) -> tuple[float, float]:
    """Surface caps for a base set inside B(R): (ball variant, cube variant)."""
    _check_dim(d)
    _check_radius(r)
    if big_r < 0.0:
        raise InvalidArgumentError("enclosing radius must be nonnegative")
    dc = dimension_constants(d)
    ball = _exp_checked(
        d * (math.log(big_r + r / 2.0) - math.log(r / 2.0))
        + (d - 1) * math.log(2.0)
        + math.log(d)
        + math.log(dc.omega_d)
        + (d - 1) * math.log(r),
        "bound_bounded_support (ball)",
    )
    cube = _exp_checked(
        math.log(dc.omega_d)
        + d * math.log(big_r + r * math.sqrt(d) / 2.0)
        + math.log(d)
        - math.log(r)
        + (2 * d - 1) * math.log(2.0),
        "bound_bounded_support (cube)",
    )
    return ball, cube


def _log_sum_exp(values) -> float:
    m = max(values)
    return m + math.log(sum(math.exp(v - m) for v in values))


def gaussian_constant(d: int, norm: NormKind = NormKind.L2) -> GaussianConstantBreakdown:
    """Dimension constant for the Gaussian surface-area cap, with its sandwich.

    C = (2*pi)^(-d/2) * 2^(2d-1) * d * omega_d * sum_i C_i, where
    C_i = binom(d,i) * 2^((d-i)/2) * Gamma(1+(d-i)/2) * (3/2)^i, and the cube
    variant carries an extra (sqrt d)^i per coefficient.  Sandwich:
    2^(2d-1)*d <= C <= 2^(2d-1)*d^2*3^d, the cube upper end gaining d^(d/2).
    """
    _check_dim(d)
    log_coeffs = []
    for i in range(d + 1):
        v = (
            math.lgamma(d + 1) - math.lgamma(i + 1) - math.lgamma(d - i + 1)
            + 0.5 * (d - i) * math.log(2.0)
            + math.lgamma(1.0 + 0.5 * (d - i))
            + i * math.log(1.5)
        )
        if norm is NormKind.LINF:
            v += 0.5 * i * math.log(d)
        log_coeffs.append(v)
    dc = dimension_constants(d)
    log_prefactor = (
        -0.5 * d * math.log(2.0 * math.pi)
        + (2 * d - 1) * math.log(2.0)
        + math.log(dc.big_omega_d)
    )
    log_c = log_prefactor + _log_sum_exp(log_coeffs)
    constant = _exp_checked(log_c, "gaussian_constant")
    coeffs = tuple(_exp_checked(v, "gaussian_constant coefficient") for v in log_coeffs)
    log_lower = (2 * d - 1) * math.log(2.0) + math.log(d)
    log_upper = (2 * d - 1) * math.log(2.0) + 2.0 * math.log(d) + d * math.log(3.0)
    if norm is NormKind.LINF:
        log_upper += 0.5 * d * math.log(d)
    return GaussianConstantBreakdown(
        dim=d,
        coefficients=coeffs,
        constant_C=constant,
        lower_sandwich=_exp_checked(log_lower, "gaussian_constant sandwich"),
        upper_sandwich=_exp_checked(log_upper, "gaussian_constant sandwich"),
        norm=norm,
    )


def gaussian_surface_bound(
    d: int, r: float, sigma: float = 1.0, norm: NormKind = NormKind.L2
) -> float:
    """max(C/sigma, C/r) with C = gaussian_constant(d, norm)."""
    _check_radius(r)
    if not (sigma > 0.0):
        raise InvalidArgumentError("sigma must be positive")
    c = gaussian_constant(d, norm).constant_C
    return max(c / sigma, c / r)


def reverse_bm_bound(d: int, r: float) -> float:
    """2^(4d) / (omega_d * r^d): Minkowski-sum volume inflation factor."""
    _check_dim(d)
    _check_radius(r)
    dc = dimension_constants(d)
    return _exp_checked(
        4 * d * math.log(2.0) - math.log(dc.omega_d) - d * math.log(r),
        "reverse_bm_bound",
    )


def reverse_epi_constant(d: int, r: float) -> float:
    """-(d/2) * ln(pi * r): additive entropy slack for smoothed sums."""
    _check_dim(d)
    _check_radius(r)
    return -0.5 * d * math.log(math.pi * r)


def sample_complexity_n0(
    d: int,
    sigma: float,
    r: float,
    eps: float,
    delta: float,
    c0: float = 1.0,
    c1: float = 1.0,
) -> int:
    """Sample count for the plug-in transport estimator's deviation guarantee.

    eta = eps / (2 * max(C/sigma, C/(2r/3))) must land in (0, r/3); the count
    is ceil((log(2/delta) + log c0) / (c1 * (eta*eps/2)^d)).  c0 and c1 are
    tail constants not pinned by theory; defaults of 1.0 are placeholders.
    """
    _check_dim(d)
    _check_radius(r)
    if not (eps > 0.0):
        raise InvalidArgumentError("eps must be positive")
    if not (0.0 < delta < 1.0):
        raise InvalidArgumentError("delta must lie in (0, 1)")
    if c0 < 1.0:
        raise InvalidArgumentError("c0 must be >= 1")
    if not (c1 > 0.0):
        raise InvalidArgumentError("c1 must be positive")
    if not (sigma > 0.0):
        raise InvalidArgumentError("sigma must be positive")
    c = gaussian_constant(d, NormKind.L2).constant_C
    c_sr = max(c / sigma, c / (2.0 * r / 3.0))
    eta = eps / (2.0 * c_sr)
    if not (0.0 < eta < r / 3.0):
        raise InvalidArgumentError(
            f"eta = {eta:.6g} falls outside (0, r/3); eps too large for this r and sigma"
        )
    log_n0 = (
        math.log(math.log(2.0 / delta) + math.log(c0))
        - math.log(c1)
        - d * math.log(eta * eps / 2.0)
    )
    value = _exp_checked(log_n0, "sample_complexity_n0")
    if value >= 2**63:
        raise RangeOverflowError("sample_complexity_n0 exceeds a 64-bit integer")
    return math.ceil(value)


BOUND_CATALOG = {
    "union-in-ball": (bound_union_in_ball, ("d", "r")),
    "union-in-cube": (bound_union_in_cube, ("d", "r")),
    "volume-constrained": (bound_volume_constrained, ("d", "r", "volume")),
    "shell-volume": (bound_shell_volume, ("d", "r", "delta", "volume")),
    "bounded-support": (bound_bounded_support, ("d", "big_r", "r")),
    "gaussian-surface": (gaussian_surface_bound, ("d", "r", "sigma", "norm")),
    "reverse-bm": (reverse_bm_bound, ("d", "r")),
    "reverse-epi-constant": (reverse_epi_constant, ("d", "r")),
    "sample-complexity-n0": (
        sample_complexity_n0,
        ("d", "sigma", "r", "eps", "delta", "c0", "c1"),
    ),
}
