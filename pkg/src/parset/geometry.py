"""Core types: point sets, norm bodies, parallel-set membership, packings.

All types are immutable after construction; operations are pure functions.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError


class NormKind(Enum):
    L2 = "l2"
    LINF = "linf"

    @classmethod
    def parse(cls, text: str) -> "NormKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise InvalidArgumentError(f"unknown norm {text!r}, expected 'l2' or 'linf'")


@dataclass(frozen=True)
class PointSet:
    """Nonempty finite set of points in R^d, stored as an (n, d) array."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InvalidArgumentError("points must form a nonempty (n, d) array")
        if not np.isfinite(pts).all():
            raise InvalidArgumentError("coordinates must be finite")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class ParallelSetSpec:
    """The dilation of a finite base set by radius r under the chosen norm body."""

    base: PointSet
    norm: NormKind
    radius: float

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise InvalidArgumentError("radius must be a positive finite real")


@dataclass(frozen=True)
class DimensionConstants:
    dim: int
    omega_d: float      # unit-ball volume
    big_omega_d: float  # unit-sphere surface area


@dataclass(frozen=True)
class PackingResult:
    representatives: PointSet
    count: int
    radius: float
    norm: NormKind


def dimension_constants(d: int) -> DimensionConstants:
    """Unit L2-ball volume pi^(d/2)/Gamma(1+d/2) and sphere area d * volume."""
    if d < 1:
        raise InvalidArgumentError("dimension must be a positive integer")
    omega = math.exp(0.5 * d * math.log(math.pi) - math.lgamma(1.0 + 0.5 * d))
    return DimensionConstants(dim=d, omega_d=omega, big_omega_d=d * omega)


def _as_vector(x, dim: int) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.shape != (dim,):
        raise InvalidArgumentError(f"expected a vector of dimension {dim}, got shape {v.shape}")
    return v


def norm_distances(diffs: np.ndarray, norm: NormKind) -> np.ndarray:
    if norm is NormKind.L2:
        return np.sqrt((diffs * diffs).sum(axis=-1))
    return np.abs(diffs).max(axis=-1)


def distance_to_set(x, a: PointSet, norm: NormKind) -> float:
    """Distance from x to the nearest member of a under the chosen norm."""
    v = _as_vector(x, a.dim)
    return float(norm_distances(a.points - v, norm).min())


def contains(spec: ParallelSetSpec, x) -> bool:
    """Closed-set membership: boundary points count as inside."""
    return distance_to_set(x, spec.base, spec.norm) <= spec.radius


def greedy_packing(a: PointSet, r: float, norm: NormKind) -> PackingResult:
    """Maximal packing by first-fit scan in input order.

    A point is accepted iff its distance to every already accepted
    representative strictly exceeds r; every input point is then within r of
    some representative.  Any maximal packing witnesses the volume bounds, so
    no canonicalization or optimality is attempted.
    """
    if not (r > 0.0):
        raise InvalidArgumentError("packing radius must be positive")
    accepted: list[np.ndarray] = []
    for p in a.points:
        if not accepted:
            accepted.append(p)
            continue
        d = norm_distances(np.asarray(accepted) - p, norm).min()
        if d > r:
            accepted.append(p)
    reps = PointSet(np.asarray(accepted))
    return PackingResult(representatives=reps, count=len(reps), radius=r, norm=norm)


# ---------------------------------------------------------------------------
# serialization: CSV (header x0..x{d-1}) and JSON array-of-arrays
# ---------------------------------------------------------------------------


def save_points_csv(ps: PointSet, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i}" for i in range(ps.dim)])
        for row in ps.points:
            writer.writerow([f"{v:.17g}" for v in row])


def load_points_csv(path) -> PointSet:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidArgumentError(f"{path}: empty point file")
        dim = len(header)
        expected = [f"x{i}" for i in range(dim)]
        if [h.strip() for h in header] != expected:
            raise InvalidArgumentError(
                f"{path}: header must be {','.join(expected)}, got {','.join(header)}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != dim:
                raise InvalidArgumentError(f"{path}:{lineno}: ragged row of width {len(row)}")
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise InvalidArgumentError(f"{path}:{lineno}: non-numeric coordinate")
    if not rows:
        raise InvalidArgumentError(f"{path}: no points")
    return PointSet(np.asarray(rows))


def save_points_json(ps: PointSet, path) -> None:
    with open(path, "w") as fh:
        json.dump([list(map(float, row)) for row in ps.points], fh)
        fh.write("\n")


def load_points_json(path) -> PointSet:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, list) or not data:
        raise InvalidArgumentError(f"{path}: expected a nonempty JSON array of arrays")
    widths = {len(row) if isinstance(row, list) else -1 for row in data}
    if len(widths) != 1 or -1 in widths:
        raise InvalidArgumentError(f"{path}: ragged or non-array rows")
    return PointSet(np.asarray(data, dtype=np.float64))


def load_points(path) -> PointSet:
    p = Path(path)
    if p.suffix.lower() == ".json":
        return load_points_json(p)
    return load_points_csv(p)


def group_rows(points: np.ndarray, tol: float = 1e-12):
    """Group nearly identical rows; returns (unique rows, group index per row)."""
    n = points.shape[0]
    order = np.lexsort(points.T[::-1])
    group = np.empty(n, dtype=np.int64)
    uniques: list[np.ndarray] = []
    for idx in order:
        if uniques and np.abs(points[idx] - uniques[-1]).max() <= tol:
            group[idx] = len(uniques) - 1
        else:
            uniques.append(points[idx])
            group[idx] = len(uniques) - 1
    return np.asarray(uniques), group
