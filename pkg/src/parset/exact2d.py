"""Exact perimeter and area of unions of congruent disks and axis-aligned
squares in the plane, a star-shapedness checker, and a grid oracle.

Disk unions: on each circle, every other disk covers an angular interval
(empty when the centres are 2r or more apart); what survives after removing
all covered intervals is the exposed part of the boundary.  Because all radii
are equal, a circle can only be swallowed whole by a coincident twin, so
deduplicating centres first removes the lone degenerate case.  Tangencies
cover a single angle, which has measure zero and is dropped.

Areas come from the divergence theorem.  Each exposed arc, parameterised
counterclockwise about its own centre, keeps the union locally on its left,
so summing (1/2) * integral(x dy - y dx) over the exposed arcs yields the
enclosed area with holes subtracted automatically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidArgumentError
from .geometry import NormKind, PointSet

_TWO_PI = 2.0 * math.pi
_EPS = 1e-12


@dataclass(frozen=True)
class ArcDecomposition:
    """Exposed arcs (center_index, theta_start, theta_end) of a disk union.

    Angles satisfy theta_end > theta_start and live in [0, 4*pi) so that arcs
    crossing angle zero stay contiguous.  Indices refer to ``centers`` (input
    centres after coincident-point deduplication, original order kept).
    """

    arcs: tuple[tuple[int, float, float], ...]
    radius: float
    centers: np.ndarray

    def perimeter(self) -> float:
        return self.radius * sum(t1 - t0 for _, t0, t1 in self.arcs)

    def arc_length_of(self, center_index: int) -> float:
        return self.radius * sum(
            t1 - t0 for i, t0, t1 in self.arcs if i == center_index
        )

    def area(self) -> float:
        r = self.radius
        total = 0.0
        for i, t0, t1 in self.arcs:
            cx, cy = self.centers[i]
            total += (
                r * r * (t1 - t0)
                + cx * r * (math.sin(t1) - math.sin(t0))
                + cy * r * (math.cos(t0) - math.cos(t1))
            )
        return 0.5 * total


@dataclass(frozen=True)
class BoundarySegment:
    orientation: str  # "horizontal" | "vertical"
    fixed_coord: float
    span_start: float
    span_end: float
    outward_sign: int

    def length(self) -> float:
        return self.span_end - self.span_start


@dataclass(frozen=True)
class SegmentDecomposition:
    segments: tuple[BoundarySegment, ...]

    def perimeter(self) -> float:
        return sum(s.length() for s in self.segments)


def _require_planar(centers: PointSet) -> np.ndarray:
    if centers.dim != 2:
        raise InvalidArgumentError("exact decompositions require dim == 2")
    return centers.points


def _require_radius(r: float) -> float:
    if not (r > 0.0 and math.isfinite(r)):
        raise InvalidArgumentError("radius must be a positive finite real")
    return float(r)


def _dedup_preserve_order(points: np.ndarray, tol: float = _EPS) -> np.ndarray:
    kept: list[np.ndarray] = []
    for p in points:
        if not any(np.abs(p - q).max() <= tol for q in kept):
            kept.append(p)
    return np.asarray(kept)


def _exposed_angular_intervals(covered: list[tuple[float, float]]):
    """Complement of a union of angular intervals on the circle.

    Output intervals start in [0, 2*pi) and may extend past 2*pi when they
    wrap through angle zero.
    """
    if not covered:
        return [(0.0, _TWO_PI)]
    parts: list[tuple[float, float]] = []
    for lo, hi in covered:
        width = hi - lo
        lo = lo % _TWO_PI
        hi = lo + width
        if hi <= _TWO_PI:
            parts.append((lo, hi))
        else:
            parts.append((lo, _TWO_PI))
            parts.append((0.0, hi - _TWO_PI))
    parts.sort()
    merged = [list(parts[0])]
    for lo, hi in parts[1:]:
        if lo <= merged[-1][1] + _EPS:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    exposed = []
    for k in range(1, len(merged)):
        if merged[k][0] - merged[k - 1][1] > _EPS:
            exposed.append((merged[k - 1][1], merged[k][0]))
    wrap = merged[0][0] + _TWO_PI - merged[-1][1]
    if wrap > _EPS:
        exposed.append((merged[-1][1], merged[0][0] + _TWO_PI))
    return exposed


def disk_union_boundary(centers: PointSet, r: float) -> ArcDecomposition:
    pts = _dedup_preserve_order(_require_planar(centers))
    r = _require_radius(r)
    n = len(pts)
    arcs: list[tuple[int, float, float]] = []
    for i in range(n):
        diffs = pts - pts[i]
        dists = np.hypot(diffs[:, 0], diffs[:, 1])
        covered = []
        for j in range(n):
            if j == i:
                continue
            dij = dists[j]
            if dij >= 2.0 * r:
                continue
            # points of circle i strictly inside disk j: |theta - phi| < alpha
            phi = math.atan2(diffs[j, 1], diffs[j, 0])
            alpha = math.acos(dij / (2.0 * r))
            if alpha > 0.0:
                covered.append((phi - alpha, phi + alpha))
        for t0, t1 in _exposed_angular_intervals(covered):
            arcs.append((i, t0, t1))
    return ArcDecomposition(arcs=tuple(arcs), radius=r, centers=pts)


def disk_union_perimeter(centers: PointSet, r: float) -> float:
    return disk_union_boundary(centers, r).perimeter()


def disk_union_area(centers: PointSet, r: float) -> float:
    return disk_union_boundary(centers, r).area()


def _subtract_open_intervals(lo: float, hi: float, holes: list[tuple[float, float]]):
    """Closed remainder pieces of [lo, hi] after removing open intervals."""
    if not holes:
        return [(lo, hi)]
    holes = sorted((max(a, lo), min(b, hi)) for a, b in holes if b > lo and a < hi)
    pieces = []
    cursor = lo
    for a, b in holes:
        if a - cursor > _EPS:
            pieces.append((cursor, a))
        cursor = max(cursor, b)
    if hi - cursor > _EPS:
        pieces.append((cursor, hi))
    return pieces


def square_union_boundary(centers: PointSet, r: float) -> SegmentDecomposition:
    """Exposed boundary of a union of squares [c - r, c + r]^2.

    A point of square i's face with outward normal s is exposed iff points
    just outside it are outside every other square.  Pieces where two faces
    with the same outward normal coincide are assigned to the lower index so
    segment interiors stay pairwise disjoint.
    """
    pts = _dedup_preserve_order(_require_planar(centers))
    r = _require_radius(r)
    n = len(pts)
    # (normal axis, sign): top/bottom are horizontal faces, left/right vertical
    faces = ((1, +1, "horizontal"), (1, -1, "horizontal"), (0, +1, "vertical"), (0, -1, "vertical"))
    segments: list[BoundarySegment] = []
    for i in range(n):
        for axis, sign, orientation in faces:
            tang = 1 - axis
            fixed = pts[i, axis] + sign * r
            span = (pts[i, tang] - r, pts[i, tang] + r)
            holes = []
            for j in range(n):
                if j == i:
                    continue
                cn = pts[j, axis]
                covers = cn - r - _EPS < fixed < cn + r + _EPS and not (
                    abs(fixed - (cn + sign * r)) <= _EPS
                )
                coplanar_dup = abs(fixed - (cn + sign * r)) <= _EPS and j < i
                if covers or coplanar_dup:
                    holes.append((pts[j, tang] - r, pts[j, tang] + r))
            for a, b in _subtract_open_intervals(span[0], span[1], holes):
                segments.append(
                    BoundarySegment(
                        orientation=orientation,
                        fixed_coord=float(fixed),
                        span_start=float(a),
                        span_end=float(b),
                        outward_sign=sign,
                    )
                )
    return SegmentDecomposition(segments=tuple(segments))


def square_union_perimeter(centers: PointSet, r: float) -> float:
    return square_union_boundary(centers, r).perimeter()


def square_union_area(centers: PointSet, r: float) -> float:
    """Exact area of a union of congruent axis-aligned squares (slab sweep)."""
    pts = _dedup_preserve_order(_require_planar(centers))
    r = _require_radius(r)
    xs = np.unique(np.concatenate([pts[:, 0] - r, pts[:, 0] + r]))
    total = 0.0
    for x0, x1 in zip(xs[:-1], xs[1:]):
        mid = 0.5 * (x0 + x1)
        active = np.abs(pts[:, 0] - mid) < r
        if not active.any():
            continue
        ys = np.stack([pts[active, 1] - r, pts[active, 1] + r], axis=1)
        ys = ys[np.argsort(ys[:, 0])]
        covered = 0.0
        cur_lo, cur_hi = ys[0]
        for lo, hi in ys[1:]:
            if lo <= cur_hi:
                cur_hi = max(cur_hi, hi)
            else:
                covered += cur_hi - cur_lo
                cur_lo, cur_hi = lo, hi
        covered += cur_hi - cur_lo
        total += covered * (x1 - x0)
    return total


# ---------------------------------------------------------------------------
# star-shapedness by ray casting
# ---------------------------------------------------------------------------


def _ray_membership_prefix(b: np.ndarray, q: np.ndarray) -> bool:
    """True iff the union of [t-, t+] per disk meets t >= 0 in one prefix.

    b holds (c - x0) . u per centre, q holds |c - x0|^2 - r^2; the membership
    set along the ray is the union of the real root intervals.
    """
    disc = b * b - q
    ok = disc >= 0.0
    if not ok.any():
        return False
    root = np.sqrt(disc[ok])
    t_lo = b[ok] - root
    t_hi = b[ok] + root
    keep = t_hi >= 0.0
    if not keep.any():
        return False
    t_lo = np.maximum(t_lo[keep], 0.0)
    t_hi = t_hi[keep]
    order = np.argsort(t_lo)
    t_lo = t_lo[order]
    t_hi = t_hi[order]
    if t_lo[0] > 1e-9:
        return False
    reach = t_hi[0]
    for lo, hi in zip(t_lo[1:], t_hi[1:]):
        if lo > reach + 1e-9:
            return False
        reach = max(reach, hi)
    return True


def star_shaped_check(
    centers: PointSet, r: float, x0, num_rays: int = 4096
) -> tuple[bool, float | None]:
    """Cast rays from x0; membership along each ray must be a single prefix.

    Returns (True, None) or (False, first violating angle).  Requires every
    centre within L2 distance r of x0.
    """
    pts = _require_planar(centers)
    r = _require_radius(r)
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (2,):
        raise InvalidArgumentError("x0 must be a 2-vector")
    if num_rays < 1:
        raise InvalidArgumentError("num_rays must be >= 1")
    dv = pts - x0
    dist2 = (dv * dv).sum(axis=1)
    if (np.sqrt(dist2) > r + 1e-9).any():
        raise InvalidArgumentError("every centre must lie within distance r of x0")
    q = dist2 - r * r
    angles = _TWO_PI * np.arange(num_rays) / num_rays
    dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    b_all = dirs @ dv.T  # (num_rays, n)
    # fast path: every interval already contains t = 0
    starts = b_all - np.sqrt(np.maximum(b_all * b_all - q[None, :], 0.0))
    suspect = np.nonzero(~(starts <= 1e-9).all(axis=1))[0]
    for k in suspect:
        if not _ray_membership_prefix(b_all[k], q):
            return False, float(angles[k])
    return True, None


# ---------------------------------------------------------------------------
# grid oracle (validation only): marching squares on the distance field
# ---------------------------------------------------------------------------

_MS_POLYS = {
    1: ((("A", "ab", "da"),), (("ab", "da"),)),
    2: ((("ab", "B", "bc"),), (("ab", "bc"),)),
    3: ((("A", "B", "bc", "da"),), (("bc", "da"),)),
    4: ((("bc", "C", "cd"),), (("bc", "cd"),)),
    6: ((("ab", "B", "C", "cd"),), (("ab", "cd"),)),
    7: ((("A", "B", "C", "cd", "da"),), (("cd", "da"),)),
    8: ((("D", "da", "cd"),), (("da", "cd"),)),
    9: ((("A", "ab", "cd", "D"),), (("ab", "cd"),)),
    11: ((("A", "B", "bc", "cd", "D"),), (("bc", "cd"),)),
    12: ((("da", "bc", "C", "D"),), (("da", "bc"),)),
    13: ((("A", "ab", "bc", "C", "D"),), (("ab", "bc"),)),
    14: ((("ab", "B", "C", "D", "da"),), (("ab", "da"),)),
}
_MS_AMBIGUOUS = {
    5: (
        ((("A", "ab", "bc", "C", "cd", "da"),), (("ab", "bc"), ("cd", "da"))),
        ((("A", "ab", "da"), ("bc", "C", "cd")), (("ab", "da"), ("bc", "cd"))),
    ),
    10: (
        ((("ab", "B", "bc", "cd", "D", "da"),), (("bc", "cd"), ("da", "ab"))),
        ((("ab", "B", "bc"), ("D", "da", "cd")), (("ab", "bc"), ("da", "cd"))),
    ),
}


def _safe_ratio(num, den):
    out = np.where(np.abs(den) > 0.0, num / np.where(den == 0.0, 1.0, den), 0.5)
    return np.clip(out, 0.0, 1.0)


def _marching_cells(a, b, c, d, case, hx, hy):
    """Area (unit-cell units) and contour length (scaled) of mixed cells."""
    zeros = np.zeros_like(a)
    ones = np.ones_like(a)
    coords = {
        "A": (zeros, zeros),
        "B": (ones, zeros),
        "C": (ones, ones),
        "D": (zeros, ones),
        "ab": (_safe_ratio(a, a - b), zeros),
        "bc": (ones, _safe_ratio(b, b - c)),
        "cd": (1.0 - _safe_ratio(c, c - d), ones),
        "da": (zeros, 1.0 - _safe_ratio(d, d - a)),
    }

    def poly_area(names, mask):
        acc = np.zeros(mask.sum())
        xs = [coords[nm][0][mask] for nm in names]
        ys = [coords[nm][1][mask] for nm in names]
        for k in range(len(names)):
            k2 = (k + 1) % len(names)
            acc += xs[k] * ys[k2] - xs[k2] * ys[k]
        return np.abs(acc) * 0.5

    def seg_length(pair, mask):
        (x1, y1), (x2, y2) = coords[pair[0]], coords[pair[1]]
        dx = (x2[mask] - x1[mask]) * hx
        dy = (y2[mask] - y1[mask]) * hy
        return np.sqrt(dx * dx + dy * dy)

    area = 0.0
    length = 0.0
    center_inside = (a + b + c + d) <= 0.0
    for case_id in range(1, 15):
        base_mask = case == case_id
        if not base_mask.any():
            continue
        if case_id in _MS_AMBIGUOUS:
            variants = (
                (base_mask & center_inside, _MS_AMBIGUOUS[case_id][0]),
                (base_mask & ~center_inside, _MS_AMBIGUOUS[case_id][1]),
            )
        else:
            variants = ((base_mask, _MS_POLYS[case_id]),)
        for mask, (polys, segs) in variants:
            if not mask.any():
                continue
            for names in polys:
                area += poly_area(names, mask).sum()
            for pair in segs:
                length += seg_length(pair, mask).sum()
    return area, length


def rasterized_measures(
    centers: PointSet, r: float, norm: NormKind = NormKind.L2, grid: int = 4096
) -> tuple[float, float]:
    """(area, perimeter) of the union read off a grid of the distance field.

    Validation oracle only.  The field d(x, centres) - r is sampled on a
    grid x grid lattice over the tight bounding box plus a 2.5-pixel guard
    ring (so extreme boundary points never sit exactly on a grid line), then
    area and contour length come from linear-interpolation marching squares.
    """
    pts = _require_planar(centers)
    r = _require_radius(r)
    lo = pts.min(axis=0) - r
    hi = pts.max(axis=0) + r
    pad = 2.5 * (hi - lo + 1e-9) / grid
    lo = lo - pad
    hi = hi + pad
    xs = np.linspace(lo[0], hi[0], grid)
    ys = np.linspace(lo[1], hi[1], grid)
    hx = xs[1] - xs[0]
    hy = ys[1] - ys[0]
    field = np.empty((grid, grid), dtype=np.float64)
    block = max(1, (1 << 22) // grid)
    linf = norm is NormKind.LINF
    for s in range(0, grid, block):
        yy = ys[s : s + block]
        gx, gy = np.meshgrid(xs, yy, indexing="xy")
        samples = np.column_stack([gx.ravel(), gy.ravel()])
        field[s : s + block, :] = (
            _kernels.min_dist(samples, pts, linf).reshape(len(yy), grid) - r
        )
    a = field[:-1, :-1]
    b = field[:-1, 1:]
    c = field[1:, 1:]
    d = field[1:, :-1]
    case = (
        (a <= 0.0).astype(np.int8)
        + 2 * (b <= 0.0).astype(np.int8)
        + 4 * (c <= 0.0).astype(np.int8)
        + 8 * (d <= 0.0).astype(np.int8)
    )
    full_cells = int((case == 15).sum())
    mixed = (case > 0) & (case < 15)
    idx = np.nonzero(mixed)
    unit_area, length = _marching_cells(
        a[idx], b[idx], c[idx], d[idx], case[idx], hx, hy
    )
    area = (full_cells + unit_area) * hx * hy
    return float(area), float(length)
