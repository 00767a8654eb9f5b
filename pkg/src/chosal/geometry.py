"""Convex hulls of pixel sets and their rasterization.

Pixel ``(row, col)`` is represented by its center ``(col + 0.5, row + 0.5)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key

import numpy as np

TOL = 1e-9


@dataclass(frozen=True)
class HullPoly:
    """Convex polygon, vertices counter-clockwise with no collinear runs.

    A degenerate hull (fewer than three non-collinear input points) keeps
    its extreme points in ``vertices`` and the full generating point set
    in ``points``; it contains exactly those points.
    """

    vertices: np.ndarray
    degenerate: bool = False
    points: np.ndarray = field(default=None, repr=False)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> HullPoly:
    """Graham scan around the lowest (then leftmost) point."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("convex hull of an empty point set")
    uniq = np.unique(pts, axis=0)
    tuples = [tuple(p) for p in uniq.tolist()]
    if len(tuples) == 1:
        return HullPoly(uniq.copy(), True, uniq)
    pivot = min(tuples, key=lambda p: (p[1], p[0]))
    rest = [p for p in tuples if p != pivot]

    def by_angle(p, q):
        c = _cross(pivot, p, q)
        if c > 0:
            return -1
        if c < 0:
            return 1
        dp = (p[0] - pivot[0]) ** 2 + (p[1] - pivot[1]) ** 2
        dq = (q[0] - pivot[0]) ** 2 + (q[1] - pivot[1]) ** 2
        return -1 if dp < dq else (1 if dp > dq else 0)

    rest.sort(key=cmp_to_key(by_angle))
    if all(_cross(pivot, rest[0], p) == 0 for p in rest):
        # pivot and the farthest point on the common ray are the two extremes
        return HullPoly(np.array([pivot, rest[-1]]), True, uniq)

    stack = [pivot]
    for p in rest:
        while len(stack) >= 2 and _cross(stack[-2], stack[-1], p) <= 0:
            stack.pop()
        stack.append(p)
    return HullPoly(np.array(stack))


def contains_points(h: HullPoly, pts: np.ndarray) -> np.ndarray:
    """Vectorized inside-or-on-boundary test for an ``(N, 2)`` array."""
    pts = np.asarray(pts, dtype=np.float64).reshape(-1, 2)
    if h.degenerate:
        gen = h.points
        return (np.abs(pts[:, None, :] - gen[None, :, :]).max(axis=-1) == 0).any(axis=1)
    v = h.vertices
    nxt = np.roll(v, -1, axis=0)
    d = nxt - v
    cross = d[None, :, 0] * (pts[:, None, 1] - v[None, :, 1]) - d[None, :, 1] * (pts[:, None, 0] - v[None, :, 0])
    return (cross >= -TOL).all(axis=1)


def hull_contains(h: HullPoly, p) -> bool:
    return bool(contains_points(h, np.asarray(p, dtype=np.float64))[0])


def _degenerate_pixels(h: HullPoly, width: int, height: int) -> np.ndarray:
    cols = h.points[:, 0] - 0.5
    rows = h.points[:, 1] - 0.5
    ok = (cols == np.round(cols)) & (rows == np.round(rows))
    ok &= (cols >= 0) & (cols < width) & (rows >= 0) & (rows < height)
    return np.unique(rows[ok].astype(np.int64) * width + cols[ok].astype(np.int64))


def hull_spans(h: HullPoly, width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-row inclusive column interval ``[lo, hi]`` covered by the hull (``lo > hi`` = empty).

    Edge intersections give each row's interval; the columns next to both
    ends are then re-tested with the exact point predicate so the result
    agrees with :func:`contains_points` pixel for pixel.
    """
    rows = np.arange(height)
    py = rows + 0.5
    v = h.vertices
    x0, y0 = v[:, 0], v[:, 1]
    d = np.roll(v, -1, axis=0) - v
    dx, dy = d[:, 0], d[:, 1]
    rhs = dx[None, :] * (py[:, None] - y0[None, :]) + TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        bound = x0[None, :] + rhs / dy[None, :]
    lo = np.where(dy < 0, bound, -np.inf).max(axis=1)
    hi = np.where(dy > 0, bound, np.inf).min(axis=1)
    flat_ok = np.where(dy == 0, rhs >= 0, True).all(axis=1)
    lo = np.ceil(np.clip(lo, -1.0, width + 1.0) - 0.5).astype(np.int64)
    hi = np.floor(np.clip(hi, -1.0, width + 1.0) - 0.5).astype(np.int64)

    def inside(cols):
        cols = np.clip(cols, 0, width - 1)
        pts = np.column_stack([cols + 0.5, py])
        return contains_points(h, pts)

    def valid(cols):
        return (cols >= 0) & (cols < width)

    new_lo = np.full(height, width, dtype=np.int64)
    for off in (1, 0, -1):
        c = lo + off
        hit = valid(c) & inside(c)
        new_lo = np.where(hit, c, new_lo)
    new_hi = np.full(height, -1, dtype=np.int64)
    for off in (-1, 0, 1):
        c = hi + off
        hit = valid(c) & inside(c)
        new_hi = np.where(hit, c, new_hi)
    empty = ~flat_ok | (new_lo > new_hi)
    new_lo[empty] = 0
    new_hi[empty] = -1
    return new_lo, new_hi


def hull_mask(h: HullPoly, width: int, height: int) -> np.ndarray:
    """Boolean ``(height, width)`` mask of pixels whose centers lie in the hull."""
    mask = np.zeros((height, width), dtype=bool)
    if h.degenerate:
        mask.ravel()[_degenerate_pixels(h, width, height)] = True
        return mask
    lo, hi = hull_spans(h, width, height)
    cols = np.arange(width)
    mask[:] = (cols[None, :] >= lo[:, None]) & (cols[None, :] <= hi[:, None])
    return mask


def rasterize_hull(h: HullPoly, width: int, height: int) -> np.ndarray:
    """Sorted flat offsets of all pixels covered by the hull."""
    return np.flatnonzero(hull_mask(h, width, height))


def overlap_count(region_pixels, hull_pixels) -> int:
    """``|region ∩ hull|`` for two collections of flat pixel offsets."""
    return int(np.intersect1d(np.asarray(region_pixels), np.asarray(hull_pixels)).size)


def pixel_centers(offsets: np.ndarray, width: int) -> np.ndarray:
    rows, cols = np.divmod(np.asarray(offsets, dtype=np.int64), width)
    return np.column_stack([cols + 0.5, rows + 0.5])


def region_hull(offsets: np.ndarray, width: int) -> HullPoly:
    """Hull of a pixel set, computed from each row's leftmost and rightmost pixel."""
    offsets = np.asarray(offsets, dtype=np.int64)
    rows, cols = np.divmod(offsets, width)
    row_ids, inv = np.unique(rows, return_inverse=True)
    left = np.full(len(row_ids), np.iinfo(np.int64).max)
    right = np.full(len(row_ids), -1)
    np.minimum.at(left, inv, cols)
    np.maximum.at(right, inv, cols)
    extremes = np.concatenate([np.column_stack([left, row_ids]), np.column_stack([right, row_ids])]) + 0.5
    hull = convex_hull(extremes)
    if hull.degenerate:
        return HullPoly(hull.vertices, True, pixel_centers(offsets, width))
    return hull
