import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chosal.geometry import (
    contains_points,
    convex_hull,
    hull_contains,
    hull_mask,
    overlap_count,
    rasterize_hull,
    region_hull,
)
from oracles import extreme_points


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _assert_strictly_convex_ccw(v):
    n = len(v)
    for i in range(n):
        assert _cross(v[i], v[(i + 1) % n], v[(i + 2) % n]) > 0


def test_triangle_ccw():
    h = convex_hull([(0, 0), (0, 4), (3, 0)])
    assert not h.degenerate
    assert {tuple(p) for p in h.vertices} == {(0, 0), (0, 4), (3, 0)}
    _assert_strictly_convex_ccw(h.vertices)


def test_square_with_center():
    h = convex_hull([(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)])
    assert {tuple(p) for p in h.vertices} == {(0, 0), (1, 0), (1, 1), (0, 1)}


def test_pivot_is_lowest_then_leftmost():
    h = convex_hull([(5, 2), (1, 1), (3, 1), (2, 6)])
    assert tuple(h.vertices[0]) == (1, 1)


def test_collinear_boundary_points_removed():
    pts = [(x, 0) for x in range(5)] + [(4, y) for y in range(5)] + [(0, 4), (2, 2)]
    h = convex_hull(pts)
    assert {tuple(p) for p in h.vertices} == {(0, 0), (4, 0), (4, 4), (0, 4)}


def test_degenerate_inputs():
    one = convex_hull([(2, 3), (2, 3)])
    assert one.degenerate and len(one.vertices) == 1
    line = convex_hull([(0, 0), (2, 2), (1, 1), (3, 3)])
    assert line.degenerate
    assert {tuple(p) for p in line.vertices} == {(0, 0), (3, 3)}
    assert hull_contains(line, (1, 1))
    assert not hull_contains(line, (1.5, 1.5))


def test_empty_input():
    with pytest.raises(ValueError):
        convex_hull(np.zeros((0, 2)))


def test_random_500_points_hull(rng):
    pts = rng.integers(0, 200, (500, 2)).astype(float)
    h = convex_hull(pts)
    assert {tuple(p) for p in h.vertices} == extreme_points(pts)
    assert contains_points(h, pts).all()
    _assert_strictly_convex_ccw(h.vertices)


def test_hull_contains_basic(rng):
    h = convex_hull(rng.integers(0, 50, (30, 2)).astype(float))
    assert all(hull_contains(h, v) for v in h.vertices)
    assert hull_contains(h, h.vertices.mean(axis=0))
    assert not hull_contains(h, 2 * h.vertices.max(axis=0) + 1)


def test_idempotent(rng):
    h = convex_hull(rng.integers(0, 60, (80, 2)).astype(float))
    again = convex_hull(h.vertices)
    np.testing.assert_array_equal(again.vertices, h.vertices)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(-30, 30), st.integers(-30, 30)), min_size=3, max_size=60))
def test_rotation_commutes(pts):
    pts = np.array(pts, dtype=float)
    h = convex_hull(pts)
    rot = np.column_stack([-pts[:, 1], pts[:, 0]])
    hr = convex_hull(rot)
    expected = {(-y, x) for x, y in h.vertices.tolist()}
    assert {tuple(p) for p in hr.vertices.tolist()} == expected


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12)), min_size=1, max_size=40))
def test_containment_and_oracle_on_small_grids(pts):
    pts = np.array(pts, dtype=float)
    h = convex_hull(pts)
    assert contains_points(h, pts).all()
    assert {tuple(p) for p in h.vertices.tolist()} == extreme_points(pts)


def test_rasterize_full_image():
    w, h = 7, 5
    hull = convex_hull([(0.5, 0.5), (w - 0.5, 0.5), (w - 0.5, h - 0.5), (0.5, h - 0.5)])
    assert rasterize_hull(hull, w, h).tolist() == list(range(w * h))


def test_rasterize_single_pixel():
    hull = convex_hull([(3.5, 2.5)])
    assert rasterize_hull(hull, 6, 4).tolist() == [2 * 6 + 3]


def _brute_raster(hull, w, h):
    ys, xs = np.mgrid[0:h, 0:w]
    inside = contains_points(hull, np.column_stack([xs.ravel() + 0.5, ys.ravel() + 0.5]))
    return np.flatnonzero(inside)


def test_rasterize_random_20_point_hull(rng):
    pts = rng.integers(0, 64, (20, 2)) + 0.5
    hull = convex_hull(pts)
    np.testing.assert_array_equal(rasterize_hull(hull, 64, 64), _brute_raster(hull, 64, 64))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 128), st.integers(1, 128), st.integers(0, 2**32 - 1), st.booleans())
def test_rasterize_equals_pointwise(w, h, seed, on_centers):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 25))
    if on_centers:
        pts = rng.integers(0, [w, h], (k, 2)) + 0.5
    else:
        pts = rng.uniform(0, 1, (k, 2)) * [w, h]
    hull = convex_hull(pts)
    np.testing.assert_array_equal(rasterize_hull(hull, w, h), _brute_raster(hull, w, h))


def test_overlap_counts(rng):
    assert overlap_count([1, 2, 3], [4, 5]) == 0
    s = rng.choice(1000, 17, replace=False)
    assert overlap_count(s, s) == 17
    a = rng.choice(500, 100, replace=False)
    b = rng.choice(500, 120, replace=False)
    assert overlap_count(a, b) == len(set(a.tolist()) & set(b.tolist()))


def test_region_hull_equals_hull_of_all_pixels(rng):
    width = 40
    offsets = np.unique(rng.integers(0, 40 * 30, 200))
    rows, cols = np.divmod(offsets, width)
    full = convex_hull(np.column_stack([cols + 0.5, rows + 0.5]))
    fast = region_hull(offsets, width)
    np.testing.assert_array_equal(fast.vertices, full.vertices)


def test_region_hull_degenerate_keeps_all_pixels():
    offsets = np.array([0, 1, 3, 7])  # one row with gaps
    hull = region_hull(offsets, 10)
    assert hull.degenerate
    np.testing.assert_array_equal(hull_mask(hull, 10, 2).ravel().nonzero()[0], offsets)
