"""Graph-based over-segmentation (Felzenszwalb-Huttenlocher) and region statistics."""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
from scipy import ndimage


@dataclass(frozen=True)
class Segmentation:
    """Row-major labeling with contiguous ids ``0..n_regions-1``."""

    labels: np.ndarray  # (H, W) int64
    n_regions: int

    @property
    def shape(self):
        return self.labels.shape


@dataclass(frozen=True)
class RegionStats:
    """Per-region size, mean color and centroid.

    ``centroid`` is ``(x, y)`` of the pixel centers divided by the image
    diagonal length; ``pixels`` holds flat row-major offsets.
    """

    id: int
    size: int
    mean_lab: np.ndarray
    centroid: np.ndarray
    pixels: np.ndarray


def _grid_edges(height: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    """8-connected edge list, lexicographically ordered by ``(a, b)``."""
    idx = np.arange(height * width, dtype=np.int64).reshape(height, width)
    pairs = [
        (idx[:, :-1], idx[:, 1:]),  # right
        (idx[:-1, :-1], idx[1:, 1:]),  # down-right
        (idx[:-1, :], idx[1:, :]),  # down
        (idx[:-1, 1:], idx[1:, :-1]),  # down-left
    ]
    a = np.concatenate([p[0].ravel() for p in pairs])
    b = np.concatenate([p[1].ravel() for p in pairs])
    order = np.lexsort((b, a))
    return a[order], b[order]


@numba.njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@numba.njit(cache=True)
def _union(parent, rank, size, x, y):
    if rank[x] > rank[y]:
        parent[y] = x
        size[x] += size[y]
        return x
    parent[x] = y
    size[y] += size[x]
    if rank[x] == rank[y]:
        rank[y] += 1
    return y


@numba.njit(cache=True)
def _segment_graph(n, a, b, w, order, k, min_size):
    parent = np.arange(n)
    rank = np.zeros(n, dtype=np.int64)
    size = np.ones(n, dtype=np.int64)
    thresh = np.full(n, k)
    for e in order:
        ra = _find(parent, a[e])
        rb = _find(parent, b[e])
        if ra != rb and w[e] <= thresh[ra] and w[e] <= thresh[rb]:
            r = _union(parent, rank, size, ra, rb)
            thresh[r] = w[e] + k / size[r]
    # small components join the neighbor across their cheapest boundary edge
    for e in order:
        ra = _find(parent, a[e])
        rb = _find(parent, b[e])
        if ra != rb and (size[ra] < min_size or size[rb] < min_size):
            _union(parent, rank, size, ra, rb)
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        out[i] = _find(parent, i)
    return out


def relabel_contiguous(labels: np.ndarray) -> tuple[np.ndarray, int]:
    """Renumber ids to ``0..k-1`` in order of first raster occurrence."""
    flat = labels.ravel()
    _, first, inverse = np.unique(flat, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inverse].reshape(labels.shape), len(first)


def felzenszwalb_segment(
    lab: np.ndarray, scale_k: float = 300.0, min_size: int = 50, smooth_sigma: float = 0.8
) -> Segmentation:
    """Over-segment a Lab image with the graph-based merging criterion.

    Edge weights are Euclidean Lab distances between 8-connected neighbors
    of the Gaussian-smoothed image. Ties in weight are broken by the
    lexicographic order of the pixel pair, so the output is deterministic.
    """
    if scale_k <= 0:
        raise ValueError("scale_k must be positive")
    if min_size < 1:
        raise ValueError("min_size must be >= 1")
    lab = np.asarray(lab, dtype=np.float64)
    height, width = lab.shape[:2]
    if smooth_sigma > 0:
        smooth = np.stack(
            [ndimage.gaussian_filter(lab[..., c], smooth_sigma, mode="nearest") for c in range(3)],
            axis=-1,
        )
    else:
        smooth = lab
    flat = smooth.reshape(-1, 3)
    a, b = _grid_edges(height, width)
    w = np.sqrt(((flat[a] - flat[b]) ** 2).sum(axis=1))
    order = np.argsort(w, kind="stable")
    roots = _segment_graph(height * width, a, b, w, order, float(scale_k), int(min_size))
    labels, n = relabel_contiguous(roots.reshape(height, width))
    return Segmentation(labels, n)


def region_stats(seg: Segmentation, lab: np.ndarray) -> list[RegionStats]:
    """Exact size, mean Lab color and normalized centroid of every region."""
    labels = seg.labels
    lab = np.asarray(lab, dtype=np.float64)
    if lab.shape[:2] != labels.shape:
        raise ValueError(f"segmentation {labels.shape} and image {lab.shape[:2]} differ in size")
    height, width = labels.shape
    diag = float(np.hypot(width, height))
    flat = labels.ravel()
    n = seg.n_regions
    sizes = np.bincount(flat, minlength=n)
    colors = lab.reshape(-1, 3)
    sums = np.stack([np.bincount(flat, weights=colors[:, c], minlength=n) for c in range(3)], axis=1)
    ys, xs = np.divmod(np.arange(flat.size), width)
    cx = np.bincount(flat, weights=xs + 0.5, minlength=n)
    cy = np.bincount(flat, weights=ys + 0.5, minlength=n)
    order = np.argsort(flat, kind="stable")
    members = np.split(order, np.cumsum(sizes)[:-1])
    return [
        RegionStats(
            id=i,
            size=int(sizes[i]),
            mean_lab=sums[i] / sizes[i],
            centroid=np.array([cx[i], cy[i]]) / sizes[i] / diag,
            pixels=members[i],
        )
        for i in range(n)
    ]


def merge_stats(parts: list[RegionStats], new_id: int) -> RegionStats:
    """Combine base regions into one by size-weighted averaging."""
    sizes = np.array([p.size for p in parts], dtype=np.float64)
    total = sizes.sum()
    mean = (np.stack([p.mean_lab for p in parts]) * sizes[:, None]).sum(axis=0) / total
    centroid = (np.stack([p.centroid for p in parts]) * sizes[:, None]).sum(axis=0) / total
    pixels = np.sort(np.concatenate([p.pixels for p in parts]))
    return RegionStats(new_id, int(total), mean, centroid, pixels)
