"""Convex hull overlap (CHO) cue."""
from __future__ import annotations

import numpy as np

from .fusion import normalize_map
from .geometry import hull_mask, region_hull
from .hierarchy import Hierarchy


def layer_cho(labels: np.ndarray, n_regions: int | None = None) -> np.ndarray:
    """CHO score of every region in one partition.

    For region ``j`` this is the number of its pixels lying inside the
    convex hulls of the *other* regions of the same partition, summed over
    those hulls and divided by ``|j|``. Values can exceed 1.
    """
    labels = np.asarray(labels)
    height, width = labels.shape
    flat = labels.ravel()
    k = int(flat.max()) + 1 if n_regions is None else int(n_regions)
    sizes = np.bincount(flat, minlength=k)
    order = np.argsort(flat, kind="stable")
    members = np.split(order, np.cumsum(sizes)[:-1])
    covered = np.zeros(k, dtype=np.int64)
    if k == 1:
        return np.zeros(1)
    for j in range(k):
        mask = hull_mask(region_hull(members[j], width), width, height)
        counts = np.bincount(labels[mask], minlength=k)
        counts[j] = 0
        covered += counts
    return covered / sizes


def cho_map(h: Hierarchy, normalize: bool = True) -> np.ndarray:
    """Per-pixel CHO averaged over the layers of the hierarchy."""
    total = np.zeros(h.base.shape)
    for layer in h.layers:
        table = layer_cho(layer.labels, layer.n_regions)
        total += table[layer.labels]
    raw = total / h.n_layers
    return normalize_map(raw) if normalize else raw
