"""Spatially weighted global color contrast cue."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fusion import normalize_map
from .hierarchy import Hierarchy, pairwise_distances
from .oversegmentation import RegionStats


@dataclass(frozen=True)
class ContrastConfig:
    sigma_s2: float = 0.4
    sigma_w2: float = 0.16

    def __post_init__(self):
        if self.sigma_s2 <= 0 or self.sigma_w2 <= 0:
            raise ValueError("contrast falloffs must be positive")


def image_center(shape) -> np.ndarray:
    height, width = shape
    return np.array([width / 2.0, height / 2.0]) / np.hypot(width, height)


def spatial_weight(region: RegionStats, sigma_w2: float, center) -> float:
    """Center prior ``exp(-d^2 / sigma_w2)``, ``d`` = centroid distance to the image center.

    Both points are in diagonal-normalized coordinates.
    """
    d2 = float(((np.asarray(region.centroid) - np.asarray(center)) ** 2).sum())
    return float(np.exp(-d2 / sigma_w2))


def layer_gc(stats: list[RegionStats], cfg: ContrastConfig, center) -> np.ndarray:
    """Global contrast of each region against every other region of its layer."""
    if len(stats) == 1:
        return np.zeros(1)
    dc, ds = pairwise_distances(stats)
    contrast = (np.exp(-ds / cfg.sigma_s2) * dc).sum(axis=1)  # diagonal terms vanish, dc == 0
    prior = np.array([spatial_weight(s, cfg.sigma_w2, center) for s in stats])
    return prior * contrast


def gc_map(h: Hierarchy, cfg: ContrastConfig | None = None, normalize: bool = True) -> np.ndarray:
    cfg = cfg or ContrastConfig()
    center = image_center(h.base.shape)
    total = np.zeros(h.base.shape)
    for layer in h.layers:
        total += layer_gc(layer.stats, cfg, center)[layer.labels]
    raw = total / h.n_layers
    return normalize_map(raw) if normalize else raw
