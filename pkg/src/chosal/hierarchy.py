"""Fully connected region graph and recursive normalized-cut hierarchy."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .oversegmentation import RegionStats, Segmentation, merge_stats

_UNDERFLOW = 1e-300


@dataclass(frozen=True)
class WeightedGraph:
    weights: np.ndarray  # (m, m) symmetric, zero diagonal
    sigma_c2: float
    sigma_s2: float

    @property
    def n_nodes(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class Layer:
    """One partition of the base regions.

    ``base_labels[r]`` is the layer region containing base region ``r``;
    ``labels`` is the same partition expanded to pixels.
    """

    base_labels: np.ndarray
    labels: np.ndarray
    stats: list[RegionStats]

    @property
    def n_regions(self) -> int:
        return len(self.stats)


@dataclass(frozen=True)
class Hierarchy:
    layers: list[Layer]  # coarsest first
    base: Segmentation
    splits: list[tuple[int, float]] = field(default_factory=list)  # (cluster count after split, ncut)

    @property
    def n_layers(self) -> int:
        return len(self.layers)


def color_distance(a: RegionStats, b: RegionStats) -> float:
    return float(np.linalg.norm(a.mean_lab - b.mean_lab))


def spatial_distance(a: RegionStats, b: RegionStats) -> float:
    return float(np.linalg.norm(a.centroid - b.centroid))


def edge_weight(a: RegionStats, b: RegionStats, sigma_c2: float, sigma_s2: float) -> float:
    """Affinity ``|a||b| exp(-Dc/sigma_c2) exp(-Ds/sigma_s2)`` between two regions.

    Distances enter the exponent unsquared.
    """
    w = (
        a.size
        * b.size
        * np.exp(-color_distance(a, b) / sigma_c2)
        * np.exp(-spatial_distance(a, b) / sigma_s2)
    )
    return 0.0 if w < _UNDERFLOW else float(w)


def pairwise_distances(stats: list[RegionStats]) -> tuple[np.ndarray, np.ndarray]:
    """Dense color and spatial distance matrices between region means/centroids."""
    colors = np.stack([s.mean_lab for s in stats])
    cents = np.stack([s.centroid for s in stats])
    dc = np.sqrt(((colors[:, None, :] - colors[None, :, :]) ** 2).sum(axis=-1))
    ds = np.sqrt(((cents[:, None, :] - cents[None, :, :]) ** 2).sum(axis=-1))
    return dc, ds


def build_region_graph(stats: list[RegionStats], sigma_c2: float, sigma_s2: float) -> WeightedGraph:
    if not stats:
        raise ValueError("need at least one region")
    sizes = np.array([s.size for s in stats], dtype=np.float64)
    dc, ds = pairwise_distances(stats)
    w = np.outer(sizes, sizes) * np.exp(-dc / sigma_c2) * np.exp(-ds / sigma_s2)
    w[w < _UNDERFLOW] = 0.0
    np.fill_diagonal(w, 0.0)
    # exact symmetry regardless of rounding in the pairwise terms
    w = np.triu(w, 1)
    w = w + w.T
    return WeightedGraph(w, float(sigma_c2), float(sigma_s2))


def ncut_value(weights: np.ndarray, in_a: np.ndarray) -> float:
    """``cut/assoc(A) + cut/assoc(B)`` for the boolean split ``in_a``.

    A term whose cut is zero contributes zero, so isolated nodes split off for free.
    """
    in_a = np.asarray(in_a, dtype=bool)
    cut = weights[np.ix_(in_a, ~in_a)].sum()
    if cut == 0.0:
        return 0.0
    deg = weights.sum(axis=1)
    return float(cut / deg[in_a].sum() + cut / deg[~in_a].sum())


def _sweep_ncuts(w: np.ndarray, masks: np.ndarray) -> np.ndarray:
    x = masks.astype(np.float64)
    cut = ((x @ w) * (1.0 - x)).sum(axis=1)
    deg = w.sum(axis=1)
    assoc_a = x @ deg
    assoc_b = deg.sum() - assoc_a
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = cut / assoc_a + cut / assoc_b
    vals[cut == 0.0] = 0.0
    return vals


def fiedler_vector(w: np.ndarray) -> tuple[np.ndarray, float]:
    """Second-smallest generalized eigenpair of ``(D - W) y = lambda D y``.

    Solved through the symmetric normalized Laplacian; all degrees must be positive.
    """
    d = w.sum(axis=1)
    dinv = 1.0 / np.sqrt(d)
    lsym = np.eye(len(d)) - dinv[:, None] * w * dinv[None, :]
    lsym = 0.5 * (lsym + lsym.T)
    vals, vecs = linalg.eigh(lsym, subset_by_index=[1, 1])
    return dinv * vecs[:, 0], float(vals[0])


def threshold_candidates(y: np.ndarray) -> np.ndarray:
    u = np.unique(y)
    return np.unique(np.append((u[:-1] + u[1:]) / 2.0, 0.0))


def ncut_bipartition(g: WeightedGraph, members) -> tuple[np.ndarray, np.ndarray, float]:
    """Split ``members`` in two by thresholding the relaxed normalized-cut solution.

    Returns ``(part_a, part_b, ncut)``, where ``part_a`` holds the smallest
    member id. Every distinct-value midpoint of the Fiedler vector (plus 0)
    is tried and the split with the lowest exact Ncut is kept.
    """
    members = np.sort(np.asarray(members, dtype=np.int64))
    if len(members) < 2:
        raise ValueError("bipartition needs at least two nodes")
    w = g.weights[np.ix_(members, members)]
    scale = w.max()
    if scale <= 0.0:
        in_a = np.arange(len(members)) % 2 == 0
        return members[in_a], members[~in_a], 2.0
    w = w / scale
    deg = w.sum(axis=1)
    isolated = deg == 0.0
    if isolated.any():
        in_a = isolated
        ncut = 0.0
    else:
        y, _ = fiedler_vector(w)
        thresholds = threshold_candidates(y)
        masks = y[None, :] > thresholds[:, None]
        sizes = masks.sum(axis=1)
        masks = masks[(sizes > 0) & (sizes < len(members))]
        best = int(np.argmin(_sweep_ncuts(w, masks)))
        in_a = masks[best]
        ncut = ncut_value(g.weights[np.ix_(members, members)], in_a)
    if not in_a[0]:
        in_a = ~in_a
    return members[in_a], members[~in_a], ncut


def _clip_counts(layer_counts, m: int) -> list[int]:
    counts = [int(c) for c in layer_counts]
    if not counts:
        raise ValueError("layer_counts must not be empty")
    if any(b <= a for a, b in zip(counts, counts[1:])) or counts[0] < 1:
        raise ValueError(f"layer_counts must be strictly increasing positive ints, got {counts}")
    return [min(c, m) for c in counts]


def _make_layer(clusters: list[np.ndarray], base: Segmentation, stats: list[RegionStats]) -> Layer:
    ordered = sorted(clusters, key=lambda c: int(c[0]))
    base_labels = np.empty(len(stats), dtype=np.int64)
    layer_stats = []
    for new_id, cluster in enumerate(ordered):
        base_labels[cluster] = new_id
        layer_stats.append(merge_stats([stats[i] for i in cluster], new_id))
    return Layer(base_labels, base_labels[base.labels], layer_stats)


def build_hierarchy(g: WeightedGraph, base: Segmentation, stats: list[RegionStats], layer_counts) -> Hierarchy:
    """Best-first recursive bipartitioning into nested layers.

    At each step every cluster with two or more base regions is bipartitioned
    and the split with the smallest Ncut is executed (ties go to the cluster
    whose smallest member id is lower). A layer is recorded whenever the
    cluster count reaches the next requested count.
    """
    m = g.n_nodes
    if len(stats) != m or base.n_regions != m:
        raise ValueError("graph, segmentation and stats disagree on region count")
    counts = _clip_counts(layer_counts, m)
    clusters = [np.arange(m, dtype=np.int64)]
    cache: dict[tuple[int, ...], tuple[np.ndarray, np.ndarray, float]] = {}
    layers: list[Layer] = []
    splits: list[tuple[int, float]] = []
    for target in counts:
        while len(clusters) < target:
            best_key = None
            for c in clusters:
                if len(c) < 2:
                    continue
                key = tuple(c.tolist())
                if key not in cache:
                    cache[key] = ncut_bipartition(g, c)
                rank = (cache[key][2], int(c[0]))
                if best_key is None or rank < best_key[0]:
                    best_key = (rank, key)
            key = best_key[1]
            part_a, part_b, ncut = cache.pop(key)
            clusters = [c for c in clusters if tuple(c.tolist()) != key] + [part_a, part_b]
            splits.append((len(clusters), ncut))
        layers.append(_make_layer(clusters, base, stats))
    return Hierarchy(layers, base, splits)
