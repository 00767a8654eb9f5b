"""End-to-end saliency computation for one image."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cho_cue import cho_map
from .config import PipelineConfig
from .contrast_cue import ContrastConfig, gc_map
from .fusion import fuse
from .hierarchy import Hierarchy, build_hierarchy, build_region_graph
from .image_core import check_rgb_image, rgb_to_lab
from .oversegmentation import Segmentation, felzenszwalb_segment, region_stats


class PipelineError(RuntimeError):
    """A stage failed for a specific image."""

    def __init__(self, image_id, cause):
        super().__init__(f"{image_id}: {cause}")
        self.image_id = image_id
        self.cause = cause


@dataclass
class SaliencyResult:
    segmentation: Segmentation
    hierarchy: Hierarchy
    cho: np.ndarray
    gc: np.ndarray
    saliency: np.ndarray


def run_pipeline(img, cfg: PipelineConfig | None = None) -> SaliencyResult:
    cfg = cfg or PipelineConfig()
    lab = rgb_to_lab(check_rgb_image(img))
    seg = felzenszwalb_segment(lab, cfg.scale_k, cfg.min_size, cfg.smooth_sigma)
    stats = region_stats(seg, lab)
    graph = build_region_graph(stats, cfg.sigma_c2, cfg.sigma_s2)
    hier = build_hierarchy(graph, seg, stats, cfg.layer_counts)
    cho = cho_map(hier, normalize=cfg.normalize_cues)
    gc = gc_map(hier, ContrastConfig(cfg.sigma_s2, cfg.sigma_w2), normalize=cfg.normalize_cues)
    return SaliencyResult(seg, hier, cho, gc, fuse(cho, gc))


def compute_saliency(img, cfg: PipelineConfig | None = None, image_id=None) -> np.ndarray:
    """Fused saliency map in ``[0, 1]`` with the input's height and width."""
    try:
        return run_pipeline(img, cfg).saliency
    except Exception as exc:
        if image_id is None:
            raise
        raise PipelineError(image_id, exc) from exc
