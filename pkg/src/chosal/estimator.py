"""scikit-learn compatible front end."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .config import PipelineConfig
from .evaluation import EvalReport, adaptive_threshold, binarize, evaluate_map
from .fusion import to_u8
from .image_core import check_rgb_image
from .pipeline import compute_saliency


def _as_image_list(X) -> list[np.ndarray]:
    if isinstance(X, np.ndarray) and X.ndim == 3:
        return [check_rgb_image(X)]
    if isinstance(X, np.ndarray) and X.ndim == 4:
        return [check_rgb_image(x) for x in X]
    return [check_rgb_image(x) for x in X]


class ChoSaliency(TransformerMixin, BaseEstimator):
    """Salient region detector combining convex hull overlap with global contrast.

    The model has no learned state: ``fit`` only validates the
    hyper-parameters, so the estimator can sit in a ``Pipeline`` or be
    tuned with ``GridSearchCV`` against ground-truth masks via ``score``.

    Parameters
    ----------
    sigma_c2, sigma_s2 : float
        Color and spatial falloffs of the region affinity; ``sigma_s2``
        also sets the spatial falloff of the contrast cue.
    sigma_w2 : float
        Width of the center prior applied to region contrast.
    layer_counts : tuple of int
        Region count of each hierarchy layer, coarse to fine.
    scale_k, min_size, smooth_sigma
        Over-segmentation parameters.
    beta2 : float
        F-measure weight used by ``score``.
    normalize_cues : bool
        Min-max normalize each cue map before fusion.
    """

    def __init__(
        self,
        sigma_c2=3.0,
        sigma_s2=0.4,
        sigma_w2=0.16,
        layer_counts=(2, 4, 8, 16, 32),
        scale_k=300.0,
        min_size=50,
        smooth_sigma=0.8,
        beta2=0.3,
        normalize_cues=True,
    ):
        self.sigma_c2 = sigma_c2
        self.sigma_s2 = sigma_s2
        self.sigma_w2 = sigma_w2
        self.layer_counts = layer_counts
        self.scale_k = scale_k
        self.min_size = min_size
        self.smooth_sigma = smooth_sigma
        self.beta2 = beta2
        self.normalize_cues = normalize_cues

    @classmethod
    def from_config(cls, cfg: PipelineConfig) -> "ChoSaliency":
        d = cfg.to_dict()
        d.pop("workers")
        d["layer_counts"] = tuple(d["layer_counts"])
        return cls(**d)

    def fit(self, X=None, y=None):
        self.config_ = PipelineConfig(**self.get_params())
        self.n_layers_ = len(self.config_.layer_counts)
        return self

    def transform(self, X) -> list[np.ndarray]:
        """Saliency maps in ``[0, 1]``, one per image."""
        check_is_fitted(self, "config_")
        return [compute_saliency(img, self.config_, image_id=i) for i, img in enumerate(_as_image_list(X))]

    def predict(self, X) -> list[np.ndarray]:
        """Binary salient-region masks at the adaptive threshold (twice the mean saliency)."""
        masks = []
        for s in self.transform(X):
            gray = to_u8(s)
            masks.append(binarize(gray, adaptive_threshold(gray)))
        return masks

    def score(self, X, y) -> float:
        """Corpus best F-measure against ground-truth masks ``y``."""
        maps = self.transform(X)
        rows = [evaluate_map(str(i), to_u8(s), np.asarray(m, dtype=bool), self.beta2) for i, (s, m) in enumerate(zip(maps, y))]
        return EvalReport(rows, self.beta2).best_f
