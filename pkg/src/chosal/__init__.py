"""Salient region detection with convex hull overlap over a normalized-cut hierarchy."""
from .config import PipelineConfig
from .estimator import ChoSaliency
from .pipeline import compute_saliency, run_pipeline

__all__ = ["ChoSaliency", "PipelineConfig", "compute_saliency", "run_pipeline"]
__version__ = "0.1.0"
