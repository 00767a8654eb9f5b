"""Precision/recall/F-measure benchmark harness."""
from __future__ import annotations

import csv
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import PipelineConfig, resolve_workers
from .fusion import to_u8
from .image_core import load_gray, load_image, load_mask
from .pipeline import compute_saliency

log = logging.getLogger(__name__)

THRESHOLDS = np.arange(256)
IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff")
CSV_HEADER = ["image", "best_f", "precision", "recall", "adaptive_f"]


def binarize(gray: np.ndarray, threshold: float) -> np.ndarray:
    """Pixels strictly above the threshold are salient."""
    return np.asarray(gray) > threshold


def _check_same_shape(a, b):
    if np.shape(a) != np.shape(b):
        raise ValueError(f"dimension mismatch: {np.shape(a)} vs {np.shape(b)}")


def pr_at(pred: np.ndarray, gt: np.ndarray) -> tuple[float, float]:
    """Precision and recall of one binary prediction.

    An empty prediction has precision 1; an empty ground truth has recall 1.
    """
    _check_same_shape(pred, gt)
    pred = np.asarray(pred, dtype=bool)
    gt = np.asarray(gt, dtype=bool)
    tp = np.count_nonzero(pred & gt)
    n_pred = np.count_nonzero(pred)
    n_gt = np.count_nonzero(gt)
    precision = tp / n_pred if n_pred else 1.0
    recall = tp / n_gt if n_gt else 1.0
    return float(precision), float(recall)


def f_measure(precision, recall, beta2: float = 0.3):
    """Weighted harmonic mean ``(1 + b2) P R / (b2 P + R)``; 0 where the denominator is 0.

    Works elementwise on arrays.
    """
    p = np.asarray(precision, dtype=np.float64)
    r = np.asarray(recall, dtype=np.float64)
    denom = beta2 * p + r
    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.where(denom > 0, (1.0 + beta2) * p * r / denom, 0.0)
    return float(f) if f.ndim == 0 else f


@dataclass(frozen=True)
class PrCurve:
    """Precision and recall for thresholds 0..255 (ascending)."""

    precision: np.ndarray
    recall: np.ndarray
    thresholds: np.ndarray = field(default_factory=lambda: THRESHOLDS.copy())

    def f(self, beta2: float = 0.3) -> np.ndarray:
        return f_measure(self.precision, self.recall, beta2)

    def best(self, beta2: float = 0.3) -> tuple[int, float, float, float]:
        """``(threshold, F, precision, recall)`` at the first F maximum."""
        f = self.f(beta2)
        i = int(np.argmax(f))
        return i, float(f[i]), float(self.precision[i]), float(self.recall[i])


def pr_curve(gray: np.ndarray, gt: np.ndarray) -> PrCurve:
    """All 256 thresholds from one pass of value histograms."""
    _check_same_shape(gray, gt)
    gray = np.asarray(gray)
    gt = np.asarray(gt, dtype=bool)
    if gray.dtype != np.uint8:
        raise ValueError(f"expected an 8-bit map, got {gray.dtype}")
    pos = np.bincount(gray[gt], minlength=256)
    neg = np.bincount(gray[~gt], minlength=256)
    # predictions at threshold t are the values t+1..255
    tp = np.concatenate([np.cumsum(pos[::-1])[::-1][1:], [0]])
    fp = np.concatenate([np.cumsum(neg[::-1])[::-1][1:], [0]])
    n_pred = tp + fp
    n_gt = pos.sum()
    with np.errstate(divide="ignore", invalid="ignore"):
        precision = np.where(n_pred > 0, tp / np.maximum(n_pred, 1), 1.0)
    recall = tp / n_gt if n_gt else np.ones(256)
    return PrCurve(precision.astype(np.float64), recall.astype(np.float64))


def adaptive_threshold(gray: np.ndarray) -> float:
    """Twice the mean saliency, capped at 255."""
    return min(255.0, 2.0 * float(np.mean(gray)))


def adaptive_f(gray: np.ndarray, gt: np.ndarray, beta2: float = 0.3) -> float:
    p, r = pr_at(binarize(gray, adaptive_threshold(gray)), gt)
    return f_measure(p, r, beta2)


@dataclass
class ImageRow:
    image: str
    best_f: float
    precision: float
    recall: float
    adaptive_f: float
    best_threshold: int
    curve: PrCurve = field(repr=False)


@dataclass
class EvalReport:
    rows: list[ImageRow]
    beta2: float
    config: dict = field(default_factory=dict)
    skipped: list[dict] = field(default_factory=list)

    @property
    def curve(self) -> PrCurve | None:
        """Corpus curve: per-threshold mean of the per-image precision and recall."""
        if not self.rows:
            return None
        return PrCurve(
            np.mean([r.curve.precision for r in self.rows], axis=0),
            np.mean([r.curve.recall for r in self.rows], axis=0),
        )

    @property
    def best_f(self) -> float:
        curve = self.curve
        return 0.0 if curve is None else curve.best(self.beta2)[1]

    def corpus_row(self) -> dict | None:
        curve = self.curve
        if curve is None:
            return None
        t, f, p, r = curve.best(self.beta2)
        return {
            "image": "CORPUS",
            "best_f": f,
            "precision": p,
            "recall": r,
            "adaptive_f": float(np.mean([row.adaptive_f for row in self.rows])),
            "best_threshold": t,
        }

    def write(self, prefix) -> tuple[Path, Path]:
        prefix = Path(prefix)
        if prefix.parent and not prefix.parent.exists():
            prefix.parent.mkdir(parents=True)
        csv_path = prefix.with_name(prefix.name + ".csv")
        json_path = prefix.with_name(prefix.name + ".json")
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for row in self.rows:
                writer.writerow([row.image] + [f"{getattr(row, k):.6f}" for k in CSV_HEADER[1:]])
            corpus = self.corpus_row()
            if corpus is not None:
                writer.writerow(["CORPUS"] + [f"{corpus[k]:.6f}" for k in CSV_HEADER[1:]])
        curve = self.curve
        payload = {
            "conventions": {
                "binarize": "salient iff value > threshold",
                "empty_prediction_precision": 1.0,
                "empty_ground_truth_recall": 1.0,
                "precision_recall_reported_at": "best-F threshold",
                "adaptive_threshold": "min(255, 2 * mean saliency)",
            },
            "beta2": self.beta2,
            "config": self.config,
            "n_images": len(self.rows),
            "corpus": self.corpus_row(),
            "curve": [] if curve is None else [
                {"threshold": int(t), "precision": float(p), "recall": float(r)}
                for t, p, r in zip(curve.thresholds, curve.precision, curve.recall)
            ],
            "images": [
                {k: getattr(row, k) for k in CSV_HEADER + ["best_threshold"]} for row in self.rows
            ],
            "skipped": self.skipped,
        }
        with open(json_path, "w") as fh:
            json.dump(payload, fh, indent=2)
        return csv_path, json_path


def evaluate_map(image_id: str, gray: np.ndarray, gt: np.ndarray, beta2: float = 0.3) -> ImageRow:
    curve = pr_curve(gray, gt)
    t, f, p, r = curve.best(beta2)
    return ImageRow(image_id, f, p, r, adaptive_f(gray, gt, beta2), t, curve)


def _find_by_stem(directory: Path, stem: str) -> Path | None:
    for ext in IMAGE_EXTENSIONS:
        for cand in (directory / (stem + ext), directory / (stem + ext.upper())):
            if cand.is_file():
                return cand
    return None


def _stems(directory: Path) -> dict[str, Path]:
    out = {}
    for p in sorted(directory.iterdir()):
        if p.is_file() and p.suffix.lower() in IMAGE_EXTENSIONS:
            out.setdefault(p.stem, p)
    return out


def _evaluate_one(args):
    stem, image_path, mask_path, map_path, cfg = args
    try:
        gt = load_mask(mask_path)
        if map_path is not None:
            gray = load_gray(map_path)
        else:
            img = load_image(image_path)
            if img.shape[:2] != gt.shape:
                raise ValueError(f"dimension mismatch: image {img.shape[:2]} vs mask {gt.shape}")
            gray = to_u8(compute_saliency(img, cfg, image_id=stem))
        if gray.shape != gt.shape:
            raise ValueError(f"dimension mismatch: map {gray.shape} vs mask {gt.shape}")
        return evaluate_map(stem, gray, gt, cfg.beta2), None
    except Exception as exc:  # recorded per image, the run continues
        return None, {"image": stem, "reason": str(exc)}


def eval_dataset(image_dir, mask_dir, cfg: PipelineConfig | None = None, maps_dir=None) -> EvalReport:
    """Benchmark every image with a same-stem mask.

    With ``maps_dir`` the precomputed maps there are scored instead of
    running the pipeline. Rows are ordered by file stem.
    """
    cfg = cfg or PipelineConfig()
    image_dir, mask_dir = Path(image_dir), Path(mask_dir)
    maps_dir = Path(maps_dir) if maps_dir is not None else None
    images = _stems(image_dir)
    masks = _stems(mask_dir)
    skipped = [{"image": s, "reason": "no ground-truth mask"} for s in images if s not in masks]
    skipped += [{"image": s, "reason": "no input image"} for s in masks if s not in images]
    jobs = []
    for stem in sorted(set(images) & set(masks)):
        map_path = None
        if maps_dir is not None:
            map_path = _find_by_stem(maps_dir, stem)
            if map_path is None:
                skipped.append({"image": stem, "reason": "no saliency map"})
                continue
        jobs.append((stem, images[stem], masks[stem], map_path, cfg))

    workers = resolve_workers(cfg)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_one, jobs))
    else:
        results = [_evaluate_one(job) for job in jobs]

    rows = []
    for row, skip in results:
        if skip is not None:
            log.warning("skipping %s: %s", skip["image"], skip["reason"])
            skipped.append(skip)
        else:
            rows.append(row)
    skipped.sort(key=lambda s: s["image"])
    return EvalReport(rows, cfg.beta2, cfg.to_dict(), skipped)
