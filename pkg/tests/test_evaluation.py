import csv
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chosal.config import PipelineConfig
from chosal.evaluation import (
    EvalReport,
    adaptive_threshold,
    binarize,
    eval_dataset,
    evaluate_map,
    f_measure,
    pr_at,
    pr_curve,
)
from chosal.image_core import save_gray


def naive_curve(gray, gt):
    """256 independent re-scans."""
    ps, rs = [], []
    for t in range(256):
        pred = gray > t
        tp = int(np.sum(pred & gt))
        npred = int(np.sum(pred))
        ngt = int(np.sum(gt))
        ps.append(tp / npred if npred else 1.0)
        rs.append(tp / ngt if ngt else 1.0)
    return np.array(ps), np.array(rs)


def test_binarize_bounds():
    g = np.array([[0, 1, 100, 255]], dtype=np.uint8)
    assert not binarize(g, 255).any()
    assert binarize(g, 0).tolist() == [[False, True, True, True]]
    assert not binarize(np.full((3, 3), 100, np.uint8), 100).any()


def test_pr_at_cases():
    gt = np.array([1, 1, 0, 0], bool)
    assert pr_at(gt, gt) == (1.0, 1.0)
    assert pr_at(np.zeros(4, bool), gt) == (1.0, 0.0)
    assert pr_at(np.array([1, 1, 0, 0], bool), np.array([1, 0, 1, 0], bool)) == (0.5, 0.5)
    assert pr_at(np.array([1, 0, 0, 0], bool), np.zeros(4, bool)) == (0.0, 1.0)
    with pytest.raises(ValueError):
        pr_at(np.zeros(3, bool), np.zeros(4, bool))


@pytest.mark.parametrize(
    "p,r,published",
    [(0.84, 0.77, 0.83), (0.78, 0.63, 0.74), (0.89, 0.73, 0.85)],
    ids=["pascal-s", "ecssd", "msra10k"],
)
def test_f_measure_table_rows(p, r, published):
    assert f_measure(p, r, 0.3) == pytest.approx(published, abs=0.01)


def test_f_measure_edges():
    assert f_measure(1.0, 1.0, 0.3) == pytest.approx(1.0)
    assert f_measure(0.0, 0.0, 0.3) == 0.0
    assert f_measure(0.89, 0.73, 0.3) == pytest.approx(0.8472, abs=1e-4)


def test_perfect_map_curve():
    gt = np.zeros((6, 6), bool)
    gt[2:4, 1:5] = True
    c = pr_curve((gt * 255).astype(np.uint8), gt)
    assert (c.precision[:255] == 1).all() and (c.recall[:255] == 1).all()
    assert c.best()[1] == pytest.approx(1.0)


def test_constant_zero_map_curve():
    gt = np.eye(5, dtype=bool)
    c = pr_curve(np.zeros((5, 5), np.uint8), gt)
    assert (c.precision == 1).all() and (c.recall == 0).all()


@pytest.mark.parametrize("seed", range(5))
def test_histogram_equals_naive(seed):
    rng = np.random.default_rng(seed)
    gray = rng.integers(0, 256, (8, 8)).astype(np.uint8)
    gt = rng.uniform(size=(8, 8)) < 0.4
    c = pr_curve(gray, gt)
    p, r = naive_curve(gray, gt)
    np.testing.assert_array_equal(c.precision, p)
    np.testing.assert_array_equal(c.recall, r)
    assert (np.diff(c.recall) <= 0).all()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_best_f_invariant_under_monotone_remap(seed):
    rng = np.random.default_rng(seed)
    gray = rng.integers(0, 200, (10, 10)).astype(np.uint8)
    gt = rng.uniform(size=(10, 10)) < 0.3
    # value 0 can never exceed a threshold, so it must stay at 0
    occupied = np.unique(gray[gray > 0])
    new_vals = np.sort(rng.choice(np.arange(1, 256), len(occupied), replace=False))
    lut = np.zeros(256, np.uint8)
    lut[occupied] = new_vals
    a = pr_curve(gray, gt).best()[1]
    b = pr_curve(lut[gray], gt).best()[1]
    assert a == pytest.approx(b, abs=1e-12)


def test_adaptive_threshold():
    assert adaptive_threshold(np.array([[10, 30]], np.uint8)) == 40.0
    assert adaptive_threshold(np.full((2, 2), 200, np.uint8)) == 255.0


def test_corpus_curve_is_average(rng):
    rows = []
    for i in range(3):
        gray = rng.integers(0, 256, (12, 9)).astype(np.uint8)
        gt = rng.uniform(size=(12, 9)) < 0.5
        rows.append((evaluate_map(str(i), gray, gt), naive_curve(gray, gt)))
    report = EvalReport([r for r, _ in rows], 0.3)
    p_avg = sum(c[0] for _, c in rows) / 3
    r_avg = sum(c[1] for _, c in rows) / 3
    np.testing.assert_allclose(report.curve.precision, p_avg, rtol=1e-12)
    np.testing.assert_allclose(report.curve.recall, r_avg, rtol=1e-12)
    assert report.best_f == pytest.approx(float(f_measure(p_avg, r_avg, 0.3).max()))


def _write_pair(tmp_path, stem, gt, with_image=True):
    (tmp_path / "images").mkdir(exist_ok=True)
    (tmp_path / "masks").mkdir(exist_ok=True)
    (tmp_path / "maps").mkdir(exist_ok=True)
    g = (gt * 255).astype(np.uint8)
    save_gray(g, tmp_path / "masks" / f"{stem}.png")
    save_gray(g, tmp_path / "maps" / f"{stem}.png")
    if with_image:
        save_gray(g, tmp_path / "images" / f"{stem}.png")


def test_eval_dataset_with_perfect_maps(tmp_path, rng):
    for stem in ("b", "a"):
        gt = np.zeros((10, 14), bool)
        gt[2:6, 3:9] = True
        _write_pair(tmp_path, stem, gt)
    _write_pair(tmp_path, "orphan", np.ones((3, 3), bool), with_image=False)
    report = eval_dataset(tmp_path / "images", tmp_path / "masks", maps_dir=tmp_path / "maps")
    assert [r.image for r in report.rows] == ["a", "b"]
    assert report.best_f == pytest.approx(1.0)
    assert report.skipped == [{"image": "orphan", "reason": "no input image"}]
    csv_path, json_path = report.write(tmp_path / "out" / "rep")
    rows = list(csv.reader(open(csv_path)))
    assert rows[0] == ["image", "best_f", "precision", "recall", "adaptive_f"]
    assert rows[-1][0] == "CORPUS" and float(rows[-1][1]) == pytest.approx(1.0)
    payload = json.load(open(json_path))
    assert len(payload["curve"]) == 256
    assert payload["config"] == PipelineConfig().to_dict()
    assert payload["skipped"][0]["image"] == "orphan"


def test_eval_dataset_dimension_mismatch_skipped(tmp_path):
    _write_pair(tmp_path, "x", np.ones((4, 4), bool))
    save_gray(np.zeros((5, 5), np.uint8), tmp_path / "maps" / "x.png")
    report = eval_dataset(tmp_path / "images", tmp_path / "masks", maps_dir=tmp_path / "maps")
    assert not report.rows
    assert "dimension mismatch" in report.skipped[0]["reason"]


def test_eval_dataset_empty(tmp_path):
    (tmp_path / "i").mkdir()
    (tmp_path / "m").mkdir()
    report = eval_dataset(tmp_path / "i", tmp_path / "m")
    assert report.rows == [] and report.curve is None and report.best_f == 0.0
