import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chosal.fusion import fuse, normalize_map, read_raw, to_u8, write_raw


def test_zero_cho_gives_zero(rng):
    assert (fuse(np.zeros((4, 5)), rng.uniform(size=(4, 5))) == 0).all()


def test_unit_cho_gives_normalized_gc(rng):
    gc = rng.uniform(0.2, 0.7, (4, 5))
    np.testing.assert_allclose(fuse(np.ones((4, 5)), gc), normalize_map(gc))


def test_product_before_normalization(rng):
    a, b = rng.uniform(size=(2, 6, 7))
    expected = np.array([[a[i, j] * b[i, j] for j in range(7)] for i in range(6)])
    np.testing.assert_array_equal(fuse(a, b, normalize=False), expected)
    np.testing.assert_array_equal(fuse(a, b), fuse(b, a))


def test_shape_mismatch():
    with pytest.raises(ValueError):
        fuse(np.zeros((2, 2)), np.zeros((2, 3)))


def test_constant_map_normalizes_to_zero():
    assert (normalize_map(np.full((3, 3), 0.7)) == 0).all()


def test_to_u8_points():
    assert to_u8(np.array([0.0, 1.0, 0.5])).tolist() == [0, 255, 128]


def test_to_u8_against_decimal_rounding(rng):
    from decimal import ROUND_HALF_UP, Decimal

    v = np.concatenate([rng.uniform(size=500), np.arange(256) / 255.0, (np.arange(255) + 0.5) / 255.0])
    ours = to_u8(v)
    ref = [int(Decimal(repr(float(x) * 255.0)).quantize(Decimal(1), rounding=ROUND_HALF_UP)) for x in v]
    assert ours.tolist() == ref


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_monotone_and_argmax_kept(seed):
    rng = np.random.default_rng(seed)
    b = rng.uniform(size=(5, 5))
    b.flat[0], b.flat[1] = 0.0, 1.0
    a = np.clip(b + rng.uniform(0, 0.3, b.shape), 0, 1)
    a.flat[0] = 0.0
    assert (to_u8(a) >= to_u8(b)).all()
    fused = fuse(rng.uniform(size=(5, 5)), rng.uniform(size=(5, 5)))
    assert (to_u8(fused)[fused == fused.max()] == 255).all()


def test_raw_round_trip(tmp_path, rng):
    m = rng.uniform(size=(3, 5)).astype(np.float32)
    write_raw(m, tmp_path / "m.raw")
    data = (tmp_path / "m.raw").read_bytes()
    assert data[:8] == (5).to_bytes(4, "little") + (3).to_bytes(4, "little")
    assert len(data) == 8 + 15 * 4
    np.testing.assert_array_equal(read_raw(tmp_path / "m.raw"), m)
