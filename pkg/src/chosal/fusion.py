"""Cue fusion, 8-bit export and the raw float map format."""
from __future__ import annotations

import os
import struct

import numpy as np


def normalize_map(values: np.ndarray) -> np.ndarray:
    """Min-max scale to ``[0, 1]``; a constant map becomes all zeros."""
    values = np.asarray(values, dtype=np.float64)
    lo, hi = values.min(), values.max()
    if hi <= lo:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)


def fuse(cho: np.ndarray, gc: np.ndarray, normalize: bool = True) -> np.ndarray:
    """Pixelwise product of the two cue maps."""
    cho = np.asarray(cho, dtype=np.float64)
    gc = np.asarray(gc, dtype=np.float64)
    if cho.shape != gc.shape:
        raise ValueError(f"cue maps differ in shape: {cho.shape} vs {gc.shape}")
    product = cho * gc
    return normalize_map(product) if normalize else product


def to_u8(saliency: np.ndarray) -> np.ndarray:
    """``round(v * 255)`` with halves rounded up."""
    s = np.clip(np.asarray(saliency, dtype=np.float64), 0.0, 1.0)
    return np.floor(s * 255.0 + 0.5).astype(np.uint8)


def write_raw(saliency: np.ndarray, path) -> None:
    """Little-endian ``uint32 width, uint32 height`` then row-major float32 values."""
    s = np.asarray(saliency)
    height, width = s.shape
    with open(os.fspath(path), "wb") as fh:
        fh.write(struct.pack("<II", width, height))
        fh.write(s.astype("<f4").tobytes())


def read_raw(path) -> np.ndarray:
    with open(os.fspath(path), "rb") as fh:
        width, height = struct.unpack("<II", fh.read(8))
        data = np.frombuffer(fh.read(), dtype="<f4")
    if data.size != width * height:
        raise ValueError(f"raw map holds {data.size} values, header says {width}x{height}")
    return data.reshape(height, width).astype(np.float64)
