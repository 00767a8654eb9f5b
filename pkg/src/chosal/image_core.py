"""Raster I/O and sRGB -> CIELAB conversion.

Images are plain numpy arrays throughout the package:

* RGB image: ``(H, W, 3)`` ``uint8``
* Lab image: ``(H, W, 3)`` ``float64`` holding ``(L*, a*, b*)``
* binary mask: ``(H, W)`` ``bool``, True = salient
* gray map: ``(H, W)`` ``uint8``
"""
from __future__ import annotations

import os

import numpy as np
from PIL import Image


class ImageNotFoundError(FileNotFoundError):
    """Raised when an input raster does not exist."""


class UnsupportedImageError(ValueError):
    """Raised for rasters that are not 8-bit RGB or grayscale."""


# PIL modes that decode to 8 bits per channel.
_EIGHT_BIT_MODES = {"1", "L", "LA", "P", "RGB", "RGBA", "RGBX", "CMYK", "YCbCr"}

# sRGB (D65) -> XYZ
_SRGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
# Reference white taken from the matrix itself so that neutral grays map to a* = b* = 0.
_WHITE_XYZ = _SRGB_TO_XYZ.sum(axis=1)

_DELTA = 6.0 / 29.0


def _srgb_linear_lut() -> np.ndarray:
    c = np.arange(256, dtype=np.float64) / 255.0
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


_LINEAR_LUT = _srgb_linear_lut()


def _open(path) -> Image.Image:
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise ImageNotFoundError(f"file not found: {path}")
    try:
        img = Image.open(path)
        img.load()
    except OSError as exc:
        raise UnsupportedImageError(f"cannot decode {path}: {exc}") from exc
    if img.mode not in _EIGHT_BIT_MODES:
        raise UnsupportedImageError(f"unsupported depth (mode {img.mode!r}) in {path}")
    return img


def load_image(path) -> np.ndarray:
    """Decode an 8-bit RGB or grayscale raster into an ``(H, W, 3)`` uint8 array.

    Grayscale input is replicated to three channels; alpha is dropped.
    """
    img = _open(path)
    if img.mode != "RGB":
        img = img.convert("RGB")
    return np.asarray(img, dtype=np.uint8).copy()


def load_gray(path) -> np.ndarray:
    """Decode a raster as a single 8-bit gray channel."""
    img = _open(path)
    if img.mode != "L":
        img = img.convert("L")
    return np.asarray(img, dtype=np.uint8).copy()


def load_mask(path) -> np.ndarray:
    """Load a ground-truth mask; a pixel is salient iff its gray value exceeds 127."""
    return load_gray(path) > 127


def save_gray(gray: np.ndarray, path) -> None:
    """Write an 8-bit grid as a lossless grayscale PNG."""
    gray = np.asarray(gray)
    if gray.ndim != 2 or gray.dtype != np.uint8:
        raise ValueError(f"expected a 2-D uint8 grid, got {gray.dtype} with shape {gray.shape}")
    Image.fromarray(gray, mode="L").save(os.fspath(path), format="PNG")


def save_rgb(rgb: np.ndarray, path) -> None:
    Image.fromarray(np.asarray(rgb, dtype=np.uint8), mode="RGB").save(os.fspath(path), format="PNG")


def check_rgb_image(img) -> np.ndarray:
    """Validate and coerce an RGB image array (sklearn ``check_array`` in spirit)."""
    arr = np.asarray(img)
    if arr.ndim == 2:
        arr = np.repeat(arr[:, :, None], 3, axis=2)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) RGB image, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer) or arr.min() < 0 or arr.max() > 255:
            raise ValueError(f"expected 8-bit RGB values, got dtype {arr.dtype}")
        arr = arr.astype(np.uint8)
    return arr


def rgb_to_lab(img: np.ndarray) -> np.ndarray:
    """Convert an 8-bit sRGB image to CIELAB (D65).

    Returns a float64 array of the same height and width with channels
    ``(L*, a*, b*)``, ``L*`` in ``[0, 100]``.
    """
    rgb = check_rgb_image(img)
    linear = _LINEAR_LUT[rgb]
    xyz = linear @ _SRGB_TO_XYZ.T / _WHITE_XYZ
    f = np.where(
        xyz > _DELTA**3,
        np.cbrt(xyz),
        xyz / (3.0 * _DELTA**2) + 4.0 / 29.0,
    )
    lab = np.empty_like(xyz)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    np.clip(lab[..., 0], 0.0, 100.0, out=lab[..., 0])
    return lab
