"""Synthetic figure/ground images with exact ground truth."""
from __future__ import annotations

import numpy as np
from scipy import ndimage

from .image_core import rgb_to_lab


def _random_convex_figure(rng, height, width):
    yy, xx = np.mgrid[0:height, 0:width] + 0.5
    cy = rng.uniform(0.35, 0.65) * height
    cx = rng.uniform(0.35, 0.65) * width
    if rng.random() < 0.5:
        ry = rng.uniform(0.15, 0.28) * height
        rx = rng.uniform(0.12, 0.25) * width
        theta = rng.uniform(0, np.pi)
        u = (xx - cx) * np.cos(theta) + (yy - cy) * np.sin(theta)
        v = -(xx - cx) * np.sin(theta) + (yy - cy) * np.cos(theta)
        return (u / rx) ** 2 + (v / ry) ** 2 <= 1.0
    # convex polygon through jittered points on an ellipse
    n = rng.integers(4, 9)
    angles = np.sort(rng.uniform(0, 2 * np.pi / n, n) + np.arange(n) * 2 * np.pi / n)
    ry = rng.uniform(0.15, 0.28) * height
    rx = rng.uniform(0.12, 0.25) * width
    px = cx + rx * np.cos(angles)
    py = cy + ry * np.sin(angles)
    mask = np.ones((height, width), dtype=bool)
    for i in range(n):
        x0, y0, x1, y1 = px[i], py[i], px[(i + 1) % n], py[(i + 1) % n]
        mask &= (x1 - x0) * (yy - y0) - (y1 - y0) * (xx - x0) >= 0
    return mask


def _colors(rng, min_dist=45.0):
    """Figure color plus two ground colors, pairwise far apart in Lab."""
    while True:
        c = rng.integers(20, 236, (3, 3))
        lab = rgb_to_lab(c[None].astype(np.uint8))[0]
        d = np.linalg.norm(lab[:, None] - lab[None], axis=-1)
        if d[0, 1] > min_dist and d[0, 2] > min_dist and d[1, 2] > 15.0:
            return c.astype(np.float64)


def make_image(rng, height=321, width=481, noise_sigma=8.0):
    """One image: uniform convex figure over a two-tone textured ground, plus Gaussian noise.

    Returns ``(rgb uint8, mask bool)``.
    """
    fig = _random_convex_figure(rng, height, width)
    figure_color, g1, g2 = _colors(rng)
    blobs = ndimage.gaussian_filter(rng.normal(size=(height, width)), rng.uniform(6, 14))
    texture = blobs > np.median(blobs)
    img = np.where(texture[..., None], g1, g2)
    img[fig] = figure_color
    img = img + rng.normal(0.0, noise_sigma, img.shape)
    return np.clip(np.round(img), 0, 255).astype(np.uint8), fig


def make_corpus(n=50, seed=0, height=321, width=481, noise_sigma=8.0):
    rng = np.random.default_rng(seed)
    return [make_image(rng, height, width, noise_sigma) for _ in range(n)]
