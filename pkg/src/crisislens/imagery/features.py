"""Fixed 79-dimensional image descriptors for the relevancy and damage models.

Layout: 64-bin grayscale histogram (L1-normalized) + 3x3 grid of mean Sobel
gradient magnitude (row-major) + per-channel mean and standard deviation
(means then stds).  Compact enough for forest training at desk scale, yet
the blocks separate flat banner-like graphics from textured photographs and
grade texture energy, which is what the two classifiers need.  A CNN
embedding could replace this behind the same features-in/class-out contract.
"""

from __future__ import annotations

import numpy as np

from .phash import to_grayscale

N_FEATURES = 79
_HIST_BINS = 64
_GRID = 3

_SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
_SOBEL_Y = _SOBEL_X.T


def _convolve3(gray: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """3x3 cross-correlation with edge-replicated borders."""
    padded = np.pad(gray, 1, mode="edge")
    out = np.zeros_like(gray)
    for dy in range(3):
        for dx in range(3):
            out += kernel[dy, dx] * padded[dy : dy + gray.shape[0], dx : dx + gray.shape[1]]
    return out


def sobel_magnitude(gray: np.ndarray) -> np.ndarray:
    gx = _convolve3(gray, _SOBEL_X)
    gy = _convolve3(gray, _SOBEL_Y)
    return np.sqrt(gx * gx + gy * gy)


def extract_image_features(pixels: np.ndarray) -> np.ndarray:
    """79-dim descriptor of an RGB image (H, W >= 3)."""
    arr = np.asarray(pixels, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) RGB pixels, got shape {arr.shape}")
    h, w = arr.shape[:2]
    if h < 3 or w < 3:
        raise ValueError(f"image too small for features: {w}x{h}")

    gray = to_grayscale(arr)
    bins = np.clip((gray // 4).astype(np.int64), 0, _HIST_BINS - 1)
    hist = np.bincount(bins.ravel(), minlength=_HIST_BINS).astype(np.float64)
    hist /= hist.sum()

    magnitude = sobel_magnitude(gray)
    grid = np.empty(_GRID * _GRID, dtype=np.float64)
    row_bands = np.array_split(np.arange(h), _GRID)
    col_bands = np.array_split(np.arange(w), _GRID)
    cell = 0
    for rows in row_bands:
        for cols in col_bands:
            grid[cell] = magnitude[np.ix_(rows, cols)].mean()
            cell += 1

    means = arr.reshape(-1, 3).mean(axis=0)
    stds = arr.reshape(-1, 3).std(axis=0)

    return np.concatenate([hist, grid, means, stds])
