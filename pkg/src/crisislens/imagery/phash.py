"""64-bit DCT perceptual hashes and Hamming distance.

Hash construction: luma grayscale (0.299/0.587/0.114), bilinear resize to
32x32 with half-pixel sample centers, orthonormal 2-D DCT-II, then the 8x8
low-frequency block.  The DC term is excluded, the remaining 63
coefficients are thresholded strictly above their median (ties become 0),
and one constant 0 bit pads the hash to 64 bits.  Bit i of the hash sits at
position ``63 - i`` so identical inputs always pack identically.
"""

from __future__ import annotations

import math

import numpy as np

HASH_BITS = 64
_RESIZE_TO = 32
_BLOCK = 8

# Strictly-greater-than-median with this absolute slack: coefficients that
# are exact ties in real arithmetic (all-zero AC terms of a constant image)
# land within float rounding noise (~1e-12) of the median and must stay 0.
# Real image structure produces coefficients orders of magnitude above this.
_TIE_EPS = 1e-8

_LUMA = np.array([0.299, 0.587, 0.114], dtype=np.float64)


def _dct_matrix(n: int) -> np.ndarray:
    k = np.arange(n)[:, None]
    m = np.arange(n)[None, :]
    mat = np.cos(np.pi * (2 * m + 1) * k / (2 * n)) * math.sqrt(2.0 / n)
    mat[0, :] = math.sqrt(1.0 / n)
    return mat


_DCT32 = _dct_matrix(_RESIZE_TO)


def to_grayscale(pixels: np.ndarray) -> np.ndarray:
    """RGB (H, W, 3) -> luma (H, W) float64."""
    arr = np.asarray(pixels, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) RGB pixels, got shape {arr.shape}")
    return arr @ _LUMA


def bilinear_resize(gray: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resample with half-pixel centers, edges clamped."""
    gray = np.asarray(gray, dtype=np.float64)
    in_h, in_w = gray.shape

    def axis_coords(n_out: int, n_in: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        src = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        src = np.clip(src, 0.0, n_in - 1.0)
        lo = np.floor(src).astype(np.int64)
        hi = np.minimum(lo + 1, n_in - 1)
        frac = src - lo
        return lo, hi, frac

    y0, y1, fy = axis_coords(out_h, in_h)
    x0, x1, fx = axis_coords(out_w, in_w)
    top = gray[y0][:, x0] * (1 - fx) + gray[y0][:, x1] * fx
    bottom = gray[y1][:, x0] * (1 - fx) + gray[y1][:, x1] * fx
    return top * (1 - fy)[:, None] + bottom * fy[:, None]


def dct2(block: np.ndarray) -> np.ndarray:
    """Orthonormal 2-D DCT-II of a 32x32 block."""
    return _DCT32 @ block @ _DCT32.T


def compute_phash(pixels: np.ndarray) -> int:
    """Perceptual hash of decoded RGB pixels (requires H, W >= 8)."""
    arr = np.asarray(pixels)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) RGB pixels, got shape {arr.shape}")
    h, w = arr.shape[:2]
    if h < 8 or w < 8:
        raise ValueError(f"image too small to hash: {w}x{h}")
    gray = to_grayscale(arr)
    small = bilinear_resize(gray, _RESIZE_TO, _RESIZE_TO)
    coeffs = dct2(small)[:_BLOCK, :_BLOCK]
    flat = coeffs.flatten()[1:]  # row-major, DC term dropped: 63 values
    median = float(np.median(flat))
    value = 0
    for i, c in enumerate(flat):
        if c - median > _TIE_EPS:
            value |= 1 << (HASH_BITS - 1 - i)
    # bit 63 (lowest) is the constant pad and stays 0
    return value


def hamming(a: int, b: int) -> int:
    """Population count of the XOR of two 64-bit hashes."""
    return ((a ^ b) & ((1 << HASH_BITS) - 1)).bit_count()


def hash_to_hex(value: int) -> str:
    return f"{value:016x}"


def hash_from_hex(text: str) -> int:
    return int(text, 16)
