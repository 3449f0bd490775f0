"""Skin segmentation: HSV thresholding, majority smoothing, biggest blob."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import ndimage

from .imaging import BinaryMask, RgbImage, rgb_to_hsv_array

__all__ = ["SkinRange", "skin_mask", "median_smooth", "biggest_blob"]

# 8-connectivity
_EIGHT = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class SkinRange:
    """Inclusive hue (degrees) and saturation bounds of the skin envelope."""

    h_lo: float = 0.0
    h_hi: float = 50.0
    s_lo: float = 0.20
    s_hi: float = 0.68

    def __post_init__(self):
        if not 0.0 <= self.h_lo <= self.h_hi < 360.0:
            raise ValueError(f"hue bounds must satisfy 0 <= lo <= hi < 360, got [{self.h_lo}, {self.h_hi}]")
        if not 0.0 <= self.s_lo <= self.s_hi <= 1.0:
            raise ValueError(f"saturation bounds must satisfy 0 <= lo <= hi <= 1, got [{self.s_lo}, {self.s_hi}]")


def skin_mask(image: RgbImage, skin: SkinRange = SkinRange()) -> BinaryMask:
    h, s, _ = rgb_to_hsv_array(image.pixels)
    # NaN hue (black pixels) fails both comparisons
    with np.errstate(invalid="ignore"):
        bits = (h >= skin.h_lo) & (h <= skin.h_hi) & (s >= skin.s_lo) & (s <= skin.s_hi)
    return BinaryMask(bits)


def median_smooth(mask: BinaryMask, radius: int = 2) -> BinaryMask:
    """Binary majority filter over a ``(2r+1)^2`` window, borders clamped.

    The window has an odd number of cells so the majority is never tied.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if radius == 0:
        return mask
    size = 2 * radius + 1
    padded = np.pad(mask.bits.astype(np.int32), radius, mode="edge")
    counts = sliding_window_view(padded, (size, size)).sum(axis=(2, 3))
    return BinaryMask(counts * 2 > size * size)


def label_components(mask: BinaryMask):
    """Label 8-connected components; returns ``(labels, count)``."""
    labels, count = ndimage.label(mask.bits, structure=_EIGHT)
    return labels, int(count)


def biggest_blob(mask: BinaryMask) -> BinaryMask:
    """Keep only the largest 8-connected component.

    Equal sizes go to the component whose first pixel in row-major order
    comes earliest.
    """
    labels, count = label_components(mask)
    if count == 0:
        return BinaryMask(np.zeros_like(mask.bits))
    flat = labels.ravel()
    sizes = np.bincount(flat, minlength=count + 1)
    sizes[0] = 0
    best = sizes.max()
    candidates = np.flatnonzero(sizes == best)
    if len(candidates) > 1:
        fg = np.flatnonzero(flat)
        first = np.full(count + 1, flat.size, dtype=np.int64)
        np.minimum.at(first, flat[fg], fg)
        keep = candidates[np.argmin(first[candidates])]
    else:
        keep = candidates[0]
    return BinaryMask(labels == keep)
