"""Tight bounding-box crop of the hand mask and nearest-neighbour resize."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyMask
from .imaging import BinaryMask

__all__ = ["BoundingBox", "bounding_box", "crop_resize", "wrist_side"]


@dataclass(frozen=True)
class BoundingBox:
    """Inclusive pixel box; ``x`` is the column, ``y`` the row."""

    x_min: int
    y_min: int
    x_max: int
    y_max: int

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError(f"degenerate box {self}")

    @property
    def width(self) -> int:
        return self.x_max - self.x_min + 1

    @property
    def height(self) -> int:
        return self.y_max - self.y_min + 1


def bounding_box(mask: BinaryMask) -> BoundingBox:
    rows = np.flatnonzero(mask.bits.any(axis=1))
    if rows.size == 0:
        raise EmptyMask("segmentation found no skin pixels (empty mask)")
    cols = np.flatnonzero(mask.bits.any(axis=0))
    return BoundingBox(int(cols[0]), int(rows[0]), int(cols[-1]), int(rows[-1]))


def crop_resize(mask: BinaryMask, box: BoundingBox, side: int = 50) -> BinaryMask:
    """Cut ``box`` out of ``mask`` and resample it to ``side x side``.

    Output pixel ``(i, j)`` takes source pixel
    ``(floor((i + .5) * H / side), floor((j + .5) * W / side))`` of the box.
    """
    if side < 1:
        raise ValueError("side must be positive")
    if box.x_min < 0 or box.y_min < 0 or box.x_max >= mask.width or box.y_max >= mask.height:
        raise ValueError(f"{box} lies outside the {mask.width}x{mask.height} mask")
    region = mask.bits[box.y_min : box.y_max + 1, box.x_min : box.x_max + 1]
    # integer form of floor((k + 0.5) * n / side), exact for any size
    k = np.arange(side)
    rows = ((2 * k + 1) * box.height) // (2 * side)
    cols = ((2 * k + 1) * box.width) // (2 * side)
    return BinaryMask(region[np.ix_(rows, cols)])


def _longest_run(edge: np.ndarray) -> int:
    best = run = 0
    for bit in edge:
        run = run + 1 if bit else 0
        best = max(best, run)
    return best


def wrist_side(mask: BinaryMask, box: BoundingBox) -> str:
    """Name the box edge with the longest run of foreground pixels.

    This is bookkeeping only; the crop itself is the plain bounding box.
    Ties resolve in the order bottom, top, left, right.
    """
    region = mask.bits[box.y_min : box.y_max + 1, box.x_min : box.x_max + 1]
    edges = {
        "bottom": region[-1, :],
        "top": region[0, :],
        "left": region[:, 0],
        "right": region[:, -1],
    }
    runs = {name: _longest_run(edge) for name, edge in edges.items()}
    return max(runs, key=lambda name: runs[name])
