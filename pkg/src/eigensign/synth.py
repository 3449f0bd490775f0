"""Seeded synthetic gesture corpus.

Each class gets a hand-like archetype: a palm ellipse, a wrist bar and a
class-specific set of finger strokes, some of them bent. Samples render the
archetype in a skin tone on a dark background, then apply a random integer
translation, a small scale change and salt-and-pepper noise (salt pixels are
skin-toned, pepper pixels black). An optional finger-pose jitter, off by
default, perturbs each finger's angle. The same seed always produces the
same bytes on disk.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple

import numpy as np

from .imaging import RgbImage, save_image

__all__ = [
    "Jitter",
    "Archetype",
    "Finger",
    "make_archetypes",
    "render_mask",
    "render_sample",
    "synth_corpus",
    "class_labels",
    "SKIN_RGB",
    "BACKGROUND_RGB",
]

# the 24 static letters; H and J are motion gestures
ALPHABET = "ABCDEFGIKLMNOPQRSTUVWXYZ"
SKIN_RGB = (200, 140, 110)
BACKGROUND_RGB = (25, 25, 35)
PEPPER_RGB = (0, 0, 0)

IMAGE_SIDE = 128
SHAPE_SIDE = 72  # pixels spanned by the unit square of an archetype at scale 1
MARGIN = 6  # keeps smoothing windows clear of the image border
POSE_DEFAULT = 0.0  # off: crop normalisation already absorbs translation and scale

# finger slots: (angle from vertical in degrees, clockwise; base length)
_SLOTS = ((-78.0, 0.30), (-24.0, 0.44), (-6.0, 0.48), (12.0, 0.45), (30.0, 0.38))


@dataclass(frozen=True)
class Jitter:
    """Per-sample perturbation limits.

    ``translate``: max integer shift in pixels from the centred position;
    ``scale``: max relative size change; ``noise``: fraction of pixels hit
    by salt-and-pepper noise; ``pose``: max per-finger angle change in
    degrees (articulation differences between captures of one sign).
    """

    translate: int = 12
    scale: float = 0.05
    noise: float = 0.02
    pose: float = POSE_DEFAULT

    def __post_init__(self):
        if self.translate < 0 or not 0 <= self.scale <= 0.05 or not 0 <= self.noise <= 0.02:
            raise ValueError("jitter must satisfy translate >= 0, scale <= 0.05, noise <= 0.02")
        if self.pose < 0:
            raise ValueError("pose jitter must be >= 0")

    @classmethod
    def none(cls):
        return cls(0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class Finger:
    """A finger stroke leaving the palm at ``angle`` (radians from vertical)."""

    angle: float
    length: float
    radius: float
    bend_at: float = 1.0  # fraction of the length where the finger folds
    bend: float = 0.0  # fold angle in radians

    def polyline(self, base, angle_offset: float = 0.0):
        theta = self.angle + angle_offset
        bx, by = base
        tx, ty = bx + self.length * np.sin(theta), by - self.length * np.cos(theta)
        if self.bend_at >= 1.0:
            return [(bx, by), (tx, ty)]
        k = self.bend_at
        jx, jy = bx + k * (tx - bx), by + k * (ty - by)
        rest = (1.0 - k) * self.length
        phi = theta + self.bend
        return [(bx, by), (jx, jy), (jx + rest * np.sin(phi), jy - rest * np.cos(phi))]


@dataclass(frozen=True)
class Archetype:
    label: str
    palm_center: Tuple[float, float]
    palm_radii: Tuple[float, float]
    wrist_half_width: float
    fingers: Tuple[Finger, ...]

    def finger_base(self, finger: Finger, angle_offset: float = 0.0):
        cx, cy = self.palm_center
        rx, ry = self.palm_radii
        theta = finger.angle + angle_offset
        return cx + 0.6 * rx * np.sin(theta), cy - 0.6 * ry * np.cos(theta)


def class_labels(classes: int) -> List[str]:
    if classes <= len(ALPHABET):
        return list(ALPHABET[:classes])
    return list(ALPHABET) + [f"C{i:02d}" for i in range(len(ALPHABET), classes)]


def _patterns(rng: np.random.Generator, classes: int) -> List[int]:
    # one raised-finger bit pattern per class, repeating only past 31 classes
    pool = list(range(1, 32))
    rng.shuffle(pool)
    out = []
    while len(out) < classes:
        out.extend(pool)
    return out[:classes]


def make_archetypes(seed: int, classes: int) -> List[Archetype]:
    rng = np.random.default_rng([seed, 0x5EED])
    patterns = _patterns(rng, classes)
    result = []
    for label, pattern in zip(class_labels(classes), patterns):
        cx, cy = 0.5 + rng.uniform(-0.03, 0.03), 0.64 + rng.uniform(-0.03, 0.03)
        rx, ry = rng.uniform(0.15, 0.21), rng.uniform(0.13, 0.18)
        fingers = []
        for slot, (angle, length) in enumerate(_SLOTS):
            if not pattern >> slot & 1:
                continue
            theta = float(np.radians(angle + rng.uniform(-10.0, 10.0)))
            length *= rng.uniform(0.85, 1.1)
            radius = rng.uniform(0.035, 0.05)
            if rng.random() < 0.35:
                bend_at = rng.uniform(0.45, 0.65)
                bend = np.radians(rng.choice([-1.0, 1.0]) * rng.uniform(50.0, 80.0))
            else:
                bend_at, bend = 1.0, 0.0
            fingers.append(Finger(theta, float(length), float(radius), float(bend_at), float(bend)))
        result.append(
            Archetype(
                label,
                (float(cx), float(cy)),
                (float(rx), float(ry)),
                float(rng.uniform(0.09, 0.13)),
                tuple(fingers),
            )
        )
    return result


def _segment_distance(px, py, a, b):
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    denom = dx * dx + dy * dy
    t = np.clip(((px - ax) * dx + (py - ay) * dy) / denom, 0.0, 1.0) if denom else 0.0
    return np.hypot(px - (ax + t * dx), py - (ay + t * dy))


def render_mask(arch: Archetype, scale: float = 1.0, pose=None) -> np.ndarray:
    """Rasterise an archetype at ``scale``; returns a tight-ish boolean canvas.

    ``pose`` optionally holds one angle offset (radians) per finger.
    """
    side = int(np.ceil(SHAPE_SIDE * scale))
    # pixel centres in unit coordinates
    coords = (np.arange(side) + 0.5) / (SHAPE_SIDE * scale)
    py, px = np.meshgrid(coords, coords, indexing="ij")
    cx, cy = arch.palm_center
    rx, ry = arch.palm_radii
    mask = ((px - cx) / rx) ** 2 + ((py - cy) / ry) ** 2 <= 1.0
    mask |= (np.abs(px - cx) <= arch.wrist_half_width) & (py >= cy) & (py <= 0.99)
    offsets = pose if pose is not None else [0.0] * len(arch.fingers)
    for finger, off in zip(arch.fingers, offsets):
        pts = finger.polyline(arch.finger_base(finger, off), off)
        for a, b in zip(pts[:-1], pts[1:]):
            mask |= _segment_distance(px, py, a, b) <= finger.radius
    return mask


def place(shape: np.ndarray, offset: Tuple[int, int], side: int = IMAGE_SIDE) -> np.ndarray:
    """Paste a boolean shape into a ``side x side`` canvas at ``(row, col)``."""
    canvas = np.zeros((side, side), dtype=bool)
    r, c = offset
    h, w = shape.shape
    canvas[r : r + h, c : c + w] = shape
    return canvas


def colorize(mask: np.ndarray) -> np.ndarray:
    img = np.empty(mask.shape + (3,), dtype=np.uint8)
    img[...] = BACKGROUND_RGB
    img[mask] = SKIN_RGB
    return img


def render_sample(arch: Archetype, rng: np.random.Generator, jitter: Jitter = Jitter(),
                  side: int = IMAGE_SIDE) -> RgbImage:
    scale = 1.0 + rng.uniform(-jitter.scale, jitter.scale) if jitter.scale else 1.0
    pose = None
    if jitter.pose:
        pose = np.radians(rng.uniform(-jitter.pose, jitter.pose, size=len(arch.fingers)))
    shape = render_mask(arch, scale, pose)
    h, w = shape.shape
    room_r, room_c = side - h - MARGIN, side - w - MARGIN
    if room_r < MARGIN or room_c < MARGIN:
        raise ValueError(f"{side}px image too small for a {w}x{h} shape")
    center_r, center_c = (MARGIN + room_r) // 2, (MARGIN + room_c) // 2
    if jitter.translate:
        dr, dc = rng.integers(-jitter.translate, jitter.translate + 1, size=2)
    else:
        dr = dc = 0
    r = int(np.clip(center_r + dr, MARGIN, room_r))
    c = int(np.clip(center_c + dc, MARGIN, room_c))
    img = colorize(place(shape, (r, c), side))
    if jitter.noise:
        hit = rng.random((side, side)) < jitter.noise
        salt = rng.random((side, side)) < 0.5
        img[hit & salt] = SKIN_RGB
        img[hit & ~salt] = PEPPER_RGB
    return RgbImage(img)


def synth_corpus(out_dir, seed: int = 0, classes: int = 24, samples: int = 10,
                 jitter: Jitter = Jitter()) -> List[Path]:
    """Write ``<out_dir>/<label>/<label>_<nn>.ppm`` for every class and sample."""
    if classes < 2 or samples < 1:
        raise ValueError("need at least 2 classes and 1 sample per class")
    out = Path(out_dir)
    written = []
    for index, arch in enumerate(make_archetypes(seed, classes)):
        rng = np.random.default_rng([seed, index])
        folder = out / arch.label
        os.makedirs(folder, exist_ok=True)
        for n in range(samples):
            path = folder / f"{arch.label}_{n:02d}.ppm"
            save_image(path, render_sample(arch, rng, jitter))
            written.append(path)
    return written
