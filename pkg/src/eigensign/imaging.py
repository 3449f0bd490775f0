"""Raster containers, PNM (PBM/PGM/PPM) codec and the RGB to HSV transform.

Rasters wrap read-only numpy arrays indexed ``[row, col]``:

* ``RgbImage.pixels``  -- ``uint8`` array of shape ``(height, width, 3)``
* ``GrayImage.pixels`` -- ``uint8`` array of shape ``(height, width)``
* ``BinaryMask.bits``  -- ``bool`` array of shape ``(height, width)``

All three compare equal by value, so ``read_pnm(write_pnm(img)) == img``
is a bit-exact check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .errors import PnmError

__all__ = [
    "RgbImage",
    "GrayImage",
    "BinaryMask",
    "Hsv",
    "read_pnm",
    "write_pnm",
    "load_image",
    "save_image",
    "rgb_to_hsv",
    "rgb_to_hsv_array",
    "hsv_preview",
]


def _frozen(arr, dtype, ndim, name):
    arr = np.array(arr, dtype=dtype, copy=True)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must have {ndim} dimensions, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be at least 1x1, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


class _Raster:
    __slots__ = ()

    @property
    def height(self) -> int:
        return self._data().shape[0]

    @property
    def width(self) -> int:
        return self._data().shape[1]

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self._data(), other._data())

    def __hash__(self):
        d = self._data()
        return hash((type(self).__name__, d.shape, d.tobytes()))

    def __repr__(self):
        return f"{type(self).__name__}({self.width}x{self.height})"


@dataclass(frozen=True, eq=False, repr=False)
class RgbImage(_Raster):
    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.dtype != np.uint8 and px.size and (px.min() < 0 or px.max() > 255):
            raise ValueError("RGB channel values must lie in [0, 255]")
        px = _frozen(px, np.uint8, 3, "RgbImage")
        if px.shape[2] != 3:
            raise ValueError(f"RgbImage needs 3 channels, got {px.shape[2]}")
        object.__setattr__(self, "pixels", px)

    def _data(self):
        return self.pixels


@dataclass(frozen=True, eq=False, repr=False)
class GrayImage(_Raster):
    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.dtype != np.uint8 and px.size and (px.min() < 0 or px.max() > 255):
            raise ValueError("gray values must lie in [0, 255]")
        object.__setattr__(self, "pixels", _frozen(px, np.uint8, 2, "GrayImage"))

    def _data(self):
        return self.pixels


@dataclass(frozen=True, eq=False, repr=False)
class BinaryMask(_Raster):
    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", _frozen(self.bits, bool, 2, "BinaryMask"))

    def _data(self):
        return self.bits

    @classmethod
    def zeros(cls, width, height):
        return cls(np.zeros((height, width), dtype=bool))

    def count(self) -> int:
        return int(self.bits.sum())


Raster = Union[RgbImage, GrayImage, BinaryMask]


# --------------------------------------------------------------------------
# PNM decoding
# --------------------------------------------------------------------------

_WHITESPACE = b" \t\n\r\x0b\x0c"


class _HeaderReader:
    """Token scanner for PNM headers; ``#`` starts a comment up to end of line."""

    def __init__(self, data: bytes, pos: int = 2):
        self.data = data
        self.pos = pos
        self.token_start = pos

    def _skip(self):
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = data[self.pos]
            if c in _WHITESPACE:
                self.pos += 1
            elif c == 0x23:  # '#'
                while self.pos < n and data[self.pos] not in (0x0A, 0x0D):
                    self.pos += 1
            else:
                break

    def integer(self, what: str) -> int:
        self._skip()
        start = self.token_start = self.pos
        data, n = self.data, len(self.data)
        while self.pos < n and 0x30 <= data[self.pos] <= 0x39:
            self.pos += 1
        if self.pos == start:
            if start >= n:
                raise PnmError(f"truncated header: missing {what}", start)
            raise PnmError(f"expected decimal {what}", start)
        return int(data[start : self.pos])

    def end_of_header(self) -> int:
        """Consume the single whitespace byte that separates header and raster."""
        if self.pos >= len(self.data):
            raise PnmError("truncated header: no raster data", self.pos)
        if self.data[self.pos] not in _WHITESPACE:
            raise PnmError("expected whitespace after header", self.pos)
        self.pos += 1
        return self.pos


def read_pnm(data: bytes) -> Raster:
    """Decode any of P1-P6.

    P1/P4 give a :class:`BinaryMask`, P2/P5 a :class:`GrayImage`, P3/P6 an
    :class:`RgbImage`. The maxval of gray and color files must be 255.
    Errors are :class:`PnmError` carrying the byte offset of the problem.
    """
    data = bytes(data)
    if len(data) < 2 or data[0] != 0x50 or data[1] not in b"123456":
        raise PnmError("not a PNM file (bad magic number)", 0)
    kind = int(data[1:2])
    hdr = _HeaderReader(data)
    width = hdr.integer("width")
    height = hdr.integer("height")
    if width < 1 or height < 1:
        raise PnmError(f"image dimensions must be positive, got {width}x{height}", hdr.pos)
    if kind not in (1, 4):
        maxval = hdr.integer("maxval")
        if maxval != 255:
            raise PnmError(f"unsupported maxval {maxval} (only 255 is accepted)", hdr.token_start)

    if kind in (1, 2, 3):
        channels = {1: 1, 2: 1, 3: 3}[kind]
        values = _read_ascii(hdr, width * height * channels, bits=(kind == 1))
        if kind == 1:
            return BinaryMask(values.reshape(height, width).astype(bool))
        if values.max(initial=0) > 255:
            raise PnmError("sample exceeds maxval 255", hdr.pos)
        if kind == 2:
            return GrayImage(values.reshape(height, width).astype(np.uint8))
        return RgbImage(values.reshape(height, width, 3).astype(np.uint8))

    start = hdr.end_of_header()
    if kind == 4:
        stride = (width + 7) // 8
        need = stride * height
    else:
        stride = width * (3 if kind == 6 else 1)
        need = stride * height
    payload = data[start : start + need]
    if len(payload) < need:
        raise PnmError(f"truncated raster: need {need} bytes, found {len(payload)}", len(data))
    buf = np.frombuffer(payload, dtype=np.uint8)
    if kind == 4:
        bits = np.unpackbits(buf.reshape(height, stride), axis=1)[:, :width]
        return BinaryMask(bits.astype(bool))
    if kind == 5:
        return GrayImage(buf.reshape(height, width))
    return RgbImage(buf.reshape(height, width, 3))


def _read_ascii(hdr: _HeaderReader, count: int, bits: bool) -> np.ndarray:
    out = np.empty(count, dtype=np.int64)
    data, n = hdr.data, len(hdr.data)
    for i in range(count):
        if bits:
            # P1 digits need not be separated
            hdr._skip()
            if hdr.pos >= n:
                raise PnmError(f"truncated raster: got {i} of {count} samples", hdr.pos)
            c = data[hdr.pos]
            if c not in (0x30, 0x31):
                raise PnmError("PBM sample must be 0 or 1", hdr.pos)
            out[i] = c - 0x30
            hdr.pos += 1
        else:
            hdr._skip()
            if hdr.pos >= n:
                raise PnmError(f"truncated raster: got {i} of {count} samples", hdr.pos)
            out[i] = hdr.integer("sample")
    return out


# --------------------------------------------------------------------------
# PNM encoding
# --------------------------------------------------------------------------


def write_pnm(image: Raster) -> bytes:
    """Encode as binary PBM (P4), PGM (P5) or PPM (P6); 1 bits are foreground."""
    if isinstance(image, BinaryMask):
        header = f"P4\n{image.width} {image.height}\n".encode("ascii")
        return header + np.packbits(image.bits, axis=1).tobytes()
    if isinstance(image, GrayImage):
        header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
        return header + image.pixels.tobytes()
    if isinstance(image, RgbImage):
        header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
        return header + image.pixels.tobytes()
    raise TypeError(f"cannot encode {type(image).__name__} as PNM")


def load_image(path) -> Raster:
    with open(path, "rb") as fh:
        return read_pnm(fh.read())


def save_image(path, image: Raster) -> None:
    with open(path, "wb") as fh:
        fh.write(write_pnm(image))


# --------------------------------------------------------------------------
# Color transform
# --------------------------------------------------------------------------


class Hsv(NamedTuple):
    """Hue in degrees ``[0, 360)`` (``None`` when undefined), s and v in ``[0, 1]``."""

    h: Optional[float]
    s: float
    v: float


def rgb_to_hsv(r: int, g: int, b: int) -> Hsv:
    """Hexcone RGB -> HSV for 8-bit channels.

    The arg-max channel picks the hue branch with priority R, G, B on ties.
    Hue is undefined only for black (MAX == 0); other grays get hue 0.
    """
    for c in (r, g, b):
        if not 0 <= c <= 255:
            raise ValueError(f"channel value {c} outside [0, 255]")
    rn, gn, bn = r / 255.0, g / 255.0, b / 255.0
    mx = max(rn, gn, bn)
    mn = min(rn, gn, bn)
    delta = mx - mn
    if mx == 0.0:
        return Hsv(None, 0.0, 0.0)
    s = delta / mx
    if delta == 0.0:
        return Hsv(0.0, s, mx)
    if rn == mx:
        h = 60.0 * ((gn - bn) / delta)
    elif gn == mx:
        h = 60.0 * ((bn - rn) / delta + 2.0)
    else:
        h = 60.0 * ((rn - gn) / delta + 4.0)
    if h < 0.0:
        h += 360.0
    if h >= 360.0:
        h -= 360.0
    return Hsv(h, s, mx)


def rgb_to_hsv_array(pixels: np.ndarray):
    """Vectorised :func:`rgb_to_hsv` over an ``(..., 3)`` uint8 array.

    Returns ``(h, s, v)`` float64 arrays with NaN marking undefined hue.
    Every element is bit-identical to the scalar function.
    """
    px = np.asarray(pixels)
    rn = px[..., 0] / 255.0
    gn = px[..., 1] / 255.0
    bn = px[..., 2] / 255.0
    mx = np.maximum(np.maximum(rn, gn), bn)
    mn = np.minimum(np.minimum(rn, gn), bn)
    delta = mx - mn

    black = mx == 0.0
    flat = delta == 0.0
    safe_mx = np.where(black, 1.0, mx)
    safe_delta = np.where(flat, 1.0, delta)

    s = np.where(black, 0.0, delta / safe_mx)
    h_r = 60.0 * ((gn - bn) / safe_delta)
    h_g = 60.0 * ((bn - rn) / safe_delta + 2.0)
    h_b = 60.0 * ((rn - gn) / safe_delta + 4.0)
    h = np.where(rn == mx, h_r, np.where(gn == mx, h_g, h_b))
    h = np.where(h < 0.0, h + 360.0, h)
    h = np.where(h >= 360.0, h - 360.0, h)
    h = np.where(flat, 0.0, h)
    h = np.where(black, np.nan, h)
    return h, s, mx


def hsv_preview(image: RgbImage) -> RgbImage:
    """Pack H, S, V into 8-bit channels for viewing; undefined hue shows as 0."""
    h, s, v = rgb_to_hsv_array(image.pixels)
    h = np.nan_to_num(h, nan=0.0)
    out = np.stack([h / 360.0 * 255.0, s * 255.0, v * 255.0], axis=-1)
    return RgbImage(np.clip(np.rint(out), 0, 255).astype(np.uint8))


def mask_to_gray(mask: BinaryMask) -> GrayImage:
    return GrayImage(np.where(mask.bits, 255, 0).astype(np.uint8))


def mask_to_rgb(mask: BinaryMask) -> RgbImage:
    return RgbImage(np.repeat(np.where(mask.bits, 255, 0).astype(np.uint8)[..., None], 3, axis=2))
