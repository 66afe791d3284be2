"""Dominant-color extraction and perceptual color distance.

Pure functions over decoded RGB rasters; image decoding lives in the
corpus module. The hot loops (histogram accumulation, Lab conversion)
run in a compiled extension when available, with a numpy fallback
selected at import (see ``KERNEL_BACKEND``).
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import BACKEND as KERNEL_BACKEND
from ._kernels import delta_e_many, srgb_to_lab
from .mmcq import quantize_pixels

DEFAULT_PALETTE_SIZE = 10
MAX_QUANTIZE_EDGE = 256


@dataclass(frozen=True)
class RgbColor:
    r: int
    g: int
    b: int

    def __post_init__(self):
        for v in (self.r, self.g, self.b):
            if not 0 <= v <= 255:
                raise ValueError(f"channel out of range: {(self.r, self.g, self.b)}")

    def as_tuple(self):
        return (self.r, self.g, self.b)


@dataclass(frozen=True)
class Palette:
    """Quantized palette, ordered by pixel population descending."""

    entries: tuple  # of (RgbColor, population)

    def __post_init__(self):
        pops = [p for _, p in self.entries]
        if any(p <= 0 for p in pops):
            raise ValueError("palette populations must be positive")
        if pops != sorted(pops, reverse=True):
            raise ValueError("palette must be ordered by population")


def _as_pixel_array(pixels):
    arr = np.asarray(pixels, dtype=np.uint8)
    if arr.ndim == 3:
        arr = arr.reshape(-1, arr.shape[-1])
    if arr.ndim != 2 or arr.shape[-1] != 3 or arr.shape[0] == 0:
        raise ValueError("empty image")
    return arr


def downscale(raster, max_edge=MAX_QUANTIZE_EDGE):
    """Nearest-neighbor downscale of an (h, w, 3) raster to max_edge."""
    arr = np.asarray(raster, dtype=np.uint8)
    if arr.ndim != 3:
        return arr
    h, w = arr.shape[:2]
    long_edge = max(h, w)
    if long_edge <= max_edge:
        return arr
    step = -(-long_edge // max_edge)  # ceil
    return arr[::step, ::step]


def quantize_palette(pixels, palette_size=DEFAULT_PALETTE_SIZE):
    """Modified-median-cut palette at 5 bits/channel, fully deterministic."""
    if not 1 <= palette_size <= 16:
        raise ValueError(f"palette_size must be in 1..16, got {palette_size}")
    arr = np.asarray(pixels, dtype=np.uint8)
    if arr.ndim == 3:
        arr = downscale(arr)
    arr = _as_pixel_array(arr)
    entries = quantize_pixels(arr, palette_size)
    return Palette(tuple((RgbColor(*c), pop) for c, pop in entries))


def dominant_color(pixels):
    """Highest-population entry of the default 10-color palette."""
    return quantize_palette(pixels, DEFAULT_PALETTE_SIZE).entries[0][0]


def to_lab(color):
    """CIELAB (D65) coordinates of one RgbColor."""
    return srgb_to_lab(np.array([color.as_tuple()], dtype=np.float64))[0]


def delta_e(a, b):
    """CIE76 distance between two colors in CIELAB."""
    labs = srgb_to_lab(np.array([a.as_tuple(), b.as_tuple()], dtype=np.float64))
    return float(delta_e_many(labs[0], labs[1:2])[0])


def delta_e_batch(ref, colors):
    """CIE76 distance from ref to each color in an iterable."""
    arr = np.array([c.as_tuple() for c in colors], dtype=np.float64)
    if arr.size == 0:
        return np.empty(0)
    labs = srgb_to_lab(arr)
    return delta_e_many(to_lab(ref), labs)
