"""Numpy fallback kernels; same contracts as the compiled versions."""

import numpy as np

BACKEND = "numpy"

# sRGB -> XYZ (D65) matrix and reference white
_M = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_WHITE = np.array([0.95047, 1.0, 1.08883])
_DELTA = 6.0 / 29.0


def hist_rgb5(pixels):
    """32768-bin histogram over 5-bit-per-channel RGB.

    pixels: uint8 array of shape (n, 3). Bin index is r5<<10 | g5<<5 | b5.
    """
    p = np.asarray(pixels, dtype=np.uint8) >> 3
    idx = (
        p[:, 0].astype(np.int64) << 10
        | p[:, 1].astype(np.int64) << 5
        | p[:, 2].astype(np.int64)
    )
    return np.bincount(idx, minlength=32768).astype(np.int64)


def srgb_to_lab(rgb):
    """Convert (n, 3) 8-bit sRGB values to CIELAB (D65, 2 degree observer)."""
    c = np.asarray(rgb, dtype=np.float64) / 255.0
    lin = np.where(c > 0.04045, ((c + 0.055) / 1.055) ** 2.4, c / 12.92)
    xyz = lin @ _M.T / _WHITE
    f = np.where(xyz > _DELTA**3, np.cbrt(xyz), xyz / (3 * _DELTA**2) + 4.0 / 29.0)
    lab = np.empty_like(xyz)
    lab[:, 0] = 116.0 * f[:, 1] - 16.0
    lab[:, 1] = 500.0 * (f[:, 0] - f[:, 1])
    lab[:, 2] = 200.0 * (f[:, 1] - f[:, 2])
    return lab


def delta_e_many(lab_ref, labs):
    """CIE76 distance from one Lab point to each row of labs."""
    ref = np.asarray(lab_ref, dtype=np.float64)
    diff = np.asarray(labs, dtype=np.float64) - ref
    return np.sqrt(np.sum(diff * diff, axis=1))
