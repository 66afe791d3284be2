"""Modified median cut quantization at 5 bits per channel.

Box splitting follows the classic scheme: split by population until 75%
of the requested palette is filled, then by population * volume. The cut
point sits at the median along the longest axis, nudged toward the
larger half. Everything is deterministic: tie-breaks are creation order
for box selection and channel order r > g > b for the split axis.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels

POPULATION_FRACTION = 0.75


@dataclass
class Box:
    """Inclusive 5-bit channel ranges plus cached statistics."""

    r0: int
    r1: int
    g0: int
    g1: int
    b0: int
    b1: int
    population: int
    order: int

    @property
    def volume(self):
        return (self.r1 - self.r0 + 1) * (self.g1 - self.g0 + 1) * (self.b1 - self.b0 + 1)

    @property
    def splittable(self):
        return self.population > 0 and self.volume > 1


def _box_hist(hist3d, box):
    return hist3d[box.r0 : box.r1 + 1, box.g0 : box.g1 + 1, box.b0 : box.b1 + 1]


def _shrink(hist3d, r0, r1, g0, g1, b0, b1, order):
    """Tighten ranges to occupied bins; returns None for an empty region."""
    sub = hist3d[r0 : r1 + 1, g0 : g1 + 1, b0 : b1 + 1]
    pop = int(sub.sum())
    if pop == 0:
        return None
    occ_r = np.flatnonzero(sub.sum(axis=(1, 2)))
    occ_g = np.flatnonzero(sub.sum(axis=(0, 2)))
    occ_b = np.flatnonzero(sub.sum(axis=(0, 1)))
    return Box(
        r0 + int(occ_r[0]),
        r0 + int(occ_r[-1]),
        g0 + int(occ_g[0]),
        g0 + int(occ_g[-1]),
        b0 + int(occ_b[0]),
        b0 + int(occ_b[-1]),
        pop,
        order,
    )


def _split(hist3d, box, next_order):
    """Median-cut the box along its longest axis into two shrunk boxes."""
    sides = (box.r1 - box.r0, box.g1 - box.g0, box.b1 - box.b0)
    axis = int(np.argmax(sides))  # argmax prefers r over g over b on ties
    marginal = _box_hist(hist3d, box).sum(axis=tuple(i for i in range(3) if i != axis))
    csum = np.cumsum(marginal)
    total = csum[-1]
    m = int(np.searchsorted(csum, total / 2.0))
    lo = (box.r0, box.g0, box.b0)[axis]
    hi = (box.r1, box.g1, box.b1)[axis]
    left, right = m, len(marginal) - 1 - m
    if left <= right:
        cut = min(hi - lo - 1, m + right // 2)
    else:
        cut = max(0, m - 1 - left // 2)
    cut += lo

    def ranges(a, b):
        r = [box.r0, box.r1, box.g0, box.g1, box.b0, box.b1]
        r[2 * axis], r[2 * axis + 1] = a, b
        return r

    one = _shrink(hist3d, *ranges(lo, cut), box.order)
    two = _shrink(hist3d, *ranges(cut + 1, hi), next_order)
    return [b for b in (one, two) if b is not None]


def quantize_hist(hist, palette_size):
    """Split the 32768-bin histogram into <= palette_size boxes.

    Returns (color, population) pairs ordered by population descending,
    colors as bin-center-weighted means.
    """
    hist3d = np.asarray(hist, dtype=np.int64).reshape(32, 32, 32)
    first = _shrink(hist3d, 0, 31, 0, 31, 0, 31, 0)
    boxes = [first]
    order = 1

    def grow(target, key):
        nonlocal order
        while len(boxes) < target:
            candidates = [b for b in boxes if b.splittable]
            if not candidates:
                return
            pick = max(candidates, key=lambda b: (key(b), -b.order))
            boxes.remove(pick)
            parts = _split(hist3d, pick, order)
            order += 1
            boxes.extend(parts)

    grow(max(1, round(POPULATION_FRACTION * palette_size)), lambda b: b.population)
    grow(palette_size, lambda b: b.population * b.volume)

    centers = np.arange(32, dtype=np.float64) * 8.0 + 4.0
    entries = []
    for box in boxes:
        sub = _box_hist(hist3d, box).astype(np.float64)
        w_r = sub.sum(axis=(1, 2)) @ centers[box.r0 : box.r1 + 1]
        w_g = sub.sum(axis=(0, 2)) @ centers[box.g0 : box.g1 + 1]
        w_b = sub.sum(axis=(0, 1)) @ centers[box.b0 : box.b1 + 1]
        color = tuple(int(round(v / box.population)) for v in (w_r, w_g, w_b))
        entries.append((color, box.population))
    entries.sort(key=lambda e: (-e[1], e[0]))
    return entries


def quantize_pixels(pixels, palette_size):
    return quantize_hist(_kernels.hist_rgb5(pixels), palette_size)
