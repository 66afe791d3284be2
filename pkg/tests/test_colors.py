import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from promoboard.colors import (
    KERNEL_BACKEND,
    RgbColor,
    delta_e,
    delta_e_batch,
    dominant_color,
    downscale,
    quantize_palette,
)
from oracles import slow_mmcq

channel = st.integers(min_value=0, max_value=255)


def solid(color, size=(32, 32)):
    return np.full((size[1], size[0], 3), color, dtype=np.uint8)


class TestQuantize:
    def test_solid_red_single_entry(self):
        palette = quantize_palette(solid((255, 0, 0)), 10)
        assert len(palette.entries) == 1
        color, pop = palette.entries[0]
        assert pop == 32 * 32
        assert abs(color.r - 255) <= 8 and color.g <= 8 and color.b <= 8

    def test_bimodal_black_white(self):
        img = np.zeros((32, 32, 3), dtype=np.uint8)
        img[16:] = 255
        palette = quantize_palette(img, 2)
        assert len(palette.entries) == 2
        colors = sorted(c.as_tuple() for c, _ in palette.entries)
        assert all(v <= 8 for v in colors[0])
        assert all(v >= 247 for v in colors[1])

    @pytest.mark.parametrize("trial", range(20))
    def test_matches_exhaustive_oracle_on_noise(self, trial):
        rng = np.random.default_rng(1000 + trial)
        img = rng.integers(0, 256, size=(64, 64, 3), dtype=np.uint8)
        got = quantize_palette(img, 10)
        expected = slow_mmcq([tuple(p) for p in img.reshape(-1, 3)], 10)
        assert [(c.as_tuple(), pop) for c, pop in got.entries] == expected

    def test_oracle_on_small_palettes(self):
        rng = np.random.default_rng(5)
        img = rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
        for size in (1, 2, 3, 5, 16):
            got = quantize_palette(img, size)
            expected = slow_mmcq([tuple(p) for p in img.reshape(-1, 3)], size)
            assert [(c.as_tuple(), pop) for c, pop in got.entries] == expected

    def test_populations_sum_to_pixel_count(self):
        rng = np.random.default_rng(9)
        img = rng.integers(0, 256, size=(40, 40, 3), dtype=np.uint8)
        palette = quantize_palette(img, 8)
        assert sum(pop for _, pop in palette.entries) == 40 * 40

    def test_empty_image_rejected(self):
        with pytest.raises(ValueError, match="empty image"):
            quantize_palette(np.empty((0, 3), dtype=np.uint8), 4)

    @pytest.mark.parametrize("size", [0, 17, -1])
    def test_palette_size_bounds(self, size):
        with pytest.raises(ValueError):
            quantize_palette(solid((1, 2, 3)), size)

    def test_deterministic(self):
        rng = np.random.default_rng(3)
        img = rng.integers(0, 256, size=(50, 50, 3), dtype=np.uint8)
        assert quantize_palette(img, 10) == quantize_palette(img, 10)

    def test_downscale_long_edge(self):
        big = np.zeros((900, 300, 3), dtype=np.uint8)
        small = downscale(big)
        assert max(small.shape[:2]) <= 256


class TestDominantColor:
    def test_solid_blue(self):
        color = dominant_color(solid((0, 0, 255)))
        assert color.r <= 8 and color.g <= 8 and abs(color.b - 255) <= 8

    def test_majority_population_wins(self):
        img = np.full((100, 100, 3), (0, 200, 0), dtype=np.uint8)
        img[:10] = (200, 0, 0)
        color = dominant_color(img)
        assert color.g > 150 and color.r < 60

    def test_solid_colors_within_quantization_tolerance(self):
        rng = random.Random(42)
        for _ in range(50):
            target = (rng.randrange(256), rng.randrange(256), rng.randrange(256))
            got = dominant_color(solid(target))
            for a, b in zip(got.as_tuple(), target):
                assert abs(a - b) <= 8, (got, target)

    def test_noise_matches_oracle(self):
        rng = np.random.default_rng(77)
        img = rng.integers(0, 256, size=(64, 64, 3), dtype=np.uint8)
        expected = slow_mmcq([tuple(p) for p in img.reshape(-1, 3)], 10)[0][0]
        assert dominant_color(img).as_tuple() == expected


class TestDeltaE:
    def test_identity(self):
        c = RgbColor(12, 200, 99)
        assert delta_e(c, c) == 0.0

    @given(
        st.tuples(channel, channel, channel),
        st.tuples(channel, channel, channel),
    )
    @settings(max_examples=100, deadline=None)
    def test_symmetry_and_nonnegativity(self, a, b):
        ca, cb = RgbColor(*a), RgbColor(*b)
        assert delta_e(ca, cb) == pytest.approx(delta_e(cb, ca))
        assert delta_e(ca, cb) >= 0.0

    def test_black_white_matches_independent_lab(self):
        skimage_color = pytest.importorskip("skimage.color")
        lab = skimage_color.rgb2lab(
            np.array([[[0, 0, 0], [255, 255, 255]]], dtype=np.float64) / 255.0
        )[0]
        expected = float(np.linalg.norm(lab[0] - lab[1]))
        assert delta_e(RgbColor(0, 0, 0), RgbColor(255, 255, 255)) == pytest.approx(
            expected, abs=1e-2
        )

    def test_random_pairs_match_independent_lab(self):
        skimage_color = pytest.importorskip("skimage.color")
        rng = np.random.default_rng(4)
        pairs = rng.integers(0, 256, size=(50, 2, 3))
        for a, b in pairs:
            lab = skimage_color.rgb2lab(
                np.array([[a, b]], dtype=np.float64) / 255.0
            )[0]
            expected = float(np.linalg.norm(lab[0] - lab[1]))
            got = delta_e(RgbColor(*a), RgbColor(*b))
            assert got == pytest.approx(expected, abs=1e-2)

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(8)
        ref = RgbColor(10, 20, 30)
        colors = [RgbColor(*c) for c in rng.integers(0, 256, size=(20, 3))]
        batch = delta_e_batch(ref, colors)
        for got, color in zip(batch, colors):
            assert got == pytest.approx(delta_e(ref, color))


def test_kernel_backend_reported():
    assert KERNEL_BACKEND in ("cython", "numpy")


def test_backends_agree():
    from promoboard.colors import _kernels_np

    try:
        from promoboard.colors import _kernels_cy
    except ImportError:
        pytest.skip("compiled kernels not built")
    rng = np.random.default_rng(2)
    rgb = rng.integers(0, 256, size=(5000, 3), dtype=np.uint8)
    assert np.array_equal(_kernels_cy.hist_rgb5(rgb), _kernels_np.hist_rgb5(rgb))
    a = _kernels_cy.srgb_to_lab(rgb.astype(np.float64))
    b = _kernels_np.srgb_to_lab(rgb.astype(np.float64))
    assert np.allclose(a, b, atol=1e-9)
    assert np.allclose(
        _kernels_cy.delta_e_many(a[0], a), _kernels_np.delta_e_many(b[0], b)
    )
