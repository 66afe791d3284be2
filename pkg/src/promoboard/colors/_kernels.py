"""Kernel selection: compiled extension when present, numpy otherwise."""

try:
    from ._kernels_cy import BACKEND, delta_e_many, hist_rgb5, srgb_to_lab
except ImportError:
    from ._kernels_np import BACKEND, delta_e_many, hist_rgb5, srgb_to_lab

__all__ = ["BACKEND", "delta_e_many", "hist_rgb5", "srgb_to_lab"]
