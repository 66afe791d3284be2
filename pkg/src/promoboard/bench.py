"""Benchmark the compiled color kernels against the numpy fallback."""

from __future__ import annotations

import time

import numpy as np

from .colors import _kernels_np

try:
    from .colors import _kernels_cy
except ImportError:
    _kernels_cy = None


def _time(fn, *args, trials=5):
    best = float("inf")
    for _ in range(trials):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run_benchmark(pixels=1_000_000, trials=5, echo=print):
    rng = np.random.default_rng(7)
    rgb = rng.integers(0, 256, size=(pixels, 3), dtype=np.uint8)
    labs = _kernels_np.srgb_to_lab(rgb[:10000].astype(np.float64))
    ref = labs[0]

    backends = [("numpy", _kernels_np)]
    if _kernels_cy is not None:
        backends.append(("cython", _kernels_cy))
    else:
        echo("compiled kernels not built; benchmarking numpy fallback only")

    results = {}
    for name, mod in backends:
        results[name] = {
            "hist_rgb5": _time(mod.hist_rgb5, rgb, trials=trials),
            "srgb_to_lab": _time(mod.srgb_to_lab, rgb[:100000].astype(np.float64), trials=trials),
            "delta_e_many": _time(mod.delta_e_many, ref, labs, trials=trials),
        }

    for kernel in ("hist_rgb5", "srgb_to_lab", "delta_e_many"):
        line = f"{kernel:14s}"
        for name, _ in backends:
            line += f"  {name}: {results[name][kernel] * 1e3:8.2f} ms"
        if len(backends) == 2:
            ratio = results["numpy"][kernel] / results["cython"][kernel]
            line += f"  speedup x{ratio:.2f}"
        echo(line)

    if _kernels_cy is not None:
        same_hist = np.array_equal(_kernels_cy.hist_rgb5(rgb), _kernels_np.hist_rgb5(rgb))
        close_lab = np.allclose(
            _kernels_cy.srgb_to_lab(rgb[:1000].astype(np.float64)),
            _kernels_np.srgb_to_lab(rgb[:1000].astype(np.float64)),
        )
        echo(f"backend agreement: hist={'ok' if same_hist else 'MISMATCH'} "
             f"lab={'ok' if close_lab else 'MISMATCH'}")
    return results
