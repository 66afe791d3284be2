"""Builds the optional Cython color kernels.

The package works without the extension (a numpy fallback is selected at
import time), so any failure here downgrades to a pure-Python build
instead of aborting the install.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/promoboard/colors/_kernels_cy.pyx",
        language_level=3,
    )
    include_dirs = [numpy.get_include()]
except Exception as exc:  # pragma: no cover - build-env dependent
    print(f"promoboard: skipping compiled kernels ({exc})")
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
