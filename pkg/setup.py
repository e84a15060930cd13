"""Build the optional Cython kernels.

If Cython or a C compiler is unavailable the package still installs and
``emprg.kernels`` falls back to the numpy implementation.
"""
import os
import sys

from setuptools import setup

# complex products without the C99 inf/nan recovery path
CFLAGS = [] if sys.platform == "win32" else ["-O3", "-fcx-limited-range"]

ext_modules = []
if not os.environ.get("EMPRG_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "emprg._kernels",
                    ["src/emprg/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=CFLAGS,
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
