"""Build script for the optional compiled kernel.

The package works without the extension (a pure-numpy fallback is selected
at import time); the extension only accelerates the closest-classical-state
grid scans. Set SEPCORR_PURE_PYTHON=1 to skip the build.
"""

import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None and os.environ.get("SEPCORR_PURE_PYTHON") != "1":
    import numpy as np

    # -ffast-math is compile-only (not passed at link time) so it cannot
    # install the global FTZ handler; it is what lets gcc vectorize the
    # log2 passes through libmvec, which must then be linked explicitly.
    extensions = cythonize(
        [
            Extension(
                "sepcorr.kernels._fastgrid",
                ["src/sepcorr/kernels/_fastgrid.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3", "-march=native", "-ffast-math"],
                extra_link_args=["-lmvec", "-lm"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
