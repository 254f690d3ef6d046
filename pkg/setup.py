import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # sdist without Cython: the pure-Python fallback is used
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("RLAD_NO_EXTENSION"):
    ext_modules = cythonize(
        [
            Extension(
                "rlad._core",
                ["src/rlad/_core.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # no -ffast-math / -march=native: results must match the fallback bit for bit
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
