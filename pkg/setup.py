import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; shamap._fallback is used at runtime
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("SHAMAP_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "shamap._core",
                ["src/shamap/_core.pyx"],
                include_dirs=[np.get_include()],
                # no FMA contraction: keeps results bit-identical to the numpy fallback
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
