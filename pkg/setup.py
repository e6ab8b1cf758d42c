import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "moditer._kernels",
                ["src/moditer/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # keep FP contraction off so both backends round identically
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
    # The package falls back to the pure-Python kernels at import time, so a
    # failed compile should not abort installation.
    for ext in ext_modules:
        ext.optional = True

setup(ext_modules=ext_modules)
