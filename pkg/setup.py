"""Build script: compiles the optional search-kernel extension.

The package is fully functional without the extension (a pure-Python
twin of every kernel is selected at import time), so compilation
failures are downgraded to a warning instead of aborting the install.
Set ARROWBENCH_NO_EXT=1 to skip the extension entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ARROWBENCH_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "arrowbench._kernels_c",
                    ["src/arrowbench/_kernels_c.pyx"],
                    optional=True,
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
