"""Build script for the optional compiled kernel extension.

The package works without the extension (a pure-Python twin of every
kernel ships in treelayout.kernels._ref); when Cython and a C compiler
are available the hot grid-geometry loops get a compiled implementation
that is selected automatically at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "treelayout.kernels._fast",
                ["src/treelayout/kernels/_fast.pyx"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
