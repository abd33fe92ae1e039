"""Builds the optional compiled row-reduction kernel.

The package is fully functional without it: ``super2vec.backend`` falls
back to the pure-python kernels when the extension is absent or fails to
build.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/super2vec/_kernels.pyx"], language_level=3
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
