import os

from setuptools import Extension, setup

# MTEVALKIT_PURE=1 skips the compiled kernels; the package falls back to
# the pure-Python implementations at import time.
ext_modules = []
if os.environ.get("MTEVALKIT_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("mtevalkit._kernels", ["src/mtevalkit/_kernels.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
