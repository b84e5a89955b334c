"""Build script for the compiled kernel backend.

The extension is optional: if Cython or a C compiler is unavailable the
install still succeeds and the package falls back to the pure-Python
kernels at import time.

Float determinism matters here: no -ffast-math, and -ffp-contract=off so
the compiler cannot fuse multiply-adds. The compiled kernels must produce
bit-identical results to swarmbench._kernels.pyfallback.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "swarmbench._kernels._native",
                ["src/swarmbench/_kernels/_native.pyx"],
                extra_compile_args=["-O2", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    extensions = []

setup(ext_modules=extensions)
