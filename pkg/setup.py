"""Build script for the optional compiled kernel extension.

The package works without the extension (a pure-Python backend is selected
at import time); building it just makes the quadrature and mesh kernels fast.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "hrzero._backend._core",
                sources=["src/hrzero/_backend/_core.pyx"],
                extra_compile_args=["-O3"],
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
    extensions = []

setup(ext_modules=extensions)
