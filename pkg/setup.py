"""Build script: compiles the optional Cython integrator core.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so any build failure here is downgraded to a
warning rather than aborting the install.
"""
import sys

from setuptools import Extension, setup


def extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError as exc:
        print(f"setup.py: Cython/NumPy unavailable ({exc}); "
              "building without the compiled core", file=sys.stderr)
        return []
    ext = Extension(
        "oscbath._core",
        sources=["src/oscbath/_core.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=extensions())
