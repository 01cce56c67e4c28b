"""Build script for the optional compiled DTW kernel.

The package is pure Python except for ``drivebench._dtw``, a Cython
translation of the dynamic-time-warping inner loop.  If no C compiler is
available the build degrades gracefully and the package falls back to the
pure-Python kernel at import time.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build extensions, but never fail the install over them."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - compiler-dependent
            warnings.warn(f"skipping compiled extensions: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - compiler-dependent
            warnings.warn(f"skipping {ext.name}: {exc}")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover - Cython is a build requirement
        return []
    ext = Extension("drivebench._dtw", ["src/drivebench/_dtw.pyx"])
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
