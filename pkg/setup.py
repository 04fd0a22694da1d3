"""Build script. The Cython kernel extension is optional: if Cython is not
available, or the compile fails, the package installs anyway and falls back
to the pure-Python kernels at import time."""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that degrades to a warning instead of failing the install."""

    def run(self):
        try:
            super().run()
        except Exception as err:  # compiler missing, etc.
            warnings.warn(f"skipping optional extension build: {err}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as err:
            warnings.warn(f"skipping optional extension {ext.name}: {err}")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not installed; using pure-Python kernels")
        return []
    ext = Extension(
        "switchstab._kernels_cy",
        sources=["src/switchstab/_kernels_cy.pyx"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
