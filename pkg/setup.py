"""Build script: compiles the optional speedup extension for the hot kernels.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed compile downgrades to a warning instead of
aborting the install.
"""

import os
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any toolchain failure is non-fatal
            warnings.warn(f"speedup extension skipped: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"speedup extension {ext.name} skipped: {exc}")


extensions = []
if not os.environ.get("SQLIBENCH_PURE"):
    try:
        from Cython.Build import cythonize

        extensions = cythonize(
            [
                Extension(
                    "sqlibench.kernels._speedups",
                    sources=["src/sqlibench/kernels/_speedups.pyx"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        warnings.warn("Cython not available; installing with pure-Python kernels")

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
