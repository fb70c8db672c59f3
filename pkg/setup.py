"""Build the optional compiled kernels; the package works without them."""

import os
import sys

from setuptools import setup

ext_modules = []
if not os.environ.get("MULDEP_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "muldep._kernels._native",
                    ["src/muldep/_kernels/_native.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # no Cython or no compiler
        print(f"muldep: building without native kernels ({exc})", file=sys.stderr)
        ext_modules = []

setup(ext_modules=ext_modules)
