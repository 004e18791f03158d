"""Build script for the optional compiled geometry kernel.

The package works without the extension (a pure-Python kernel is selected at
import time); building it just makes the cell-division hot loop much faster.
If Cython or a C compiler is unavailable the install falls back gracefully.
"""

import os

from setuptools import setup

PYX = "src/stitgeo/kernels/_ckern.pyx"

ext_modules = []
if os.path.exists(PYX):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [PYX],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
