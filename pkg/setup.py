"""Build the optional compiled kernels.

The package works without them: ``trex.succinct`` falls back to the
pure-Python implementation when the extension is missing.
"""
import os
import platform

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("TREX_NO_EXT"):
    try:
        from Cython.Build import cythonize
        import numpy as np
    except ImportError:
        pass
    else:
        flags = ["-O3"]
        if platform.machine().lower() in ("x86_64", "amd64"):
            flags.append("-mpopcnt")
        ext = Extension(
            "trex.succinct._kernels",
            ["src/trex/succinct/_kernels.pyx"],
            include_dirs=[np.get_include()],
            extra_compile_args=flags,
            optional=True,
        )
        ext_modules = cythonize(
            [ext],
            language_level=3,
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )

setup(ext_modules=ext_modules)
