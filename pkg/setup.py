"""Build hook for the optional Cython kernels.

The package works without them; ``bentdesign.kernels`` falls back to the
pure-Python implementations when the extension is missing.
"""
import os
import platform

from setuptools import setup

ext_modules = []
if os.environ.get("BENTDESIGN_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        flags = ["-O3"]
        # hardware popcount; every x86-64 CPU from the last decade has it
        if platform.machine().lower() in ("x86_64", "amd64") and os.environ.get("BENTDESIGN_PORTABLE") != "1":
            flags.append("-mpopcnt")
        ext_modules = cythonize(
            [
                Extension(
                    "bentdesign._kernels",
                    ["src/bentdesign/_kernels.pyx"],
                    extra_compile_args=flags,
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
