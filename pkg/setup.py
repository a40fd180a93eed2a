"""Build script: compiles the optional slot-loop extension.

The package works without the extension (the engine falls back to the
pure-Python loop), so a missing compiler or Cython is not fatal.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "toposched._kernel",
                ["src/toposched/_kernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
