"""Builds the compiled enumeration kernel.

The extension is optional: without Cython (or a C compiler) the package
installs pure-Python and mlmimo.kernels falls back to the interpreted
enumeration backend. -ffp-contract=off keeps the compiled kernel's float
arithmetic identical to the pure backend (no FMA contraction).
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "mlmimo._enum_cy",
                ["src/mlmimo/_enum_cy.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
