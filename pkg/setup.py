import os

from setuptools import setup

# Compiled kernels are optional: LDAS_NO_EXT=1 installs the pure-python
# package and ldas.kernels falls back at import time.
if os.environ.get("LDAS_NO_EXT"):
    setup()
else:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = [
        Extension(
            "ldas.kernels._core",
            ["src/ldas/kernels/_core.pyx"],
            extra_compile_args=["-O3"],
        )
    ]
    setup(
        ext_modules=cythonize(
            extensions,
            compiler_directives={"language_level": "3"},
        )
    )
