"""Build the compiled stepping kernels.

The extension is optional at runtime: twoscale_euler.kernels falls back
to the numpy implementations when the import fails, so a failed compile
only costs speed.
"""

from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [
            Extension(
                "twoscale_euler._speedups",
                ["src/twoscale_euler/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    ),
)
