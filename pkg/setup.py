import os

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled kernels are optional: hopflab falls back to the NumPy
# implementations at import time if the extension is absent.
if cythonize is None or os.environ.get("HOPFLAB_SKIP_EXT"):
    extensions = []
else:
    extensions = cythonize(
        [
            Extension(
                "hopflab._kernels",
                ["src/hopflab/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )

setup(ext_modules=extensions)
