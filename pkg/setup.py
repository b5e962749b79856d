import numpy as np
from setuptools import setup, Extension

# The compiled kernels are optional: if Cython or a C compiler is missing,
# the package falls back to cgmoments._purecore at import time.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "cgmoments._fastcore",
                ["src/cgmoments/_fastcore.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
