"""Build the optional compiled kernels; the package falls back to numpy code without them."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("QWZETA_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "qwzeta._kernels",
                    ["src/qwzeta/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
