import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "camelot._ckernels",
        ["src/camelot/_ckernels.pyx"],
        include_dirs=[np.get_include(), "src/camelot"],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
