import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python fallback only
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "epsortho._kernels._ckernels",
                ["src/epsortho/_kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                # keep a*b + c unfused so results match the Python path bit for bit
                extra_compile_args=["-O3", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
