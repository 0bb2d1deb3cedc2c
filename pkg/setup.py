import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("GRAEVMETRIC_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("graevmetric._kernels", ["src/graevmetric/_kernels.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
