import os

from setuptools import Extension, setup

# BIMAP_PURE=1 skips the compiled core; the package then runs on the Python fallback.
ext_modules = []
if not os.environ.get("BIMAP_PURE"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("bimap._kernels", ["src/bimap/_kernels.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
