import os

from setuptools import setup

# FO2_PURE_PYTHON=1 skips the compiled kernel; the package then runs on the
# numpy fallback selected at import time.
ext_modules = []
if not os.environ.get("FO2_PURE_PYTHON"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/fo2small/_fastcore.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
