"""Build script: compiles the optional mod-p elimination kernel.

The package is pure Python apart from ``arrcoh._fp_c``, a small Cython
extension accelerating dense elimination over prime fields.  If Cython or a
C compiler is unavailable the build degrades gracefully and the package
falls back to ``arrcoh._fp_py`` at import time.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/arrcoh/_fp_c.pyx"],
        compiler_directives={"language_level": "3", "embedsignature": True},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
