import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ARITHGRAPH_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        ext = Extension(
            "arithgraph._snfcore",
            ["src/arithgraph/_snfcore.pyx"],
            extra_compile_args=["-O2"],
        )
        ext.optional = True  # pure-Python fallback covers a failed build
        ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
