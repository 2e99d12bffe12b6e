from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("nilcohom._rowred", ["src/nilcohom/_rowred.pyx"])],
        language_level=3,
    )
except ImportError:
    # The package works without the compiled kernel; linalg falls back to
    # the pure-Python row reducer.
    ext_modules = []

setup(ext_modules=ext_modules)
