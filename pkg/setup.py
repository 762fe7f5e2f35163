from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:  # fallback kernels are selected at import time
    ext_modules = []
else:
    from setuptools import Extension

    ext = Extension("relkit.relalg._ckernels", ["src/relkit/relalg/_ckernels.pyx"], optional=True)
    ext_modules = cythonize([ext], language_level=3, quiet=True)

setup(ext_modules=ext_modules)
