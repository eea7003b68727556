"""Build hook for the optional compiled kernel.

Metadata lives in pyproject.toml.  Without Cython the package installs
pure Python and the kernel falls back at import.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("ordcorners._ckernel", ["src/ordcorners/_ckernel.pyx"], extra_compile_args=["-O2"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
