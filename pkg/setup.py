# Builds the optional compiled kernels; the package falls back to
# coreep._kernels_py when the extension is missing.
#   python setup.py build_ext --inplace

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    pass
else:
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "coreep._kernels",
                [os.path.join("src", "coreep", "_kernels.pyx")],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": 3},
    )


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing etc.
            print(f"warning: compiled kernels not built ({exc}); using Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: {ext.name} failed to build ({exc}); using Python fallback")


setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
