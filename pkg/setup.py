"""Build script: compiles the optional accelerator extension.

The package is fully functional without the extension (modsup.kernels falls
back to the pure-Python twin), so a failing C build must not fail the install.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator if possible, otherwise install pure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"modsup: skipping compiled kernels ({exc!r}); "
                  "the pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"modsup: failed to build {ext.name} ({exc!r}); "
                  "the pure-Python fallback will be used")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [Extension("modsup._ckernels", ["src/modsup/_ckernels.pyx"])],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
