"""Build script with an optional Cython extension.

The compiled GF(2) kernel is a pure accelerator: if Cython or a C
toolchain is missing, the install proceeds and the package falls back
to the pure-Python implementation in ``legsurg.gf2``.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Never fail the install over the accelerator extension."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: skipping compiled gf2 core ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: skipping {ext.name} ({exc})")


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except Exception:  # pragma: no cover - cython not installed
        return []
    return cythonize(
        [
            Extension(
                "legsurg._gf2core",
                ["src/legsurg/_gf2core.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
