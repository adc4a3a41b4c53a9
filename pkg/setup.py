"""Build hook for the optional compiled kernels.

If Cython or a C compiler is unavailable the package still installs; the
pure-Python kernels are then selected at import time.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("PADICRED_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("padicred._kernels", ["src/padicred/_kernels.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print(f"padicred: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
