"""CMake-driven build of the ambandit._core extension module.

setuptools invokes CMake for the extension only; pure-Python packaging comes
from pyproject.toml.  The CMake cache variable AMBANDIT_MODULE_DIR points the
compiled module at the staging directory setuptools expects.
"""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str, source_dir: str = "") -> None:
        super().__init__(name, sources=[])
        self.source_dir = os.fspath(Path(source_dir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        module_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        build_dir = Path(self.build_temp) / ext.name
        build_dir.mkdir(parents=True, exist_ok=True)

        configure = [
            "cmake",
            "-S",
            ext.source_dir,
            "-B",
            os.fspath(build_dir),
            f"-DAMBANDIT_MODULE_DIR={module_dir}",
            f"-DPython3_EXECUTABLE={sys.executable}",
            "-DCMAKE_BUILD_TYPE=Release",
        ]
        subprocess.run(configure, check=True)
        subprocess.run(
            ["cmake", "--build", os.fspath(build_dir), "--target", "_core"],
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("ambandit._core")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)
