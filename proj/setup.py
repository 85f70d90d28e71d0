import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

eigen = os.environ.get("EIGEN3_INCLUDE_DIR", "/usr/include/eigen3")

ext = Pybind11Extension(
    "ryscat._core",
    sources=[
        "python/bindings.cpp",
        "src/model.cpp",
        "src/greens.cpp",
        "src/tmatrix.cpp",
        "src/spectrum.cpp",
        "src/config.cpp",
    ],
    include_dirs=["include", "vendor", eigen],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
