from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "grassint.kernels._core",
                ["src/grassint/kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    # No Cython toolchain: install with the pure-Python kernels only.
    ext_modules = []

setup(ext_modules=ext_modules)
