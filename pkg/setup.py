from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "percoplane.kernels._speedups",
                ["src/percoplane/kernels/_speedups.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    # No Cython at build time: the package still works on the pure backend.
    ext_modules = []

setup(ext_modules=ext_modules)
