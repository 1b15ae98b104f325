from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off keeps the compiled backend's double arithmetic
# bit-identical to the pure-Python backend (no FMA contraction), and
# -fno-builtin-sin/-cos stops GCC from fusing the Box-Muller sin/cos
# pair into glibc sincos, whose results differ from sin()/cos() by
# 1 ulp for some inputs.  Never add -ffast-math here.
extensions = [
    Extension(
        "tcslsim.rng._mtcore",
        ["src/tcslsim/rng/_mtcore.pyx"],
        extra_compile_args=[
            "-O3",
            "-ffp-contract=off",
            "-fno-builtin-sin",
            "-fno-builtin-cos",
            "-fno-builtin-sincos",
        ],
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
