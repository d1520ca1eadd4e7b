import sys, os
from setuptools import setup, find_packages

version = {}
with open("respoly/version.py") as fp:
    exec(fp.read(), version)

base_reqs = [
    "numpy",
    "scipy",
]

setup(
    name="respoly",
    description="Residual polynomials, Widom factors and potential theory on finite unions of real intervals.",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    keywords="residual polynomials chebyshev remez widom factors green's function",
    license="MIT",
    version=version["__version__"],
    packages=find_packages(exclude=["tests",]),
    package_data={"respoly": ["schemas/*.json"]},
    tests_require=[ "pytest", "pytest-coverage", "jsonschema" ] + base_reqs,
    extras_require = {
        'full': ['tqdm']
    },
    install_requires=base_reqs,
    entry_points={
        "console_scripts": [ "respoly = respoly.cli:main" ]
    }
)
