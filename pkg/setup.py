#!/usr/bin/env python

from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="polyion",
    version="0.1.0",
    description="Rotational-state readout and preparation of trapped polyatomic molecular ions",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=("tests", "examples", "examples.*")),
    package_data={"polyion": ["data/species/*.json", "data/trap/*.json"]},
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.20.0",
        "scipy>=1.7.0",
    ],
    extras_require={
        "test": [
            "pytest>=7.0",
            "sympy>=1.9",
        ],
    },
    entry_points={
        "console_scripts": [
            "polyion=polyion.cli.main:main",
        ],
    },
)
