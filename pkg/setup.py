#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import setuptools

from dmod_deform import _version

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="dmod-deform",
    version=f"{_version.__version__}",
    description=("Deformations of D-modules on elliptic curves: Ext groups, " +
                 "cover cohomology, cup products and the hull in exact " +
                 "arithmetic."),
    long_description=long_description,
    long_description_content_type="text/markdown",
    package_data={"dmod_deform": ["py.typed"]},
    packages=setuptools.find_packages(exclude=["examples", "examples.*"]),
    python_requires=">=3.8",
    install_requires=[
        "compatibility>=1.0.1",
        "sympy>=1.12",
        "userprovided>=0.9.4"],
    extras_require={
        "test": ["coverage", "pyfakefs", "pytest"]},
    entry_points={
        "console_scripts": ["dmod-deform = dmod_deform.cli:main"]},
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics"
    ],
)
