# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

from setuptools import setup

setup(
    name="pseudolay",
    version="0.1.0",
    description="Weakly supervised pseudo labels for document layout analysis",
    license="MIT",
    classifiers=[
        "Development Status :: 4 - Beta",
        "License :: OSI Approved :: MIT License",
    ],
    keywords="document layout analysis, weak supervision, OCR, named entities",
    packages=[
        "pseudolay",
        "pseudolay.readers",
        "pseudolay.tests",
        "pseudolay.util",
        "pseudolay.writers",
    ],
    install_requires=[
        "numpy",
        "pandas",
        "scipy",
    ],
    entry_points={"console_scripts": ["pseudolay = pseudolay.cli:main"]},
)
