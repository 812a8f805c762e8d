from setuptools import setup, find_packages

with open("README.rst", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="reebli",
    version="0.1",
    description="Labeled interleaving distances of Reeb graphs, contour trees "
                "and merge trees",
    long_description=long_description,
    long_description_content_type="text/x-rst",
    license="GPL3+",
    classifiers=[
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3.8",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    packages=find_packages(exclude=["tests"]),
    python_requires=">=3.8",
    install_requires=[
        "networkx>=2.6",
        "numpy>=1.20",
    ],
    extras_require={
        "test": ["pytest", "hypothesis"],
    },
    entry_points={
        "console_scripts": ["reebli = reebli.cli:main"],
    },
)
