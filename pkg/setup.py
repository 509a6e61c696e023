from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="poqa",
    version="1.0.0",
    author="PO-QA contributors",
    description="Portfolio optimization with VQE and QAOA on a statevector simulator",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=("test", "test.*", "examples", "examples.*")),
    package_data={'poqa': ['data/*.csv']},
    install_requires=[
        'numpy>=1.22',
        'scipy>=1.8',
        'pandas>=1.5',
    ],
    entry_points={
        'console_scripts': [
            'poqa=poqa.cli.main:main',
        ],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires='>=3.8',
)
