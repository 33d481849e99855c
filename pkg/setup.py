import setuptools

with open("README.md") as fh:
    long_description = fh.read()

setuptools.setup(
    name="pathgauge",  # This is the name of the package
    version="0.1.0",  # This is the release version
    author="pathgauge developers",
    description="Path-norms, Lipschitz bounds and generalization bounds for DAG ReLU networks",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(
        include=[
            "pathgauge",
            "pathgauge.schemas",
            "pathgauge.models",
            "pathgauge.core",
            "pathgauge.services",
            "pathgauge.utils",
            "pathgauge.data",
            "pathgauge.scripts",
            "pathgauge.scripts.commands",
        ]
    ),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
    ],
    python_requires=">=3.9",
    install_requires=[
        "fastapi",
        "uvicorn",
        "httpx",
        "pydantic>=2",
        "python-decouple",
        "PyYAML",
        "numpy",
        "networkx",
        "pandas",
        "pytest",
        "hypothesis",
    ],
    keywords="path-norm, relu, lipschitz, generalization bound",
    package_data={
        "pathgauge": [
            "data/*.*",
            "data/fixtures/*.*",
        ],
    },
    entry_points={
        "console_scripts": [
            "pathgauge=pathgauge.scripts.main:entrypoint",
        ],
    },
)
