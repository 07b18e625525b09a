"""
Setup configuration for hypeval
"""

from setuptools import setup, find_packages
from pathlib import Path

# Read README
README_PATH = Path(__file__).parent / "README.md"
long_description = README_PATH.read_text(encoding="utf-8") if README_PATH.exists() else ""

# Runtime requirements; the rest of requirements.txt is development tooling
RUNTIME = ("mpmath", "python-dotenv", "pydantic", "click")

REQUIREMENTS_PATH = Path(__file__).parent / "requirements.txt"
if REQUIREMENTS_PATH.exists():
    with open(REQUIREMENTS_PATH, 'r') as f:
        pinned = [line.split('#')[0].strip() for line in f if line.strip() and not line.startswith('#')]
    requirements = [req for req in pinned if req.split('==')[0] in RUNTIME]
else:
    requirements = [
        "mpmath>=1.3.0",
        "python-dotenv>=1.0.0",
        "pydantic>=2.0.0",
        "click>=8.0.0",
    ]

setup(
    name="hypeval",
    version="1.0.0",
    description="Exact and numeric verification of generalized Kummer, Gosper and Dixon evaluations",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests*", "examples*", "hypeval.test*"]),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    install_requires=requirements,
    extras_require={
        "dev": [
            "pytest>=7.0.0",
            "pytest-asyncio>=0.21.0",
            "pytest-cov>=4.0.0",
            "hypothesis>=6.0.0",
            "black>=22.0.0",
            "isort>=5.12.0",
            "mypy>=1.0.0",
            "flake8>=6.0.0",
            "coverage>=7.0.0"
        ],
    },
    entry_points={
        "console_scripts": [
            "hypeval=hypeval.cli:cli",
        ],
    },
    keywords=[
        "hypergeometric", "kummer", "dixon", "gosper", "thomae",
        "contiguous relations", "wz certificates", "exact arithmetic"
    ]
)
