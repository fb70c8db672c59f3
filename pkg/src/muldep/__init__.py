"""Exact tools for multiplicative dependence of rational values of
polynomials modulo finitely generated groups."""

__version__ = "0.1.0"

from ._kernels import BACKEND  # noqa: E402

__all__ = ["BACKEND", "__version__"]
