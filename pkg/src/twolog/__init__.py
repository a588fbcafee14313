"""Certified lower bounds for the linear form b2*log(alpha) - b1*i*pi/2.

The package certifies, with outward-rounded interval arithmetic throughout,
lower bounds of the shape log|b2*log(alpha) - b1*i*pi/2| > -2.7704*a*h^2 for
algebraic alpha of modulus one that is not a root of unity, and hence lower
bounds for |arg(alpha^n)|.
"""

from .numerics import (
    DomainError,
    IndeterminateError,
    IntervalReal,
    Precision,
    DEFAULT_PRECISION,
)
from .algebraic import AlgebraicNumber, ComplexEnclosure, IntegerPolynomial

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "IndeterminateError",
    "IntervalReal",
    "Precision",
    "DEFAULT_PRECISION",
    "AlgebraicNumber",
    "ComplexEnclosure",
    "IntegerPolynomial",
    "__version__",
]
