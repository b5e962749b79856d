"""Class groups of imaginary quadratic fields, Heegner points, real-analytic
Eisenstein series, and moments of class-group L-functions.
"""

from cgmoments._core import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
