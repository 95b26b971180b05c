"""Supersingular Hecke equidistribution experiments and an exact Satake
degree/norm calculus for GL_n over totally real fields."""

__version__ = "0.1.0"

from .ffpoly import DensePoly, FiniteFieldSpec  # noqa: F401
from .number_field import NumberFieldSpec, SplittingData  # noqa: F401
from .satake import GlobalOperatorSpec, HalfPowerLaurent, SymmetricMonomialSum  # noqa: F401
from .supersingular import HeckeMatrix, ModularPolynomial, SupersingularLocus  # noqa: F401
