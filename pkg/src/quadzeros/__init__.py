"""Certified small zeros of quadratic forms over Q and F_p(t)."""

__version__ = "0.1.0"

from .errors import BoundFailure, PreconditionError, SchemaError, SearchBudgetExceeded
from .fields import QQ, FunctionField
from .heights import Height, Subspace, height_H, height_h, height_HH
from .polyalg import MultiPoly
from .quadspace import QuadForm, QuadSpace
from .smallzeros import (AvoidanceSystem, basis_outside, independent_zeros, isotropic_flags,
                         orth_basis_ff, quad1_zero, siegel_basis, small_zero_avoiding)

__all__ = [
    "AvoidanceSystem", "BoundFailure", "FunctionField", "Height", "MultiPoly",
    "PreconditionError", "QQ", "QuadForm", "QuadSpace", "SchemaError", "SearchBudgetExceeded",
    "Subspace", "basis_outside", "height_H", "height_HH", "height_h", "independent_zeros",
    "isotropic_flags", "orth_basis_ff", "quad1_zero", "siegel_basis", "small_zero_avoiding",
]
