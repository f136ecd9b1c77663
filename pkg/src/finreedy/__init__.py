"""Exact computations with finite Reedy categories and finite Set-valued diagrams."""

from .fincat import CategoryError, FinCategory, ValidationReport, validate_category
from .library import builtin
from .reedy import ReedyStructure, reedy_factorize, validate_reedy
from .setfun import DiagramError, FinSet, SetBifunctor, SetNatTrans, SetValuedFunctor

__all__ = [
    "CategoryError",
    "DiagramError",
    "FinCategory",
    "FinSet",
    "ReedyStructure",
    "SetBifunctor",
    "SetNatTrans",
    "SetValuedFunctor",
    "ValidationReport",
    "builtin",
    "reedy_factorize",
    "validate_category",
    "validate_reedy",
]

__version__ = "0.1.0"
