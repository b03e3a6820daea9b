"""Lie algebras generated by extremal elements, with exact arithmetic."""

from .diagram import SimpleGraph, classify, named_diagram
from .exactalg import FieldSpec, Fp
from .lfspace import ParameterSet, build_bracket, complete_parameters, membership_in_X
from .sandwich import compute_sandwich, verify_sandwich_theorems

__all__ = [
    "FieldSpec",
    "Fp",
    "ParameterSet",
    "SimpleGraph",
    "build_bracket",
    "classify",
    "complete_parameters",
    "compute_sandwich",
    "membership_in_X",
    "named_diagram",
    "verify_sandwich_theorems",
]
