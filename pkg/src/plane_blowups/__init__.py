"""Exact computations on blow-ups of the projective plane at points."""

from ._backend import BACKEND
from .cones import ConfigurationTag, cone_generators, decompose_effective, enumerate_neg_one_classes, is_effective, is_nef
from .fatpoints import FatPointScheme, alpha_symbolic, contains_symbolic_in_power, regularity
from .lattice import DivisorClass, LatticeContext
from .seshadri import epsilon_exact, gamma_exact, lambda_L, prove_nef

__all__ = [
    "BACKEND", "ConfigurationTag", "DivisorClass", "FatPointScheme", "LatticeContext",
    "alpha_symbolic", "cone_generators", "contains_symbolic_in_power", "decompose_effective",
    "enumerate_neg_one_classes", "epsilon_exact", "gamma_exact", "is_effective", "is_nef",
    "lambda_L", "prove_nef", "regularity",
]
