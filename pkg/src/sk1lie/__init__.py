"""Exact verification engine for commuting-wedge spans of Lie lattices."""

__version__ = "0.1.0"

from .chevalley import LatticeChoice, LieAlgebraData, build_chevalley, nilradical, scale, validate
from .exactlat import IntMatrix, SLocalRing, hnf, kernel_basis, relative_invariant_factors, snf, solve_over
from .kernelgen import certify, generators_nilpotent, generators_reductive
from .rootsys import RootSystemType, build
from .sk1 import build_congruence_algebra, build_counterexample, sk1_check

__all__ = [
    "IntMatrix",
    "SLocalRing",
    "hnf",
    "snf",
    "kernel_basis",
    "relative_invariant_factors",
    "solve_over",
    "RootSystemType",
    "build",
    "LatticeChoice",
    "LieAlgebraData",
    "build_chevalley",
    "nilradical",
    "scale",
    "validate",
    "generators_reductive",
    "generators_nilpotent",
    "certify",
    "build_congruence_algebra",
    "build_counterexample",
    "sk1_check",
]
