"""Exact rarefaction fans for the barotropic Euler system.

The package classifies one-dimensional Riemann data, builds the exact
rarefaction fan when it exists, runs a Rusanov finite-volume scheme on a
strip and measures the distance between the two with the relative entropy.
"""
__version__ = "0.1.0"

from .entropy import (State, certify, entropy_pair, relative_entropy, rei2_rhs,
                      total_relative_entropy)
from .eos import GammaLaw, TabulatedLaw, validate
from .errors import EulerFanError
from .field import FieldState, Grid
from .fvm import Perturbation, SimConfig, run
from .riemann import Regime, RiemannData, build_fan, classify, evaluate, solve_middle_state

__all__ = [
    "EulerFanError", "FieldState", "GammaLaw", "Grid", "Perturbation", "Regime",
    "RiemannData", "SimConfig", "State", "TabulatedLaw", "build_fan", "certify",
    "classify", "entropy_pair", "evaluate", "rei2_rhs", "relative_entropy", "run",
    "solve_middle_state", "total_relative_entropy", "validate",
]
