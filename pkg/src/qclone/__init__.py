"""Simulation and numerical verification of optimal universal N -> M qubit cloners."""

__version__ = "0.1.0"

from .bloch import Qubit, amplitudes, conjugate, orthogonal, sample_uniform
from .ccm import ccm_density_analytic, ccm_density_montecarlo, qcm_ccm_distance
from .optimality import build_A, lambda_max, optimal_bound
from .qcm import (
    alpha,
    clone,
    clone_density,
    error_distribution,
    fidelity_formula,
    single_clone_density,
)

__all__ = [
    "Qubit", "amplitudes", "conjugate", "orthogonal", "sample_uniform",
    "alpha", "clone", "clone_density", "single_clone_density", "error_distribution",
    "fidelity_formula", "ccm_density_analytic", "ccm_density_montecarlo", "qcm_ccm_distance",
    "build_A", "lambda_max", "optimal_bound",
]
