"""Gaussian states in a lossy thermal channel: invariants, Williamson data and optimal control."""

from .core import (
    BathParams,
    apply_symplectic,
    is_symplectic,
    is_valid_covariance,
    omega,
    squeezer,
    thermal,
    two_mode_squeezed,
    vacuum,
)
from .dynamics import (
    ControlAction,
    Scenario,
    Trajectory,
    evolve,
    optimal_control,
    run_scenario,
    t_cool,
    t_free_single_mode,
    t_heat,
)
from .entanglement import Bipartition, partial_transpose, sigma_tilde_indicator, sigma_tilde_rate
from .errors import (
    ContractError,
    DomainError,
    GaussRelaxError,
    InvalidDimensionError,
    NotSymplecticError,
    NumericalError,
    UnphysicalStateError,
    WrongDirectionError,
)
from .invariants import invariant_rate, purity, symplectic_eigenvalues, theta, thetas
from .trace_opt import bistochastic_extremes, trace_inf, trace_sup, zeta_minus, zeta_plus
from .williamson import euler_svd, squeezing_measure, williamson

__all__ = [
    "apply_symplectic",
    "BathParams",
    "Bipartition",
    "bistochastic_extremes",
    "ContractError",
    "ControlAction",
    "DomainError",
    "euler_svd",
    "evolve",
    "GaussRelaxError",
    "InvalidDimensionError",
    "invariant_rate",
    "is_symplectic",
    "is_valid_covariance",
    "NotSymplecticError",
    "NumericalError",
    "omega",
    "optimal_control",
    "partial_transpose",
    "purity",
    "run_scenario",
    "Scenario",
    "sigma_tilde_indicator",
    "sigma_tilde_rate",
    "squeezer",
    "squeezing_measure",
    "symplectic_eigenvalues",
    "t_cool",
    "t_free_single_mode",
    "t_heat",
    "thermal",
    "theta",
    "thetas",
    "trace_inf",
    "trace_sup",
    "Trajectory",
    "two_mode_squeezed",
    "UnphysicalStateError",
    "vacuum",
    "williamson",
    "WrongDirectionError",
    "zeta_minus",
    "zeta_plus",
]

__version__ = "0.1.0"
