"""Spectral transforms of Aharonov-Bohm Hamiltonians with boundary conditions on the flux line."""

import json

from ._core import (
    ConfigError,
    ContractError,
    DomainError,
    MeasureQuadrature,
    Transform1D,
    TransformCoefficients,
    ac_density,
    atom_weight,
    bound_state_energy,
    bound_states,
    check_ids,
    chi_kappa,
    discretize,
    gauss_bump,
    theta_kappa,
    u_eigen,
    u_theta_eigen,
    w_eigen,
)
from ._core import run_suite_json as _run_suite_json


def run_suite(checks=(), negative_controls=False):
    """Runs the verification checks and returns the report as a list of dicts."""
    return json.loads(_run_suite_json(list(checks), negative_controls))


__all__ = [
    "ConfigError",
    "ContractError",
    "DomainError",
    "MeasureQuadrature",
    "Transform1D",
    "TransformCoefficients",
    "ac_density",
    "atom_weight",
    "bound_state_energy",
    "bound_states",
    "check_ids",
    "chi_kappa",
    "discretize",
    "gauss_bump",
    "run_suite",
    "theta_kappa",
    "u_eigen",
    "u_theta_eigen",
    "w_eigen",
]
