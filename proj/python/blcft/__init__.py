"""Free fields on bordered surfaces, chaos measures, and Liouville correlators."""

from ._blcft import (
    central_charge,
    charge_excess,
    config_hash_hex,
    dozz_covariance,
    fusion_predicted_exponent,
    green_neumann,
    markov_residual,
    q_parameter,
    run_experiment,
    seiberg_admissible,
    weyl_slopes,
    zero_mode_integral,
)

__all__ = [
    "central_charge",
    "charge_excess",
    "config_hash_hex",
    "dozz_covariance",
    "fusion_predicted_exponent",
    "green_neumann",
    "markov_residual",
    "q_parameter",
    "run_experiment",
    "seiberg_admissible",
    "weyl_slopes",
    "zero_mode_integral",
]
