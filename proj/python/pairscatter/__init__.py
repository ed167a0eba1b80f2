"""Monte Carlo sampling and verification for correlated Compton scattering
of back-to-back 511 keV annihilation photons."""

from ._core import (
    DomainError,
    analytic_marginal,
    ansatz_density,
    big_f,
    big_g,
    constants,
    decomposition_check,
    estimate_modulation,
    expectation_pair,
    kn_density,
    lambda_approximation,
    marginals,
    model_names,
    naive_phi_density,
    pw_density_fixed,
    recommended_density,
    reduced_2d,
    rotated_singlet,
    run_pipeline,
    scan_ansatz,
    singlet,
    verify,
)

__all__ = [
    "DomainError",
    "analytic_marginal",
    "ansatz_density",
    "big_f",
    "big_g",
    "constants",
    "decomposition_check",
    "estimate_modulation",
    "expectation_pair",
    "kn_density",
    "lambda_approximation",
    "marginals",
    "model_names",
    "naive_phi_density",
    "pw_density_fixed",
    "recommended_density",
    "reduced_2d",
    "rotated_singlet",
    "run_pipeline",
    "scan_ansatz",
    "singlet",
    "verify",
]
