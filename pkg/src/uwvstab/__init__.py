"""Stability toolkit for axisymmetric underwater-vehicle equilibria.

Layers, bottom up: model (full rigid-body equations and Casimirs),
reduction (symmetry-reduced chart and momentum levels), stability
(thresholds, spectra, formal stability), wpoly/normalform (invariant
polynomial algebra and Birkhoff normalization), periods (measured and
normal-form period comparison), integrator (exact-flow splitting with
optional momentum-preserving dissipation), and experiments/cli (batch
commands and their CSV/figure output).
"""

from .model import (BodyParams, ChartDomainError, EquilibriumSpec, FullState,
                    NUMERIC_BODY, ParameterError, casimirs, hamiltonian_full,
                    full_vector_field, momenta_from_velocities,
                    relative_equilibrium_state, validate_params,
                    velocities_from_momenta)
from .reduction import (ConsolidatedParams, DerivedCoeffs, MomentumLevel,
                        NotInGapError, Q_MAX, ReducedState, attitude_matrix,
                        consolidate_params, consolidated_hamiltonian,
                        derived_coeffs, reconstruct_full, reduced_field,
                        reduced_gradient, reduced_hamiltonian,
                        reduced_hamiltonian_vertical, so2_momentum)
from .stability import (SpectrumReport, StabilityClass, classify,
                        formal_stability_lambda_search, hopf_discriminant,
                        hopf_eigenvalues, kirchhoff_hopf_block,
                        krein_signature, linear_spectrum,
                        linearization_matrix, quadratic_hessian,
                        resonance_formal_stability, thresholds)
from .wpoly import InvariantPoly, QSqrt2, invariants_from_phase, \
    poisson_bracket_w
from .normalform import (ExpansionOrderError, NormalFormCoeffs,
                         ResonanceError, TwistReport, lie_normalize,
                         nf_coefficients, normal_form_terms,
                         taylor_invariant_expansion, twist_determinants)
from .periods import (NonPeriodicError, ZeroFrequencyError, angular_momentum,
                      linear_period, match_actions, measure_period,
                      nf_period, relative_energy)
from .integrator import (IntegratorConfig, SplitCoeffs, TrajectoryRecord,
                         flow_dissipation, flow_h0, flow_h1, flow_h2,
                         flow_h3, integrate, rk4_reference, step)
from .experiments import (ClassifyReport, ConfigError, ExperimentConfig,
                          PRESETS, build_config, cmd_classify, cmd_continue,
                          cmd_nfcheck, cmd_simulate, cmd_sweep, load_config)

__version__ = "0.1.0"

__all__ = [
    "BodyParams", "ChartDomainError", "EquilibriumSpec", "FullState",
    "NUMERIC_BODY", "ParameterError", "casimirs", "hamiltonian_full",
    "full_vector_field", "momenta_from_velocities",
    "relative_equilibrium_state", "validate_params",
    "velocities_from_momenta",
    "ConsolidatedParams", "DerivedCoeffs", "MomentumLevel", "NotInGapError",
    "Q_MAX", "ReducedState", "attitude_matrix", "consolidate_params",
    "consolidated_hamiltonian", "derived_coeffs", "reconstruct_full",
    "reduced_field", "reduced_gradient", "reduced_hamiltonian",
    "reduced_hamiltonian_vertical", "so2_momentum",
    "SpectrumReport", "StabilityClass", "classify",
    "formal_stability_lambda_search", "hopf_discriminant",
    "hopf_eigenvalues", "kirchhoff_hopf_block", "krein_signature",
    "linear_spectrum", "linearization_matrix", "quadratic_hessian",
    "resonance_formal_stability", "thresholds",
    "InvariantPoly", "QSqrt2", "invariants_from_phase", "poisson_bracket_w",
    "ExpansionOrderError", "NormalFormCoeffs", "ResonanceError",
    "TwistReport", "lie_normalize", "nf_coefficients", "normal_form_terms",
    "taylor_invariant_expansion", "twist_determinants",
    "NonPeriodicError", "ZeroFrequencyError", "angular_momentum",
    "linear_period", "match_actions", "measure_period", "nf_period",
    "relative_energy",
    "IntegratorConfig", "SplitCoeffs", "TrajectoryRecord",
    "flow_dissipation", "flow_h0", "flow_h1", "flow_h2", "flow_h3",
    "integrate", "rk4_reference", "step",
    "ClassifyReport", "ConfigError", "ExperimentConfig", "PRESETS",
    "build_config", "cmd_classify", "cmd_continue", "cmd_nfcheck",
    "cmd_simulate", "cmd_sweep", "load_config",
]
