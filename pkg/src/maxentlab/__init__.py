"""Maximum-entropy occupation statistics.

Microstate counting, entropy functionals, constrained maximisation with
Lagrange multipliers, brute-force oracles and the log-log shape of the
Planck occupation law.
"""
__version__ = "0.1.0"

from .kinds import Kind
from .errors import (
    BracketError,
    ConvergenceError,
    DivergenceError,
    DomainError,
    InfeasibleError,
    MaxEntError,
    NonEvaluableError,
)
from .combinatorics import (
    EnsembleSpec,
    MicrostateCount,
    count_microstates,
    stirling_entropy,
    stirling_relative_error,
)
from .entropy import (
    OccupationDistribution,
    bosonic_entropy,
    exclusion_entropy,
    gibbs_entropy,
    low_occupation_deviation,
)
from .maxent import (
    EnergyLevels,
    LagrangeSolution,
    bosonic_occupation,
    canonical_distribution,
    exclusion_occupation,
    objective_value,
    planck_occupation,
    solve_alpha_beta,
    solve_beta,
    stationarity_check,
)
from .oracle import enumerate_occupations, grid_search_maxent, perturbation_test
from .analysis import (
    benford_frequencies,
    figure1_table,
    numeric_slope,
    planck_curve,
    rayleigh_jeans_gap,
)

__all__ = [
    "__version__",
    "benford_frequencies",
    "bosonic_entropy",
    "bosonic_occupation",
    "BracketError",
    "canonical_distribution",
    "ConvergenceError",
    "count_microstates",
    "DivergenceError",
    "DomainError",
    "EnergyLevels",
    "EnsembleSpec",
    "enumerate_occupations",
    "exclusion_entropy",
    "exclusion_occupation",
    "figure1_table",
    "gibbs_entropy",
    "grid_search_maxent",
    "InfeasibleError",
    "Kind",
    "LagrangeSolution",
    "low_occupation_deviation",
    "MaxEntError",
    "MicrostateCount",
    "NonEvaluableError",
    "numeric_slope",
    "objective_value",
    "OccupationDistribution",
    "perturbation_test",
    "planck_curve",
    "planck_occupation",
    "rayleigh_jeans_gap",
    "solve_alpha_beta",
    "solve_beta",
    "stationarity_check",
    "stirling_entropy",
    "stirling_relative_error",
]
