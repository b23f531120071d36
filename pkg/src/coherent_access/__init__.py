"""Coherent-access microstate counting and the distributions it induces."""

from .counting import (
    LevelSpec,
    MacrostateSpec,
    binomial,
    coherent_degeneracy,
    distinguishable_count,
    enumerate_coherent_sequences,
    macrostate_weight,
    microstate_count,
    total_omega,
)
from .distributions import (
    DiscreteDistribution,
    ExponentSeries,
    epsilon_star,
    factorization_residual,
    modified_boltzmann_weight,
    modified_bose_einstein,
    normalize,
    partition_function,
)
from .errors import ConvergenceError, DomainError, InfeasibleMomentsError
from .maxent import MomentConstraints, MultiplierSolution, crosscheck_series, moments, solve_multipliers
from .tsallis import (
    QParams,
    nonadditivity_gap,
    q_expectation,
    q_exponential_weight,
    q_series_coefficient,
    series_vs_q_residual,
    tsallis_entropy,
)

__version__ = "0.1.0"
