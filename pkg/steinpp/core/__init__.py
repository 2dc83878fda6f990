"""
Core components of steinpp: configurations, distances, count laws, samplers,
the renewal solver and the bound evaluators.
"""

from steinpp.core.carrier import Configuration, superpose, total_mass, variation_norm_diff
from steinpp.core.matching import MatchingResult, d1, d1_prime, match
from steinpp.core.count_dist import (CountDistribution, TotalVariation, binomial_counts,
                                     empirical_counts, poisson_binomial_counts, poisson_counts,
                                     tv_distance)
from steinpp.core.streams import SeededStream
from steinpp.core.processes import (FixedCountModel, IndicatorCoupling, IndicatorModel,
                                    PalmCoupling, PoissonCoupling, RenewalSpec)
from steinpp.core.renewal import RenewalSolution, check_lemma41, solve_renewal
from steinpp.core.bounds import BoundReport, ComponentMoments, IndependentMoments, Metric
from steinpp.core.exceptions import (
    SteinppError,
    ValidationError,
    ConfigError,
    ModelError,
    SolverError,
    FiniteMeanError,
    VerificationError,
)

__all__ = [
    "Configuration",
    "superpose",
    "total_mass",
    "variation_norm_diff",
    "MatchingResult",
    "d1",
    "d1_prime",
    "match",
    "CountDistribution",
    "TotalVariation",
    "binomial_counts",
    "empirical_counts",
    "poisson_binomial_counts",
    "poisson_counts",
    "tv_distance",
    "SeededStream",
    "FixedCountModel",
    "IndicatorCoupling",
    "IndicatorModel",
    "PalmCoupling",
    "PoissonCoupling",
    "RenewalSpec",
    "RenewalSolution",
    "check_lemma41",
    "solve_renewal",
    "BoundReport",
    "ComponentMoments",
    "IndependentMoments",
    "Metric",
    # Exceptions
    "SteinppError",
    "ValidationError",
    "ConfigError",
    "ModelError",
    "SolverError",
    "FiniteMeanError",
    "VerificationError",
]
