"""
steinpp
Error bounds for Poisson process approximation of dependent superpositions,
with samplers, exact and simulated distances, and verification experiments.
"""

__version__ = "0.1.0"

from steinpp.core.carrier import Configuration
from steinpp.core.streams import SeededStream
from steinpp.core.bounds import BoundReport, Metric

__all__ = [
    "Configuration",
    "SeededStream",
    "BoundReport",
    "Metric",
]
