"""
Configuration schema, loader and environment settings.
"""

from .loader import ConfigLoader
from .schema import (DistributionSpec, ExperimentConfig, ExperimentKind, ModelSpec,
                     RenewalProcessSpec, VerificationOptions)
from .settings import SteinppSettings, get_settings

__all__ = [
    "ConfigLoader",
    "DistributionSpec",
    "ExperimentConfig",
    "ExperimentKind",
    "ModelSpec",
    "RenewalProcessSpec",
    "SteinppSettings",
    "VerificationOptions",
    "get_settings",
]
