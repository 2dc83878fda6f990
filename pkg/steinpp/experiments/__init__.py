"""
Verification experiments for steinpp.
Each experiment kind is registered under its ExperimentKind value.
"""

import logging
from typing import Dict, Optional, Type

from steinpp.core.config.schema import ExperimentConfig, ExperimentKind
from steinpp.core.config.settings import SteinppSettings

from .base import Experiment, VerificationReport, VerificationRow, VerificationStatus, compare
from .bernoulli import BernoulliExperiment, verify_bernoulli
from .custom_palm import CustomPalmExperiment, verify_custom_palm
from .renewal import RenewalExperiment, verify_renewal
from .thinning import ThinningExperiment, verify_thinning
from .uniform import UniformPointsExperiment, verify_uniform

logger = logging.getLogger(__name__)

# Global experiment registry
_experiment_registry: Dict[str, Type[Experiment]] = {}


def register_experiment(name: str, experiment_class: Type[Experiment]) -> None:
    """Register a verification experiment"""
    _experiment_registry[name] = experiment_class


def get_experiment(name: str) -> Type[Experiment]:
    """Get a registered experiment by name"""
    if name not in _experiment_registry:
        raise ValueError(f"Experiment '{name}' not found")
    return _experiment_registry[name]


def list_experiments() -> Dict[str, Type[Experiment]]:
    """List all registered experiments"""
    return dict(_experiment_registry)


def build_experiment(config: ExperimentConfig, settings: Optional[SteinppSettings] = None) -> Experiment:
    return get_experiment(config.experiment.value)(config, settings)


def run_experiment(config: ExperimentConfig, settings: Optional[SteinppSettings] = None) -> VerificationReport:
    """Run the experiment a config names and return its report."""
    logger.info(f"Running {config.experiment.value} experiment with seed {config.seed}")
    return build_experiment(config, settings).run()


register_experiment(ExperimentKind.BERNOULLI.value, BernoulliExperiment)
register_experiment(ExperimentKind.UNIFORM_POINTS.value, UniformPointsExperiment)
register_experiment(ExperimentKind.THINNING.value, ThinningExperiment)
register_experiment(ExperimentKind.RENEWAL.value, RenewalExperiment)
register_experiment(ExperimentKind.CUSTOM_PALM.value, CustomPalmExperiment)

__all__ = [
    'Experiment',
    'VerificationReport',
    'VerificationRow',
    'VerificationStatus',
    'compare',
    'register_experiment',
    'get_experiment',
    'list_experiments',
    'build_experiment',
    'run_experiment',
    'verify_bernoulli',
    'verify_uniform',
    'verify_thinning',
    'verify_renewal',
    'verify_custom_palm',
]
