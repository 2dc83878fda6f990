"""
Fixtures for experiment tests.
"""

import pytest

from steinpp.core.config.schema import ExperimentConfig


@pytest.fixture
def make_config():
    """Build a validated ExperimentConfig with small defaults for fast runs."""
    def make(experiment, params, metrics=("dtv", "d2", "dTV"), replicates=20_000, seed=42, **extra):
        data = {
            "experiment": experiment,
            "params": params,
            "metrics": list(metrics),
            "replicates": replicates,
            "seed": seed,
            "verification": {"bootstrap_resamples": 200},
        }
        data.update(extra)
        return ExperimentConfig.model_validate(data)
    return make
