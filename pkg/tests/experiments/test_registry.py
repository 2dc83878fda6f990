"""
Tests for the experiment registry
"""

import pytest

from steinpp.core.config.schema import ExperimentKind
from steinpp.experiments import (BernoulliExperiment, build_experiment, get_experiment, list_experiments,
                                 register_experiment)
from steinpp.experiments import _experiment_registry


def test_all_kinds_registered():
    assert set(list_experiments()) == {kind.value for kind in ExperimentKind}
    assert get_experiment("bernoulli") is BernoulliExperiment


def test_unknown_experiment():
    with pytest.raises(ValueError, match="not found"):
        get_experiment("nonexistent")


def test_register_experiment(monkeypatch):
    monkeypatch.setattr("steinpp.experiments._experiment_registry", dict(_experiment_registry))

    class Replacement(BernoulliExperiment):
        pass

    register_experiment("bernoulli", Replacement)
    assert get_experiment("bernoulli") is Replacement


def test_build_experiment(make_config, settings):
    experiment = build_experiment(make_config("bernoulli", {"p": [0.1]}), settings)
    assert isinstance(experiment, BernoulliExperiment)
    assert experiment.name == "bernoulli"
    assert experiment.settings is settings
