"""
Tests for the uniform points experiment
"""

import pytest

from steinpp.core.bounds import Metric
from steinpp.experiments import verify_uniform
from steinpp.experiments.base import VerificationStatus
from steinpp.experiments.uniform import UniformPointsExperiment


def test_uniform_points_report(make_config, settings):
    config = make_config("uniform_points", {"n": 101, "T": 10}, metrics=["dtv", "d2"], replicates=1)
    report = verify_uniform(config, settings)
    skipped, checked = report.rows
    assert skipped.metric is Metric.COUNT_TV
    assert skipped.status is VerificationStatus.SKIPPED
    assert checked.metric is Metric.D2
    assert checked.status is VerificationStatus.SATISFIED
    assert checked.bound == pytest.approx(0.6)
    assert 0 < report.details["tightness_ratio"] < 1


def test_uniform_points_single_point(make_config, settings):
    config = make_config("uniform_points", {"n": 1, "T": 0.5}, metrics=["d2"], replicates=1)
    experiment = UniformPointsExperiment(config, settings)
    assert experiment.bounds() == []
    row = experiment.run().rows[0]
    assert row.status is VerificationStatus.SKIPPED
    assert row.note == "bound needs n >= 2"


def test_uniform_points_sample(make_config, settings, stream):
    config = make_config("uniform_points", {"n": 20, "T": 2}, metrics=["d2"], replicates=1)
    configuration = UniformPointsExperiment(config, settings).sample(stream)
    assert configuration.total_mass <= 20
    assert all(0 <= x <= 1 for x in configuration.positions)
