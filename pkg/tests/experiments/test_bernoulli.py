"""
Tests for the Bernoulli process experiment
"""

import math

import pytest

from steinpp.core.bounds import Metric
from steinpp.core.config.settings import SteinppSettings
from steinpp.experiments import verify_bernoulli
from steinpp.experiments.base import VerificationStatus
from steinpp.experiments.bernoulli import BernoulliExperiment


@pytest.fixture
def config(make_config):
    """Ten indicators with p = 0.1."""
    return make_config("bernoulli", {"p": [0.1] * 10})


def test_bernoulli_rows(config, settings):
    report = verify_bernoulli(config, settings)
    assert [(row.metric, row.param) for row in report.rows] == [
        (Metric.COUNT_TV, "exact"),
        (Metric.D2, "exact"),
        (Metric.D2, "simulated"),
        (Metric.PROCESS_TV, "exact"),
        (Metric.PROCESS_TV, "coupling"),
    ]
    assert not report.failed
    exact = report.rows[0]
    assert exact.status is VerificationStatus.SATISFIED
    assert exact.bound == pytest.approx(0.0632121, abs=1e-7)
    assert exact.distance <= 0.063212
    assert report.details["lambda"] == pytest.approx(1.0)


def test_bernoulli_is_deterministic(config, settings):
    first = verify_bernoulli(config, settings)
    second = verify_bernoulli(config, SteinppSettings(threads=4, chunk_size=settings.chunk_size))
    assert first.model_dump_json() == second.model_dump_json()


def test_bernoulli_d2_not_applicable(make_config, settings):
    """lambda = max p_i: the d2 bound does not apply and the rows are skipped."""
    report = verify_bernoulli(make_config("bernoulli", {"p": [0.5]}, metrics=["d2"]), settings)
    assert all(row.status is VerificationStatus.SKIPPED for row in report.rows)
    assert "lambda > max p_i" in report.rows[0].note


def test_bernoulli_bounds_and_sample(config, settings, stream):
    experiment = BernoulliExperiment(config, settings)
    assert [b.formula_id for b in experiment.bounds()] == ["bernoulli.dtv", "bernoulli.d2", "bernoulli.dTV"]
    configuration = experiment.sample(stream)
    assert all(abs(x * 10 - round(x * 10)) < 1e-9 for x in configuration.positions)
    assert all(m == 1 for m in configuration.multiplicities)


def test_bernoulli_empty_model(make_config, settings):
    report = verify_bernoulli(make_config("bernoulli", {"p": []}, metrics=["dtv"], replicates=100), settings)
    row = report.rows[0]
    assert row.distance == 0.0
    assert row.bound == 0.0
    assert row.status is VerificationStatus.SATISFIED


def test_bernoulli_coupling_row(config, settings):
    """Count-law TV stays below the mismatch rate of the site-wise coupling."""
    report = verify_bernoulli(config, settings)
    row = [row for row in report.rows if row.param == "coupling"][0]
    assert row.metric is Metric.PROCESS_TV
    assert row.formula_id == "coupling"
    assert row.status is VerificationStatus.SATISFIED
    assert row.distance == report.details["exact_tv"]
    # Ten sites, each disagreeing with probability 0.1 (1 - e^-0.1).
    expected = 1.0 - (1.0 - 0.1 * (1.0 - math.exp(-0.1))) ** 10
    assert row.bound == pytest.approx(expected, abs=0.01)
    assert row.distance < row.bound
