"""
Tests for configuration loading and settings
"""

import pytest

from steinpp.core.config.loader import ConfigLoader
from steinpp.core.config.schema import (DistributionKind, DistributionSpec, ExperimentKind, ModelKind,
                                        ModelSpec, RenewalParams)
from steinpp.core.config.settings import SteinppSettings
from steinpp.core.bounds import Metric
from steinpp.core.distributions import Exponential
from steinpp.core.exceptions import ConfigError, ModelError
from steinpp.core.processes import IndicatorCoupling, PoissonCoupling


@pytest.fixture
def loader():
    """Loader rooted at the repository configs."""
    return ConfigLoader()


def test_load_bernoulli(loader, config_dir):
    config = loader.load_experiment(config_dir / "bernoulli.json")
    assert config.experiment is ExperimentKind.BERNOULLI
    assert config.typed_params().p == [0.1] * 10
    assert config.seed == 42
    assert config.verification.bootstrap_resamples == 1000


def test_defaults_merge(loader, write_json):
    path = write_json("thin.json", {
        "experiment": "thinning",
        "params": {"base": {"kind": "fixed", "counts": [1]}},
        "seed": 1,
    })
    config = loader.load_experiment(path)
    params = config.typed_params()
    assert params.retention == [0.5, 0.25, 0.125]
    assert params.moment_replicates == 100_000
    assert config.metrics == [Metric.COUNT_TV, Metric.D2, Metric.PROCESS_TV]


def test_overrides(loader, config_dir):
    config = loader.load_experiment(config_dir / "bernoulli.json", seed=7, output_dir="elsewhere")
    assert config.seed == 7
    assert config.output_dir == "elsewhere"


def test_env_substitution(loader, write_json, monkeypatch):
    monkeypatch.setenv("STEINPP_TEST_OUT", "from-env")
    path = write_json("env.json", {
        "experiment": "uniform_points",
        "params": {"n": 11, "T": 1.0},
        "seed": 3,
        "output_dir": "${STEINPP_TEST_OUT}",
    })
    assert loader.load_experiment(path).output_dir == "from-env"


@pytest.mark.parametrize("data", [
    {"experiment": "bernoulli", "params": {"p": [0.1]}, "seed": 1, "colour": "red"},
    {"experiment": "bernoulli", "params": {"p": [0.1], "q": 2}, "seed": 1},
    {"experiment": "bernoulli", "params": {"p": [1.5]}, "seed": 1},
    {"experiment": "uniform_points", "params": {"n": 5, "T": 6}, "seed": 1},
    {"experiment": "nonsense", "seed": 1},
    {"experiment": "bernoulli", "params": {"p": [0.1]}},
])
def test_invalid_configs(loader, write_json, data):
    with pytest.raises(ConfigError):
        loader.load_experiment(write_json("bad.json", data))


def test_missing_file(loader, tmp_path):
    with pytest.raises(ConfigError):
        loader.load_experiment(tmp_path / "missing.json")


def test_unsupported_format(loader, tmp_path):
    path = tmp_path / "config.toml"
    path.write_text("seed = 1\n")
    with pytest.raises(ConfigError):
        loader.read(path)


def test_yaml_config(loader, config_dir):
    config = loader.load_experiment(config_dir / "runs.yaml")
    assert config.experiment is ExperimentKind.CUSTOM_PALM
    params = config.typed_params()
    assert params.model.kind is ModelKind.RUNS
    assert params.variant == "ld2"


def test_load_configuration(loader, config_dir, write_json):
    a = loader.load_configuration(config_dir / "a.json")
    assert a.to_list() == [[0.2, 1]]
    with pytest.raises(ConfigError):
        loader.load_configuration(write_json("neg.json", [[0.1, -1]]))


def test_stationary_distribution():
    spec = DistributionSpec(kind="stationary")
    assert spec.kind is DistributionKind.STATIONARY
    assert spec.build(inter_arrival=Exponential(2.0)) == Exponential(2.0)
    with pytest.raises(ModelError):
        spec.build()
    with pytest.raises(ValueError):
        DistributionSpec(kind="uniform", low=0.0)


def test_renewal_params_expand_copies():
    params = RenewalParams.model_validate({
        "T": 1.0,
        "processes": [
            {"F": {"kind": "exponential", "rate": 1.0}, "G": {"kind": "stationary"}, "copies": 3},
            {"F": {"kind": "deterministic", "value": 2.0}, "G": {"kind": "uniform", "low": 0.0, "high": 2.0}},
        ],
    })
    assert params.n == 4
    specs = params.build_specs()
    assert len(specs) == 4
    assert specs[0].F_T == pytest.approx(1 - 2.718281828459045 ** -1)
    assert specs[3].G_T == pytest.approx(0.5)
    with pytest.raises(ValueError):
        RenewalParams.model_validate({
            "T": 1.0,
            "processes": [{"F": {"kind": "stationary"}, "G": {"kind": "stationary"}}],
        })


def test_model_spec_builds():
    assert isinstance(ModelSpec(kind="poisson", lambdas=[0.5]).build_coupling(), PoissonCoupling)
    coupling = ModelSpec(kind="blocks", q=[0.1, 0.2], sizes=[2, 1]).build_coupling()
    assert isinstance(coupling, IndicatorCoupling)
    assert coupling.model.n == 3
    with pytest.raises(ModelError):
        ModelSpec(kind="fixed", counts=[1]).build_coupling()
    with pytest.raises(ValueError):
        ModelSpec(kind="runs", q=[0.1], n=3)


def test_settings_from_env(monkeypatch):
    monkeypatch.setenv("STEINPP_THREADS", "8")
    monkeypatch.setenv("STEINPP_CHUNK_SIZE", "128")
    settings = SteinppSettings()
    assert settings.threads == 8
    assert settings.chunk_size == 128
    monkeypatch.setenv("STEINPP_THREADS", "0")
    with pytest.raises(ValueError):
        SteinppSettings()
