"""
Tests for count laws and total variation
"""

import math

import numpy as np
import pandas as pd
import pytest

from steinpp.core.count_dist import (
    CountDistribution,
    binomial_counts,
    empirical_counts,
    poisson_binomial_counts,
    poisson_counts,
    tv_distance,
)
from steinpp.core.exceptions import ValidationError
from steinpp.core.streams import SeededStream
from tests.oracles import brute_poisson_binomial


def test_poisson_truncation():
    """Stored mass plus the tail bound is one and the tail is below 1e-12."""
    law = poisson_counts(3.0)
    assert law.tail_bound < 1e-12
    assert law.pmf.sum() + law.tail_bound == pytest.approx(1.0, abs=1e-12)
    assert law.mean == pytest.approx(3.0, abs=1e-9)
    assert law.variance == pytest.approx(3.0, abs=1e-8)
    assert poisson_counts(0.0).pmf.tolist() == [1.0]


def test_poisson_fixed_cutoff():
    law = poisson_counts(2.0, cutoff=3)
    assert law.support_max == 3
    assert law.tail_bound == pytest.approx(1.0 - law.pmf.sum())


def test_poisson_binomial_matches_enumeration():
    rng = np.random.default_rng(11)
    for _ in range(20):
        p = rng.random(int(rng.integers(1, 9)))
        np.testing.assert_allclose(poisson_binomial_counts(p).pmf, brute_poisson_binomial(p), atol=1e-12)


def test_poisson_binomial_edge_cases():
    assert poisson_binomial_counts([]).pmf.tolist() == [1.0]
    assert poisson_binomial_counts([1.0, 1.0]).prob(2) == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        poisson_binomial_counts([0.5, 1.2])


def test_binomial_counts():
    law = binomial_counts(10, 0.3)
    assert law.mean == pytest.approx(3.0)
    np.testing.assert_allclose(law.pmf, poisson_binomial_counts([0.3] * 10).pmf, atol=1e-12)
    with pytest.raises(ValidationError):
        binomial_counts(-1, 0.5)


def test_empirical_counts():
    law = empirical_counts([0, 1, 1, 3])
    assert law.pmf.tolist() == [0.25, 0.5, 0.0, 0.25]
    assert law.sample_size == 4
    with pytest.raises(ValidationError):
        empirical_counts([])
    with pytest.raises(ValidationError):
        empirical_counts([0.5, 1])


def test_invalid_pmf():
    with pytest.raises(ValidationError):
        CountDistribution(np.array([0.5, 0.4]))
    with pytest.raises(ValidationError):
        CountDistribution(np.array([1.2, -0.2]))


def test_tv_point_mass_against_poisson():
    """TV(delta_1, Po(1)) = 1 - 1/e."""
    tv = tv_distance(CountDistribution(np.array([0.0, 1.0])), poisson_counts(1.0))
    assert tv.value == pytest.approx(1.0 - math.exp(-1.0), abs=1e-9)
    assert tv.error_bar < 1e-12
    assert float(tv) == tv.value


def test_tv_properties():
    a = poisson_binomial_counts([0.1, 0.2, 0.3])
    b = poisson_counts(0.6)
    assert tv_distance(a, b).value == pytest.approx(tv_distance(b, a).value)
    assert tv_distance(a, a).value == 0.0
    assert 0.0 <= tv_distance(a, b).value <= 1.0


def test_bootstrap_halfwidth():
    """Half-widths are reproducible and shrink with the sample size."""
    rng = np.random.default_rng(5)
    small = empirical_counts(rng.poisson(1.0, 1000))
    large = empirical_counts(rng.poisson(1.0, 100_000))
    stream = SeededStream(1)
    first = small.tv_halfwidth(stream, resamples=200)
    assert first == small.tv_halfwidth(stream, resamples=200)
    assert large.tv_halfwidth(stream, resamples=200) < first
    with pytest.raises(ValidationError):
        poisson_counts(1.0).tv_halfwidth(stream)


def test_csv_export(tmp_path):
    path = tmp_path / "counts.csv"
    poisson_counts(1.0).to_csv(path)
    frame = pd.read_csv(path, dtype={"k": str})
    assert frame["k"].iloc[0] == "0"
    assert frame["k"].iloc[-1] == "tail_bound"


def test_poisson_truncation_is_monotone():
    """Raising the cutoff keeps the stored entries and only shrinks the tail bound."""
    for lam in (0.5, 3.0, 12.0):
        for k in (0, 2, 10):
            short = poisson_counts(lam, cutoff=k)
            longer = poisson_counts(lam, cutoff=k + 5)
            np.testing.assert_allclose(longer.pmf[:k + 1], short.pmf, rtol=1e-14, atol=0)
            assert longer.tail_bound < short.tail_bound


@pytest.mark.slow
def test_bootstrap_halfwidth_covers_exact_tv():
    """TV between 1e5 Po(3) draws and Po(3) stays below the bootstrap half-width in 95 of 100 seeds."""
    exact = poisson_counts(3.0)
    covered = 0
    for seed in range(100):
        law = empirical_counts(np.random.default_rng(seed).poisson(3.0, 100_000))
        halfwidth = law.tv_halfwidth(SeededStream(seed).spawn("bootstrap"), resamples=200)
        covered += tv_distance(law, exact).value <= halfwidth
    assert covered >= 95


def test_mass_tolerance_scales_with_support():
    """The 1e-12 mass tolerance is allowed per stored entry."""
    pmf = np.full(1000, 1e-3)
    pmf[0] += 5e-11
    assert CountDistribution(pmf).support_max == 999
    with pytest.raises(ValidationError):
        CountDistribution(np.array([1.0 + 5e-11]))
    with pytest.raises(ValidationError):
        CountDistribution(np.array([0.5, 0.5 + 5e-11]))
