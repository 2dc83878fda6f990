"""
Tests for process samplers, indicator models and Palm couplings
"""

import numpy as np
import pytest

from steinpp.core.carrier import Configuration
from steinpp.core.distributions import Deterministic, Exponential, Uniform
from steinpp.core.exceptions import ModelError, ValidationError
from steinpp.core.processes import (
    FixedCountModel,
    IndicatorCoupling,
    IndicatorModel,
    PoissonCoupling,
    RenewalSpec,
    bernoulli_poisson_coupling,
    coupling_mismatch,
    fixed_location,
    renewal_counts,
    sample_bernoulli_process,
    sample_indicator_process,
    sample_palm_quadruple,
    sample_poisson_process,
    sample_renewal,
    sample_uniform_points_restriction,
    superposition_counts,
    thin,
    thin_counts,
    thinned_renewal_spec,
    uniform_points_counts,
)
from steinpp.core.streams import SeededStream


@pytest.fixture
def pair_model():
    """Five correlated pairs: indicators equal within each pair."""
    return IndicatorModel.blocks([0.1] * 5, [2] * 5)


# -- indicator models ------------------------------------------------------

def test_independent_model_grid_positions():
    m = IndicatorModel.independent([0.1, 0.2, 0.3, 0.4])
    np.testing.assert_allclose(m.positions, [0.25, 0.5, 0.75, 1.0])
    assert m.is_independent
    assert m.verified
    assert m.joint_moment(0, 1) == pytest.approx(0.02)
    assert m.covariance(0, 1) == pytest.approx(0.0)


def test_model_validation():
    """i must lie in A_i, A_i inside B_i, joint moments within [0, min p]."""
    law_model = IndicatorModel.independent([0.5, 0.5])
    with pytest.raises(ValidationError):
        IndicatorModel(law_model.p, (frozenset({1}), frozenset({1})), law_model.B, law_model.law)
    with pytest.raises(ValidationError):
        IndicatorModel(law_model.p, (frozenset({0, 1}), frozenset({1})), law_model.B, law_model.law)
    with pytest.raises(ValidationError):
        IndicatorModel(
            np.array([0.5, 0.5]), (frozenset({0, 1}),) * 2, (frozenset({0, 1}),) * 2,
            law_model.law, joint={(0, 1): 0.7})
    with pytest.raises(ValidationError):
        IndicatorModel.independent([1.5])


def test_blocks_model(pair_model):
    m = pair_model
    assert m.n == 10
    assert m.A[0] == frozenset({0, 1})
    assert m.joint_moment(0, 1) == pytest.approx(0.1)
    assert m.joint_moment(1, 0) == pytest.approx(0.1)
    assert m.covariance(0, 1) == pytest.approx(0.1 - 0.01)
    assert not m.is_independent
    draws = m.draw_indicators(np.random.default_rng(0), 1000)
    np.testing.assert_array_equal(draws[:, 0], draws[:, 1])


def test_runs_model():
    """I_i = J_i J_{i+1}: p_i = q^2, E I_i I_{i+1} = q^3, independent beyond lag one."""
    m = IndicatorModel.runs(6, 0.5)
    np.testing.assert_allclose(m.p, 0.25)
    assert m.joint_moment(2, 3) == pytest.approx(0.125)
    assert m.joint_moment(2, 4) == pytest.approx(0.0625)
    assert m.B[2] == frozenset({0, 1, 2, 3, 4})
    draws = m.draw_indicators(np.random.default_rng(1), 200_000)
    assert draws[:, 2].mean() == pytest.approx(0.25, abs=0.005)
    assert (draws[:, 2] & draws[:, 3]).mean() == pytest.approx(0.125, abs=0.005)


def test_missing_joint_moment_raises():
    m = IndicatorModel.custom([0.2, 0.2], [{0, 1}, {0, 1}], None, {},
                              lambda rng, size: rng.random((size, 2)) < 0.2)
    assert not m.verified
    with pytest.raises(ModelError):
        m.joint_moment(0, 1)


# -- samplers --------------------------------------------------------------

def test_poisson_process_sampler():
    c = sample_poisson_process(3.0, fixed_location(0.5), SeededStream(1))
    assert set(c.positions.tolist()) <= {0.5}
    totals = [sample_poisson_process(2.0, None, SeededStream(7, k)).total_mass for k in range(2000)]
    assert np.mean(totals) == pytest.approx(2.0, abs=0.15)
    with pytest.raises(ValidationError):
        sample_poisson_process(-1.0, None, SeededStream(1))


def test_samplers_are_deterministic():
    m = IndicatorModel.independent([0.5] * 20)
    s = SeededStream(99, 3)
    assert sample_bernoulli_process(m, s) == sample_bernoulli_process(m, s)
    assert sample_renewal(RenewalSpec(Exponential(5.0), Exponential(5.0), 1.0), s) == \
        sample_renewal(RenewalSpec(Exponential(5.0), Exponential(5.0), 1.0), s)


def test_bernoulli_sampler_positions(pair_model):
    m = IndicatorModel.independent([1.0, 0.0, 1.0, 0.0])
    c = sample_bernoulli_process(m, SeededStream(0))
    assert c.atoms == ((0.25, 1), (0.75, 1))
    with pytest.raises(ValidationError):
        sample_bernoulli_process(pair_model, SeededStream(0))
    assert sample_indicator_process(pair_model, SeededStream(0)).total_mass % 2 == 0


def test_uniform_points_restriction():
    assert sample_uniform_points_restriction(10, 0.0, SeededStream(1)) == Configuration.empty()
    c = sample_uniform_points_restriction(10, 10.0, SeededStream(1))
    assert c.total_mass == 10
    with pytest.raises(ValidationError):
        sample_uniform_points_restriction(10, 11.0, SeededStream(1))
    counts = uniform_points_counts(101, 10.0, 50_000, np.random.default_rng(2))
    assert counts.mean() == pytest.approx(10.0, abs=0.1)


def test_thinning():
    c = Configuration.from_atoms([[0.2, 50], [0.7, 50]])
    assert thin(c, 1.0, SeededStream(1)) == c
    assert thin(c, 0.0, SeededStream(1)) == Configuration.empty()
    kept = thin(c, 0.5, SeededStream(1))
    assert set(kept.positions.tolist()) <= {0.2, 0.7}
    assert kept.total_mass <= 100
    with pytest.raises(ValidationError):
        thin(c, 1.5, SeededStream(1))
    thinned = thin_counts(np.full(100_000, 4), 0.25, np.random.default_rng(3))
    assert thinned.mean() == pytest.approx(1.0, abs=0.02)


def test_fixed_count_model():
    m = FixedCountModel(np.array([1, 2]), positions=[0.5, 0.5])
    np.testing.assert_array_equal(m.draw_counts(np.random.default_rng(0), 3), [[1, 2]] * 3)
    assert m.sample(SeededStream(0)).atoms == ((0.5, 3),)
    with pytest.raises(ValidationError):
        FixedCountModel(np.array([-1]))


# -- renewal processes -----------------------------------------------------

def test_renewal_spec_validation():
    with pytest.raises(ValidationError):
        RenewalSpec(Exponential(1.0), Exponential(1.0), 0.0)
    with pytest.raises(ValidationError):
        RenewalSpec(Deterministic(0.0), Exponential(1.0), 1.0)


def test_poisson_renewal_counts():
    """Stationary exponential renewals count Poisson(rate T) points."""
    spec = RenewalSpec(Exponential(3.0), Exponential(3.0), 2.0)
    counts = renewal_counts(spec, 100_000, np.random.default_rng(4))
    assert counts.mean() == pytest.approx(6.0, abs=0.05)
    assert counts.var() == pytest.approx(6.0, abs=0.15)


def test_deterministic_renewal_counts():
    spec = RenewalSpec(Deterministic(0.25), Deterministic(0.125), 1.0)
    np.testing.assert_array_equal(renewal_counts(spec, 5, np.random.default_rng(0)), [4] * 5)
    c = sample_renewal(spec, SeededStream(0))
    np.testing.assert_allclose(c.positions, [0.125, 0.375, 0.625, 0.875])


def test_superposition_counts_shape():
    specs = [RenewalSpec(Uniform(0.5, 1.5), Exponential(1.0), 1.0)] * 3
    counts = superposition_counts(specs, 10, np.random.default_rng(0))
    assert counts.shape == (10, 3)
    assert superposition_counts([], 4, np.random.default_rng(0)).shape == (4, 0)


def test_thinned_renewal_spec():
    spec = RenewalSpec(Exponential(2.0), Exponential(2.0), 1.0)
    thinned = thinned_renewal_spec(spec, 0.25)
    assert thinned.F.rate == pytest.approx(0.5)
    with pytest.raises(ModelError):
        thinned_renewal_spec(RenewalSpec(Uniform(0.0, 1.0), Exponential(2.0), 1.0), 0.5)


# -- Palm couplings --------------------------------------------------------

def test_poisson_coupling_is_identity():
    pc = PoissonCoupling([0.5, 1.0, 1.5])
    quad = sample_palm_quadruple(pc, 1, SeededStream(5))
    assert quad.xi_alpha is quad.xi
    assert quad.v == quad.v_alpha == Configuration.empty()
    stats = pc.statistics(0, 100, np.random.default_rng(0))
    assert not stats.v_count_gap.any() and not stats.xi_d1.any()
    assert stats.rest_mass.mean() > 0


def test_palm_quadruple_errors():
    pc = PoissonCoupling([0.0, 1.0])
    with pytest.raises(ValidationError):
        sample_palm_quadruple(pc, 0, SeededStream(1))
    with pytest.raises(ModelError):
        sample_palm_quadruple(pc, 5, SeededStream(1))


def test_indicator_coupling_pairs(pair_model):
    """Given I_0 = 1 the partner is on, so V_0_alpha has one point."""
    pc = IndicatorCoupling(pair_model)
    quad = sample_palm_quadruple(pc, 0, SeededStream(2))
    assert quad.xi_alpha == Configuration.empty()
    assert quad.v_alpha.total_mass == 1
    stats = pc.statistics(0, 20_000, np.random.default_rng(1))
    assert stats.v_count_gap.mean() == pytest.approx(0.9, abs=0.01)
    assert stats.xi_count_gap.mean() == pytest.approx(0.1, abs=0.01)
    assert stats.rest_mass.mean() == pytest.approx(0.8, abs=0.03)


def test_indicator_coupling_statistics_match_quadruples(pair_model):
    """Vectorized statistics agree in mean with per-draw quadruples."""
    pc = IndicatorCoupling(pair_model)
    vectorized = pc.statistics(2, 4000, np.random.default_rng(3))
    looped = super(IndicatorCoupling, pc).statistics(2, 4000, np.random.default_rng(4))
    assert vectorized.v_variation.mean() == pytest.approx(looped.v_variation.mean(), abs=0.05)
    assert vectorized.v_d1.mean() == pytest.approx(looped.v_d1.mean(), abs=0.05)


def test_rejection_palm_for_custom_model():
    m = IndicatorModel.custom([0.5, 0.5], [{0}, {1}], None, {},
                              lambda rng, size: rng.random((size, 2)) < 0.5)
    pc = IndicatorCoupling(m)
    assert not pc.verified
    stats = pc.statistics(0, 500, np.random.default_rng(0))
    assert stats.xi_count_gap.shape == (500,)


def test_rejection_palm_ignores_base_draw():
    """Rejection Palm draws are independent of the base state; explicit laws reuse it."""
    rng = np.random.default_rng(12)
    custom = IndicatorModel.custom([0.5, 0.5], [{0, 1}, {0, 1}], None, {(0, 1): 0.25},
                                   lambda rng, size: rng.random((size, 2)) < 0.5)
    latent = custom.law.draw_latent(rng, 4000)
    palm = custom.palm_indicators(0, latent, rng)
    assert palm[:, 0].all()
    assert 0.45 < np.mean(palm[:, 1] == latent[:, 1]) < 0.55
    assert not custom.verified

    explicit = IndicatorModel.independent([0.5, 0.5])
    latent = explicit.law.draw_latent(rng, 4000)
    np.testing.assert_array_equal(explicit.palm_indicators(0, latent, rng)[:, 1], latent[:, 1])


def test_bernoulli_poisson_coupling_marginals():
    """Marginals are Bernoulli(q) and Po(q); sites disagree with probability q (1 - e^-q)."""
    q = np.array([0.0, 0.2, 0.7, 1.0])
    on, counts = bernoulli_poisson_coupling(q, 200_000, np.random.default_rng(8))
    assert on.shape == counts.shape == (200_000, 4)
    np.testing.assert_allclose(on.mean(axis=0), q, atol=0.005)
    np.testing.assert_allclose(counts.mean(axis=0), q, atol=0.01)
    np.testing.assert_allclose(counts.var(axis=0), q, atol=0.015)
    np.testing.assert_allclose((counts == 0).mean(axis=0), np.exp(-q), atol=0.005)
    np.testing.assert_allclose((on != counts).mean(axis=0), q * (1.0 - np.exp(-q)), atol=0.005)
    with pytest.raises(ValidationError):
        bernoulli_poisson_coupling([1.5], 10, np.random.default_rng(0))


def test_coupling_mismatch_merges_shared_positions():
    """Two sites at one position differ only through their summed multiplicities."""
    rng = np.random.default_rng(2)
    split = coupling_mismatch([0.5, 0.5], [0.1, 0.9], 100_000, rng)
    merged = coupling_mismatch([0.5, 0.5], [0.4, 0.4], 100_000, rng)
    per_site = 0.5 * (1.0 - np.exp(-0.5))
    assert split.mean() == pytest.approx(1.0 - (1.0 - per_site) ** 2, abs=0.01)
    assert merged.mean() < split.mean()
    assert not coupling_mismatch([], [], 5, rng).any()
