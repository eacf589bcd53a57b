import math

import numpy as np
import pytest
from scipy import stats

from copulakit import (
    ArchimedeanCopula,
    ClaytonCopula,
    DomainError,
    FrankCopula,
    GumbelCopula,
    IndependenceGenerator,
    RadialDistribution,
    UnsupportedOperationError,
    arch_sample_frailty,
    arch_sample_williamson,
    inverse_williamson,
    kendall_tau_sample,
    sample_radial,
    sample_simplex,
    williamson_transform,
)
from copulakit.williamson import erlang_radial, point_mass_radial, radial_quantile

from conftest import KS_CRIT_1PCT


def erlang2_cdf(x):
    return 1.0 - np.exp(-x) - x * np.exp(-x)


def t_max(g, level=1e-6):
    return float(g.phi_inv(level))


class TestForwardTransform:
    def test_point_mass_value(self):
        g = williamson_transform(point_mass_radial(1.0), 2)
        assert g.phi(0.5) == pytest.approx(0.5, abs=1e-15)

    def test_point_mass_is_countermonotone(self):
        g = williamson_transform(point_mass_radial(1.0), 2)
        t = np.linspace(0.0, 2.0, 41)
        np.testing.assert_allclose(g.phi(t), np.maximum(1.0 - t, 0.0), atol=1e-15)
        c = ArchimedeanCopula(2, g)
        grid = np.linspace(0.0, 1.0, 11)
        u = np.array([(a, b) for a in grid for b in grid])
        np.testing.assert_allclose(c.cdf(u), np.maximum(u.sum(axis=1) - 1.0, 0.0), atol=1e-12)

    def test_erlang_gives_exponential(self):
        g = williamson_transform(erlang_radial(2), 2)
        t = np.linspace(0.0, 10.0, 51)
        np.testing.assert_allclose(g.phi(t), np.exp(-t), atol=1e-8, rtol=0)

    def test_phi_at_zero(self):
        for r in [erlang_radial(3), point_mass_radial(2.5)]:
            assert williamson_transform(r, 3).phi(0.0) == pytest.approx(1.0, abs=1e-12)

    def test_dimension(self):
        with pytest.raises(DomainError):
            williamson_transform(erlang_radial(2), 1)


class TestInverseTransform:
    def test_exponential_is_erlang2(self):
        x = np.linspace(0.0, 10.0, 201)
        r = inverse_williamson(IndependenceGenerator(), 2, exact=False)
        np.testing.assert_allclose(r.cdf(x), erlang2_cdf(x), atol=1e-8, rtol=0)

    def test_countermonotone_generator_is_step(self):
        g = williamson_transform(point_mass_radial(1.0), 2)
        r = inverse_williamson(g, 2, exact=False)
        x = np.array([0.25, 0.5, 0.999, 1.0, 1.5, 3.0])
        np.testing.assert_allclose(r.cdf(x), [0, 0, 0, 1, 1, 1], atol=1e-12)

    @pytest.mark.parametrize("theta", [-0.4, 0.5, 2.0])
    @pytest.mark.parametrize("d", [2, 3])
    def test_round_trip(self, theta, d):
        if theta < -1.0 / (d - 1):
            pytest.skip("outside the d-monotone range")
        g = ClaytonCopula(d, theta).generator
        back = williamson_transform(inverse_williamson(g, d), d)
        t = np.linspace(0.0, t_max(g), 60)
        np.testing.assert_allclose(back.phi(t), g.phi(t), atol=1e-6, rtol=0)

    @pytest.mark.parametrize(
        "copula",
        [ClaytonCopula(3, -0.4), ClaytonCopula(3, 2.0), FrankCopula(3, 5.0), GumbelCopula(3, 2.0)],
        ids=repr,
    )
    def test_monotone_without_correction(self, copula):
        r = copula.williamson_dist()
        g = copula.generator
        end = g.support_end if math.isfinite(g.support_end) else 3 * t_max(g)
        x = np.linspace(0.0, end, 1000)
        raw = r.cdf_raw(x)
        assert np.max(np.abs(r.cdf(x) - raw)) <= 1e-9

    def test_not_d_monotone(self):
        with pytest.raises(DomainError):
            inverse_williamson(ClaytonCopula(2, -0.9).generator, 3)


class TestSampleRadial:
    def test_step(self):
        r = RadialDistribution(lambda x: np.where(np.asarray(x) >= 1.0, 1.0, 0.0))
        np.testing.assert_allclose(radial_quantile(r, np.array([0.01, 0.3, 0.99])), 1.0, rtol=1e-12)
        assert sample_radial(r, 3) == pytest.approx(1.0, rel=1e-12)

    def test_erlang_ks(self):
        r = inverse_williamson(IndependenceGenerator(), 2, exact=False)
        x = sample_radial(r, np.random.default_rng(31), 10_000)
        assert stats.kstest(x, erlang2_cdf).statistic < KS_CRIT_1PCT / math.sqrt(10_000)

    def test_atom_level(self):
        r = RadialDistribution(lambda x: np.where(np.asarray(x) >= 2.0, 1.0, np.where(np.asarray(x) >= 1.0, 0.5, 0.0)))
        assert radial_quantile(r, np.array([0.5]))[0] == pytest.approx(1.0, rel=1e-12)
        disc = RadialDistribution(atoms=[1.0, 2.0], weights=[0.5, 0.5])
        assert radial_quantile(disc, np.array([0.5]))[0] == 1.0

    def test_bracket_failure(self):
        r = RadialDistribution(lambda x: 0.5 * np.ones_like(np.asarray(x, dtype=float)))
        with pytest.raises(DomainError):
            radial_quantile(r, np.array([0.9]))

    def test_bad_atoms(self):
        with pytest.raises(DomainError):
            RadialDistribution(atoms=[0.0, 1.0])


class TestSimplex:
    def test_on_simplex(self, rng):
        s = sample_simplex(4, rng, 1000)
        assert np.all(s >= 0)
        np.testing.assert_allclose(s.sum(axis=1), 1.0, atol=1e-12)

    def test_bivariate_margin_uniform(self):
        s = sample_simplex(2, np.random.default_rng(12), 10_000)
        assert stats.kstest(s[:, 0], "uniform").statistic < KS_CRIT_1PCT / 100

    def test_reproducible(self):
        assert np.array_equal(sample_simplex(3, 5), sample_simplex(3, 5))

    def test_dimension(self):
        with pytest.raises(DomainError):
            sample_simplex(1, 0)


class TestWilliamsonSampler:
    def test_negative_clayton_trivariate(self):
        n = 10_000
        u = arch_sample_williamson(ClaytonCopula(3, -0.3), np.random.default_rng(2024), n)
        crit = KS_CRIT_1PCT / math.sqrt(n)
        for j in range(3):
            assert stats.kstest(u[:, j], "uniform").statistic < crit
        for i, j in [(0, 1), (0, 2), (1, 2)]:
            assert kendall_tau_sample(u[:, i], u[:, j]) == pytest.approx(-0.3 / 1.7, abs=0.02)

    def test_countermonotone_generator(self, rng):
        c = ArchimedeanCopula(2, williamson_transform(point_mass_radial(1.0), 2))
        u = arch_sample_williamson(c, rng, 1000)
        np.testing.assert_allclose(u.sum(axis=1), 1.0, atol=1e-9)

    @pytest.mark.parametrize("copula", [ClaytonCopula(2, 2.0), FrankCopula(2, 5.0), GumbelCopula(2, 2.0)], ids=repr)
    def test_matches_frailty_path(self, copula):
        n = 10_000
        a = arch_sample_williamson(copula, np.random.default_rng(100), n)
        b = arch_sample_frailty(copula, np.random.default_rng(200), n)
        for fa, fb in [(a[:, 0], b[:, 0]), (a[:, 1], b[:, 1]), (a.sum(axis=1), b.sum(axis=1))]:
            assert stats.ks_2samp(fa, fb).pvalue > 0.01

    @pytest.mark.parametrize("copula", [ClaytonCopula(3, -0.4), ClaytonCopula(4, 2.0), FrankCopula(3, 1.0)], ids=repr)
    def test_frechet_support(self, copula, rng):
        u = arch_sample_williamson(copula, rng, 2000)
        assert np.all((u >= 0.0) & (u <= 1.0))
        # a non-strict copula puts no mass where sum phi_inv(u_i) exceeds the support end
        g = copula.generator
        assert np.all(np.sum(g.phi_inv(np.clip(u, 1e-300, 1.0)), axis=1) <= g.support_end * (1 + 1e-9))


class TestFrailtySampler:
    def test_clayton_tau(self):
        u = arch_sample_frailty(ClaytonCopula(2, 2.0), np.random.default_rng(7), 10_000)
        assert kendall_tau_sample(u[:, 0], u[:, 1]) == pytest.approx(0.5, abs=0.02)

    def test_gumbel_tau(self):
        u = arch_sample_frailty(GumbelCopula(2, 2.0), np.random.default_rng(7), 10_000)
        assert kendall_tau_sample(u[:, 0], u[:, 1]) == pytest.approx(0.5, abs=0.02)

    def test_negative_clayton_unsupported(self):
        with pytest.raises(UnsupportedOperationError):
            arch_sample_frailty(ClaytonCopula(2, -0.5), np.random.default_rng(0), 10)

    def test_default_sampler_falls_back(self, rng):
        u = ClaytonCopula(2, -0.5).sample(rng, 200)
        assert u.shape == (200, 2)
