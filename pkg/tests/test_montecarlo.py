import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import kstest, weibull_min

from weibull_pythag.montecarlo import (
    SimConfig,
    SplitMix64,
    empirical_win_prob,
    sample_weibull,
    simulate_games,
    synthetic_season,
)
from weibull_pythag.weibull import WeibullParams, cdf, matchup_from_means, mean, variance, win_probability

MASK = (1 << 64) - 1


def reference_splitmix64(seed, n):
    # textbook scalar version with Python ints
    out, state = [], seed & MASK
    for _ in range(n):
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        out.append(z ^ (z >> 31))
    return out


class TestSplitMix64:
    def test_published_vectors(self):
        assert int(SplitMix64(1234567).next_uint64(2)[0]) == 6457827717110365317
        assert int(SplitMix64(1234567).next_uint64(2)[1]) == 3203168211198807973
        assert int(SplitMix64(0).next_uint64(1)[0]) == 0xE220A8397B1DCDAF

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, MASK), st.integers(1, 40))
    def test_matches_scalar_reference(self, seed, n):
        assert [int(v) for v in SplitMix64(seed).next_uint64(n)] == reference_splitmix64(seed, n)

    def test_chunking_does_not_change_stream(self):
        a = SplitMix64(99)
        chunks = np.concatenate([a.next_uint64(3), a.next_uint64(5), a.next_uint64(1)])
        np.testing.assert_array_equal(chunks, SplitMix64(99).next_uint64(9))

    def test_uniform_range(self):
        u = SplitMix64(4).random(100_000)
        assert u.min() >= 0.0 and u.max() < 1.0
        assert abs(u.mean() - 0.5) < 0.005


class TestSampling:
    def test_exponential_mean(self):
        x = sample_weibull(WeibullParams(1.0, 0.0, 1.0), 10**6, seed=1)
        assert x.mean() == pytest.approx(1.0, abs=0.005)

    @pytest.mark.parametrize("alpha, beta, gamma", [(4.8, -0.5, 1.8), (2.0, 0.0, 3.0), (6.0, -0.5, 1.2)])
    def test_clt_band(self, alpha, beta, gamma):
        p = WeibullParams(alpha, beta, gamma)
        n = 10**6
        x = sample_weibull(p, n, seed=7)
        se_mean = math.sqrt(variance(p) / n)
        assert abs(x.mean() - mean(p)) < 4 * se_mean
        # sd of the sample variance from the fourth central moment
        c = weibull_min(gamma, loc=beta, scale=alpha)
        mu4 = c.expect(lambda t: (t - c.mean()) ** 4)
        se_var = math.sqrt((mu4 - variance(p) ** 2) / n)
        assert abs(x.var(ddof=1) - variance(p)) < 4 * se_var

    def test_ks_distance(self):
        p = WeibullParams(4.5, -0.5, 1.7)
        x = sample_weibull(p, 10**5, seed=11)
        stat = kstest(x, lambda t: cdf(p, t)).statistic
        assert stat < 0.01

    def test_deterministic(self):
        p = WeibullParams(3.0, -0.5, 2.0)
        np.testing.assert_array_equal(sample_weibull(p, 1000, 5), sample_weibull(p, 1000, 5))
        assert not np.array_equal(sample_weibull(p, 1000, 5), sample_weibull(p, 1000, 6))


class TestWinProbability:
    def test_symmetric_matchup(self):
        m = matchup_from_means(4.5, 4.5, -0.5, 1.8)
        assert empirical_win_prob(SimConfig(m, 10**6, 3)) == pytest.approx(0.5, abs=0.002)

    @pytest.mark.parametrize("rs, ra, gamma", [(5.0, 4.0, 1.8), (3.0, 6.5, 2.5), (4.4, 4.2, 1.1)])
    def test_against_closed_form(self, rs, ra, gamma):
        m = matchup_from_means(rs, ra, -0.5, gamma)
        assert abs(empirical_win_prob(SimConfig(m, 10**6, 17)) - win_probability(m)) < 0.002

    def test_converges_with_n(self):
        m = matchup_from_means(5.2, 4.1, -0.5, 1.83)
        exact = win_probability(m)
        for n in (10**3, 10**5, 10**6):
            # 4 Bernoulli standard deviations
            band = 4 * math.sqrt(exact * (1 - exact) / n)
            assert abs(empirical_win_prob(SimConfig(m, n, 23)) - exact) < band

    def test_discretize_reports_rejections(self):
        m = matchup_from_means(4.5, 4.3, -0.5, 1.8)
        frac, rejections = empirical_win_prob(SimConfig(m, 10**4, 8, discretize=True), return_rejections=True)
        assert rejections > 0
        assert 0 < frac < 1
        rs, ra, _ = simulate_games(SimConfig(m, 10**4, 8, discretize=True))
        assert not np.any(rs == ra)
        assert np.all(rs >= 0) and np.all(ra >= 0)
        assert np.all(rs == np.round(rs))

    def test_continuous_has_no_rejections(self):
        m = matchup_from_means(4.5, 4.3, -0.5, 1.8)
        assert simulate_games(SimConfig(m, 1000, 1))[2] == 0


class TestSyntheticSeason:
    def test_season(self):
        m = matchup_from_means(4.6, 4.0, -0.5, 1.8)
        team = synthetic_season(SimConfig(m, 162, 2012, discretize=True), "WSN")
        assert team.team_id == "WSN" and team.n_games == 162
        assert all(rs != ra and rs >= 0 and ra >= 0 for rs, ra in team.games)
        assert team.wins == sum(rs > ra for rs, ra in team.games)

    def test_requires_discretize(self):
        m = matchup_from_means(4.6, 4.0, -0.5, 1.8)
        with pytest.raises(ValueError):
            synthetic_season(SimConfig(m, 162, 1))

    def test_config_validation(self):
        m = matchup_from_means(4.6, 4.0, -0.5, 1.8)
        with pytest.raises(ValueError):
            SimConfig(m, 0, 1)
