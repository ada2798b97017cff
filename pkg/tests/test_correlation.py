import math

import numpy as np
import pytest

from homps import ParameterError, UndefinedG2Error
from homps.correlation import HbtConfig, detection_probabilities, g2_curve, g2_zero
from homps.heralding import HeraldConfig, HeraldedStatistics, heralded_statistics

# evaluated once from the closed forms at (mu=0.1, eta_c=0.15, beta=-1), all eta = 0.15
G2_DIRECT_PINNED = 0.5040413312258318
G2_STATS_FORM_PINNED = 0.5039433450432986


def stats_at(mu, eta_c=0.15, beta=-1.0):
    return heralded_statistics(HeraldConfig(mu, eta_c, beta))


class TestDetectionProbabilities:
    def test_single_photons_cannot_coincide(self):
        stats = HeraldedStatistics(p_vacuum=0.4, p_single=0.6, p_multi=0.0, herald_rate=0.01)
        _, _, q_fg = detection_probabilities(stats, HbtConfig(0.8, 0.6))
        assert q_fg == 0.0

    def test_pure_two_photon_pulse_with_perfect_detectors(self):
        stats = HeraldedStatistics(p_vacuum=0.0, p_single=0.0, p_multi=1.0, herald_rate=0.01)
        q_f, q_g, q_fg = detection_probabilities(stats, HbtConfig(1.0, 1.0))
        assert q_f == 0.75
        assert q_g == 0.75
        assert q_fg == 0.5

    def test_coincidence_never_exceeds_single_arm(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            p_single, p_multi = rng.random(2) * 0.5
            stats = HeraldedStatistics(1.0 - p_single - p_multi, p_single, p_multi, 0.01)
            hbt = HbtConfig(*rng.random(2))
            q_f, q_g, q_fg = detection_probabilities(stats, hbt)
            assert q_fg <= min(q_f, q_g) + 1e-15


class TestG2Zero:
    def test_antibunching_limit_is_five_ninths(self):
        # leading orders cancel, so the limit holds for any detector efficiency
        for eta in (0.15, 0.5, 1.0):
            result = g2_zero(stats_at(1e-4, eta_c=eta), HbtConfig(eta, eta))
            assert abs(result.g2_direct - 5.0 / 9.0) < 1e-4

    def test_distinguishable_limit_is_poissonian(self):
        result = g2_zero(stats_at(1e-4, beta=0.0), HbtConfig(0.15, 0.15))
        assert result.g2_direct == pytest.approx(1.0, abs=1e-3)

    def test_finite_mu_pinned_values(self):
        result = g2_zero(stats_at(0.1), HbtConfig(0.15, 0.15))
        assert result.g2_direct == pytest.approx(G2_DIRECT_PINNED, rel=1e-12)
        assert result.g2_stats_form == pytest.approx(G2_STATS_FORM_PINNED, rel=1e-12)

    def test_two_forms_agree_closely(self):
        result = g2_zero(stats_at(0.1), HbtConfig(0.15, 0.15))
        relative = abs(result.g2_direct - result.g2_stats_form) / result.g2_direct
        assert relative < 1e-2

    def test_form_discrepancy_is_the_documented_term(self):
        # the two denominators differ by exactly (eta_f + eta_g)/4 * p_multi^2
        stats = stats_at(0.3, eta_c=0.4, beta=-0.8)
        for eta_f, eta_g in ((0.15, 0.15), (0.3, 0.9), (1.0, 0.05)):
            result = g2_zero(stats, HbtConfig(eta_f, eta_g))
            direct_denominator = result.q_fg / result.g2_direct / (eta_f * eta_g) * 2.0
            stats_denominator = stats.p_multi / result.g2_stats_form
            gap = stats_denominator - direct_denominator
            expected = (eta_f + eta_g) / 4.0 * stats.p_multi ** 2
            assert gap == pytest.approx(expected, rel=1e-9)

    def test_direct_form_equals_expanded_rational(self):
        # q_fg/(q_f q_g) written out in the photon statistics
        stats = stats_at(0.2, eta_c=0.3, beta=-0.5)
        for eta_f, eta_g in ((0.15, 0.15), (0.4, 0.8)):
            result = g2_zero(stats, HbtConfig(eta_f, eta_g))
            p_s, p_m = stats.p_single, stats.p_multi
            denominator = (
                p_s ** 2 / 2.0
                + 2.0 * (1.0 - eta_f / 4.0) * (1.0 - eta_g / 4.0) * p_m ** 2
                + (2.0 - eta_f / 4.0 - eta_g / 4.0) * p_s * p_m
            )
            assert result.g2_direct == pytest.approx(p_m / denominator, rel=1e-12)

    def test_invariant_under_detector_swap(self):
        stats = stats_at(0.1)
        forward = g2_zero(stats, HbtConfig(0.1, 0.9))
        backward = g2_zero(stats, HbtConfig(0.9, 0.1))
        assert forward.g2_direct == backward.g2_direct

    def test_zero_click_probability_raises(self):
        with pytest.raises(UndefinedG2Error):
            g2_zero(stats_at(0.1), HbtConfig(0.0, 0.15))


class TestG2Curve:
    SIGMA = 1e-9
    DELTA = 40.0 / 1e-9  # sigma * delta = 40 keeps the envelope flat over a few periods

    def curve(self, taus):
        return g2_curve(taus, 0.1, 0.15, self.SIGMA, self.DELTA, HbtConfig(0.15, 0.15))

    def test_recovers_poisson_at_large_delay(self):
        (_, value), = self.curve([50.0 * self.SIGMA])
        reference = g2_zero(stats_at(0.1, beta=0.0), HbtConfig(0.15, 0.15)).g2_direct
        assert value == pytest.approx(reference, rel=1e-9)

    def test_minimum_sits_at_the_antibunching_delay(self):
        period = math.pi / self.DELTA
        taus = np.linspace(0.0, 2.5 * period, 401)
        values = [v for _, v in self.curve(taus)]
        minimum = int(np.argmin(values))
        step = taus[1] - taus[0]
        assert abs(taus[minimum] - period) <= step

    def test_bunches_at_zero_delay(self):
        (_, value), = self.curve([0.0])
        assert value > 1.0

    def test_independent_of_evaluation_order(self):
        taus = np.linspace(0.0, 3.0 * math.pi / self.DELTA, 37)
        forward = dict(self.curve(taus))
        reversed_ = dict(self.curve(taus[::-1]))
        assert forward == reversed_

    def test_empty_grid_rejected(self):
        with pytest.raises(ParameterError):
            self.curve([])
