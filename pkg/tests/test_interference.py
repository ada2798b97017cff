import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homps import ParameterError
from homps.interference import (
    BeatParams,
    beta,
    coincidence_pattern,
    conditional_output_distribution,
    fock_pairs,
)

BETA_GRID = [-1.0, -0.5, 0.0, 0.5, 1.0]

finite_taus = st.floats(min_value=-1e-6, max_value=1e-6, allow_nan=False)
betas = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


class TestBeta:
    def test_zero_delay_is_unity(self):
        assert beta(BeatParams(tau=0.0, sigma=1e-9, delta=2 * math.pi * 40e6)) == 1.0

    def test_antibunching_delay(self):
        # sigma * delta = 1000: envelope still ~1 at the first anti-bunching peak
        delta = 1.0
        params = BeatParams(tau=math.pi, sigma=1000.0, delta=delta)
        assert beta(params) == pytest.approx(-1.0, abs=1e-4)

    def test_envelope_bound_at_large_delay(self):
        value = beta(BeatParams(tau=10e-9, sigma=1e-9, delta=2 * math.pi * 40e6))
        assert abs(value) <= math.exp(-50.0)

    @pytest.mark.parametrize("sigma", [0.0, -1e-9, float("nan")])
    def test_rejects_bad_sigma(self, sigma):
        with pytest.raises(ParameterError):
            BeatParams(tau=0.0, sigma=sigma, delta=1.0)

    def test_rejects_non_finite_tau_and_delta(self):
        with pytest.raises(ParameterError):
            BeatParams(tau=float("nan"), sigma=1e-9, delta=1.0)
        with pytest.raises(ParameterError):
            BeatParams(tau=0.0, sigma=1e-9, delta=float("inf"))

    def test_delta_sign_symmetry_exact(self):
        for tau in (0.0, 1e-9, 3.7e-9, -2.2e-9):
            for delta in (0.0, 2 * math.pi * 40e6, 1e9):
                plus = beta(BeatParams(tau=tau, sigma=1.1e-9, delta=delta))
                minus = beta(BeatParams(tau=tau, sigma=1.1e-9, delta=-delta))
                assert plus == minus

    @given(tau=finite_taus, delta=st.floats(min_value=0, max_value=1e12))
    @settings(max_examples=100, deadline=None)
    def test_bounded(self, tau, delta):
        assert -1.0 <= beta(BeatParams(tau=tau, sigma=2.2e-9, delta=delta)) <= 1.0


class TestConditionalDistribution:
    def test_vacuum_passes_through(self):
        assert conditional_output_distribution(0, 0, 0.3) == {(0, 0): 1.0}

    def test_single_photon_routes_randomly(self):
        expected = {(1, 0): 0.5, (0, 1): 0.5}
        assert conditional_output_distribution(1, 0, -0.7) == expected
        assert conditional_output_distribution(0, 1, 0.7) == expected

    def test_two_photons_one_port(self):
        expected = {(2, 0): 0.25, (0, 2): 0.25, (1, 1): 0.5}
        assert conditional_output_distribution(2, 0, 0.0) == expected
        assert conditional_output_distribution(0, 2, 1.0) == expected

    def test_three_photons_one_port(self):
        expected = {(3, 0): 0.125, (0, 3): 0.125, (2, 1): 0.375, (1, 2): 0.375}
        assert conditional_output_distribution(3, 0, -1.0) == expected

    def test_full_interference_dip(self):
        # fully indistinguishable pair never splits
        table = conditional_output_distribution(1, 1, 1.0)
        assert table == {(1, 1): 0.0, (2, 0): 0.5, (0, 2): 0.5}

    def test_distinguishable_pair_routes_independently(self):
        table = conditional_output_distribution(1, 1, 0.0)
        assert table == {(1, 1): 0.5, (2, 0): 0.25, (0, 2): 0.25}

    def test_three_photon_antibunching(self):
        table = conditional_output_distribution(2, 1, -1.0)
        assert table == {(3, 0): 0.0, (0, 3): 0.0, (2, 1): 0.5, (1, 2): 0.5}

    @pytest.mark.parametrize("m,n", [(2, 2), (4, 0), (0, 4), (3, 1)])
    def test_rejects_inputs_beyond_truncation(self, m, n):
        with pytest.raises(ParameterError):
            conditional_output_distribution(m, n, 0.0)

    @pytest.mark.parametrize("m,n", [(-1, 0), (0, -2)])
    def test_rejects_negative_counts(self, m, n):
        with pytest.raises(ParameterError):
            conditional_output_distribution(m, n, 0.0)

    def test_rejects_non_integer_counts(self):
        with pytest.raises(ParameterError):
            conditional_output_distribution(1.5, 0, 0.0)

    def test_rejects_beta_out_of_range(self):
        with pytest.raises(ParameterError):
            conditional_output_distribution(1, 1, 1.2)

    @pytest.mark.parametrize("beta_value", BETA_GRID)
    @pytest.mark.parametrize("pair", list(fock_pairs()))
    def test_normalised_and_bounded_on_grid(self, pair, beta_value):
        table = conditional_output_distribution(*pair, beta_value)
        assert sum(table.values()) == pytest.approx(1.0, abs=1e-12)
        assert all(0.0 <= p <= 1.0 for p in table.values())

    @given(beta_value=betas)
    @settings(max_examples=100, deadline=None)
    def test_normalised_and_bounded_random(self, beta_value):
        for pair in fock_pairs():
            table = conditional_output_distribution(*pair, beta_value)
            assert sum(table.values()) == pytest.approx(1.0, abs=1e-12)
            assert all(0.0 <= p <= 1.0 for p in table.values())

    @given(beta_value=betas)
    @settings(max_examples=100, deadline=None)
    def test_photon_number_conservation(self, beta_value):
        for m, n in fock_pairs():
            for r, s in conditional_output_distribution(m, n, beta_value):
                assert r + s == m + n

    @given(beta_value=betas)
    @settings(max_examples=100, deadline=None)
    def test_input_swap_symmetry_exact(self, beta_value):
        for m, n in fock_pairs():
            table = conditional_output_distribution(m, n, beta_value)
            swapped = conditional_output_distribution(n, m, beta_value)
            assert table == {(s, r): p for (r, s), p in swapped.items()}


class TestCoincidencePattern:
    def test_zero_delay_dip(self):
        assert coincidence_pattern(BeatParams(0.0, 1e-9, 2 * math.pi * 40e6)) == 0.5

    def test_distinguishable_baseline(self):
        level = coincidence_pattern(BeatParams(tau=60e-9, sigma=1e-9, delta=2 * math.pi * 40e6))
        assert level == pytest.approx(1.0, abs=1e-12)

    def test_antibunching_peak_reaches_three_halves(self):
        delta = 1.0
        level = coincidence_pattern(BeatParams(tau=math.pi, sigma=1e4, delta=delta))
        assert level == pytest.approx(1.5, abs=1e-6)

    def test_rejects_bad_sigma(self):
        with pytest.raises(ParameterError):
            coincidence_pattern(BeatParams(tau=0.0, sigma=-1.0, delta=1.0))

    def test_equals_one_minus_half_beta(self):
        for tau in (-3.3e-9, 0.0, 0.4e-9, 12.5e-9):
            params = BeatParams(tau=tau, sigma=1.1e-9, delta=2 * math.pi * 40e6)
            assert coincidence_pattern(params) == 0.5 * (2.0 - beta(params))
