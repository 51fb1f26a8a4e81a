import math

import numpy as np
import pytest

from pilotopt.channel import (
    LOG2E,
    capacity_variance,
    channel_moments,
    dispersion,
    ergodic_capacity,
    mean_inverse_snr,
    quadrature_capacity,
    quadrature_mean_inverse,
)
from pilotopt.montecarlo import mc_capacity_moments
from pilotopt.specfun import exp_integral_e1, gauss_laguerre

from frozen import C_AT_1, C_AT_15DB, DISPERSION_AT_1, MEANINV_AT_1, SNR_15DB, VARLOG_AT_1


class TestErgodicCapacity:
    def test_value_at_unit_snr(self):
        assert ergodic_capacity(1.0) == pytest.approx(C_AT_1, rel=1e-12)

    def test_factor_form_at_15db(self):
        # log2(e) * e^{1/rho} * E1(1/rho) with independently evaluated factors.
        x = 1.0 / SNR_15DB
        assembled = LOG2E * math.exp(x) * exp_integral_e1(x)
        assert ergodic_capacity(SNR_15DB) == pytest.approx(assembled, rel=1e-12)
        assert ergodic_capacity(SNR_15DB) == pytest.approx(C_AT_15DB, rel=1e-12)

    def test_monotone_in_snr(self):
        assert ergodic_capacity(2.0) > ergodic_capacity(1.0)
        snrs = np.logspace(-5, 5, 300)
        caps = ergodic_capacity(snrs)
        assert np.all(np.diff(caps) > 0)

    def test_concavity_on_log_grid(self):
        # Slopes of consecutive chords must be non-increasing in rho.
        snrs = np.logspace(-3, 4, 120)
        caps = ergodic_capacity(snrs)
        slopes = np.diff(caps) / np.diff(snrs)
        assert np.all(np.diff(slopes) <= 1e-9)

    def test_agrees_with_quadrature(self):
        for rho in (0.1, 1.0, 10.0, 100.0):
            closed = ergodic_capacity(rho)
            quad = quadrature_capacity(rho)
            assert abs(quad - closed) / closed <= 1e-8

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            ergodic_capacity(bad)


class TestMeanInverseSnr:
    def test_value_at_unit_snr(self):
        assert mean_inverse_snr(1.0) == pytest.approx(MEANINV_AT_1, rel=1e-12)

    def test_low_snr_limit(self):
        assert mean_inverse_snr(1e-6) == pytest.approx(1.0, abs=1e-5)

    def test_identity_with_capacity(self):
        # Both reduce to (1/rho) e^{1/rho} E1(1/rho) up to the log2(e) factor.
        for rho in (0.3, 1.0, 7.0, 80.0):
            assert mean_inverse_snr(rho) == pytest.approx(
                ergodic_capacity(rho) / (rho * LOG2E), rel=1e-12
            )

    def test_agrees_with_quadrature(self):
        for rho in (0.1, 1.0, 10.0, 100.0):
            closed = mean_inverse_snr(rho)
            quad = quadrature_mean_inverse(rho)
            assert abs(quad - closed) / closed <= 1e-9

    def test_open_unit_interval_and_monotone(self):
        snrs = np.logspace(-6, 6, 200)
        vals = mean_inverse_snr(snrs)
        assert np.all((vals > 0.0) & (vals < 1.0))
        assert np.all(np.diff(vals) < 0)


class TestCapacityVariance:
    def test_value_at_unit_snr(self):
        # Quadrature result pinned against the adaptive-integration oracle;
        # the seeded Monte Carlo must agree within its own error bars.
        quad = capacity_variance(1.0)
        assert quad == pytest.approx(VARLOG_AT_1, rel=1e-10)
        _, var_est, _ = mc_capacity_moments(1.0, trials=1_000_000, seed=2024)
        assert abs(var_est.mean - quad) <= 4.0 * var_est.std_error

    def test_vanishes_at_tiny_snr(self):
        assert capacity_variance(1e-8) <= 1e-12

    def test_grows_with_snr(self):
        assert capacity_variance(100.0) > capacity_variance(1.0)

    def test_explicit_rule_low_snr(self):
        # A plain Gauss-Laguerre rule is accurate at moderate SNR.
        rule = gauss_laguerre(64)
        assert capacity_variance(1.0, rule) == pytest.approx(VARLOG_AT_1, rel=1e-10)

    def test_nonnegative_everywhere(self):
        snrs = np.logspace(-6, 6, 100)
        assert np.all(capacity_variance(snrs) >= 0.0)


class TestDispersion:
    def test_assembled_value_at_unit_snr(self):
        expected = VARLOG_AT_1 + (LOG2E ** 2 / 2.0) * (1.0 - MEANINV_AT_1 ** 2)
        got = dispersion(1.0)
        assert got == pytest.approx(expected, abs=1e-3)
        assert got == pytest.approx(DISPERSION_AT_1, rel=1e-10)

    def test_vanishes_at_low_snr(self):
        assert dispersion(1e-8) <= 1e-7

    def test_high_snr_floor(self):
        # The second term tends to log2(e)^2 / 2 = 1.04069.
        assert dispersion(1e6) >= 1.04

    def test_positive_and_finite_over_range(self):
        snrs = np.logspace(-6, 6, 200)
        vals = dispersion(snrs)
        assert np.all(vals > 0.0)
        assert np.all(np.isfinite(vals))


class TestTripleAgreement:
    @pytest.mark.parametrize("rho", [0.1, 1.0, 10.0, 100.0])
    def test_closed_form_quadrature_montecarlo(self, rho):
        closed_c = ergodic_capacity(rho)
        closed_m = mean_inverse_snr(rho)
        assert abs(quadrature_capacity(rho) - closed_c) / closed_c <= 1e-8
        assert abs(quadrature_mean_inverse(rho) - closed_m) / closed_m <= 1e-8
        mean_est, _, inv_est = mc_capacity_moments(rho, trials=1_000_000, seed=7)
        assert abs(mean_est.mean - closed_c) <= 4.0 * mean_est.std_error
        assert abs(inv_est.mean - closed_m) <= 4.0 * inv_est.std_error


class TestChannelMoments:
    def test_bundles_consistent_fields(self):
        m = channel_moments(SNR_15DB)
        assert m.capacity == ergodic_capacity(SNR_15DB)
        assert m.dispersion == dispersion(SNR_15DB)
        assert m.mean_inv == mean_inverse_snr(SNR_15DB)
        assert m.var_log == capacity_variance(SNR_15DB)
        assert 0.0 < m.mean_inv < 1.0
        assert m.capacity > 0.0 and m.dispersion > 0.0
