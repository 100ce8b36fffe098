import math
import warnings
from dataclasses import replace

import numpy as np
import pytest

from qnbudget import (ALPHA_INTERNAL, ALPHA_NO_INTERNAL, InternalSqueeze,
                      LimitParams, RegimeWarning, arm_bandwidth,
                      default_config, limit_params, loss_limit,
                      metrology_limit, optimal_spectrum, qcrb_from_spp,
                      qcrb_lossless, r_from_db, signal_response_ratio,
                      spp_from_qcrb, sql, taylor_loss_internal,
                      taylor_loss_no_internal, taylor_qcrb_internal,
                      taylor_qcrb_no_internal)
from qnbudget.constants import C_LIGHT, HBAR

TWO_PI = 2 * math.pi
OMEGA = TWO_PI * 100.0


@pytest.fixture
def cfg():
    return default_config()


@pytest.fixture(autouse=True)
def _quiet_regime_warnings():
    # the default config is outside the expansion regime on purpose in a few
    # tests; regime warnings are asserted explicitly where they matter
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        yield


class TestSql:
    def test_reference_value(self):
        s = sql(40.0, 4000.0, OMEGA)
        assert s == pytest.approx(3.339077022946588e-48, rel=1e-10)
        assert math.sqrt(s) == pytest.approx(1.83e-24, rel=3e-3)

    def test_frequency_scaling(self):
        assert sql(40.0, 4000.0, 4 * OMEGA) == pytest.approx(
            sql(40.0, 4000.0, OMEGA) / 16, rel=1e-12)

    def test_mass_length_scaling(self):
        ref = sql(40.0, 4000.0, OMEGA)
        assert sql(80.0, 4000.0 * math.sqrt(2), OMEGA) == pytest.approx(
            ref / 8, rel=1e-12)

    def test_positivity_required(self):
        with pytest.raises(ValueError):
            sql(-1.0, 4000.0, OMEGA)


class TestQcrbConversion:
    def test_large_power_fluctuation_lowers_bound(self):
        assert qcrb_from_spp(1e10, 4000.0) < qcrb_from_spp(1e0, 4000.0)

    def test_doubling_halves(self):
        assert qcrb_from_spp(2e5, 4000.0) == pytest.approx(
            qcrb_from_spp(1e5, 4000.0) / 2, rel=1e-12)

    def test_round_trip(self):
        s_pp = 3.7e4
        assert spp_from_qcrb(qcrb_from_spp(s_pp, 4000.0), 4000.0) == \
            pytest.approx(s_pp, rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            qcrb_from_spp(0.0, 4000.0)


class TestLossLimit:
    def test_reference_value(self, cfg):
        pref = HBAR * C_LIGHT**2 / (4 * cfg.L**2 * cfg.omega0 * cfg.P)
        assert pref == pytest.approx(1.0456555872448709e-46, rel=1e-10)
        assert pref == pytest.approx(1.05e-46, rel=1e-2)
        s = loss_limit(cfg, TWO_PI * 1.0, ALPHA_NO_INTERNAL)
        bracket = 1e-4 + 0.014 * 1e-3 / 4 + 0.25 * 0.14 * 0.1
        assert bracket == pytest.approx(3.6e-3, rel=2e-3)
        assert s == pytest.approx(pref * bracket, rel=1e-4)
        assert s == pytest.approx(3.768e-49, rel=1e-3)

    def test_term_crossover_frequency(self, cfg):
        # closed-form frequency where the recycling-cavity loss term catches
        # up with the arm loss term
        gamma = arm_bandwidth(cfg)
        omega_x = gamma * math.sqrt(4 * cfg.eps_arm / (cfg.T_itm * 1e-3) - 1)
        assert omega_x / TWO_PI == pytest.approx(219.219, rel=1e-4)
        arm_term = loss_limit(replace(cfg, eps_src_channels=(0.0,), eps_ext=0.0),
                              omega_x, ALPHA_NO_INTERNAL)
        src_term = loss_limit(replace(cfg, eps_arm=0.0, eps_ext=0.0),
                              omega_x, ALPHA_NO_INTERNAL)
        assert src_term == pytest.approx(arm_term, rel=1e-10)

    def test_zero_loss_gives_zero(self, cfg):
        c = replace(cfg, eps_arm=0.0, eps_src_channels=(0.0,), eps_ext=0.0)
        assert loss_limit(c, OMEGA, ALPHA_INTERNAL) == 0.0

    def test_linear_in_arm_loss(self, cfg):
        pref = HBAR * C_LIGHT**2 / (4 * cfg.L**2 * cfg.omega0 * cfg.P)
        s1 = loss_limit(replace(cfg, eps_arm=1e-4), OMEGA, ALPHA_NO_INTERNAL)
        s2 = loss_limit(replace(cfg, eps_arm=3e-4), OMEGA, ALPHA_NO_INTERNAL)
        assert (s2 - s1) / 2e-4 == pytest.approx(pref, rel=1e-12)

    def test_alpha_validation(self, cfg):
        with pytest.raises(ValueError):
            loss_limit(cfg, OMEGA, 0.5)


class TestMetrologyLimit:
    def test_consistent_with_loss_limit(self, cfg):
        c = replace(cfg, eps_src_channels=(0.0,))
        assert metrology_limit(cfg) == pytest.approx(
            loss_limit(c, TWO_PI * 0.1, ALPHA_NO_INTERNAL), rel=1e-9)

    def test_arm_only_floor(self, cfg):
        c = replace(cfg, eps_ext=0.0)
        pref = HBAR * C_LIGHT**2 / (4 * cfg.L**2 * cfg.omega0 * cfg.P)
        assert metrology_limit(c) == pytest.approx(pref * cfg.eps_arm, rel=1e-12)

    def test_external_term_dominates_default(self, cfg):
        ext = 0.14 * 0.1 / 4
        assert ext / cfg.eps_arm == pytest.approx(35.0, rel=1e-12)
        assert metrology_limit(cfg) == pytest.approx(3.764360114081535e-49,
                                                     rel=1e-10)


class TestLimitParams:
    def test_fields(self):
        lp = limit_params(1e-3, 1e-4)
        assert lp.delta == pytest.approx(math.hypot(1e-3, 4e-4), rel=1e-15)
        assert lp.delta >= 1e-3
        assert lp.theta0 == pytest.approx(math.atan2(1e-3, 4e-4), rel=1e-12)
        assert 0 < lp.theta0 < math.pi

    def test_zero_rotation_angle(self):
        assert limit_params(1e-3, 0.0).theta0 == pytest.approx(math.pi / 2)

    def test_alpha_validation(self):
        with pytest.raises(ValueError):
            LimitParams(delta=1e-3, theta0=1.0, alpha=0.5)


class TestTaylorQcrb:
    def test_vanishes_at_nulling_squeeze(self, cfg):
        lp = limit_params(1e-3, 1e-4)
        s = taylor_qcrb_internal(1e-3, 1e-4, lp.delta / 2, 0.3, 0.0,
                                 cfg.L, cfg.omega0, cfg.P)
        assert s == 0.0

    def test_reduces_to_no_internal_at_r_zero(self, cfg):
        a = taylor_qcrb_internal(1e-3, 1e-4, 0.0, 0.7, 0.5,
                                 cfg.L, cfg.omega0, cfg.P)
        b = taylor_qcrb_no_internal(1e-3, 1e-4, 0.5, cfg.L, cfg.omega0, cfg.P)
        assert a == pytest.approx(b, rel=1e-12)

    def test_matches_exact_pipeline(self, cfg):
        c = replace(cfg, T_src=1e-3, Theta=1e-4,
                    internal_sqz=InternalSqueeze("fixed", r=2e-4, theta=0.0))
        exact = qcrb_lossless(c, OMEGA)
        tay = taylor_qcrb_internal(1e-3, 1e-4, 2e-4, 0.0, 0.0,
                                   cfg.L, cfg.omega0, cfg.P)
        assert exact == pytest.approx(tay, rel=1e-2)

    def test_denominator_guard(self, cfg):
        # r = -delta/2 with sin(theta + theta0) = 1 makes the denominator
        # collapse to zero
        lp = limit_params(1e-3, 0.0)
        with pytest.raises(ValueError, match="validity"):
            taylor_qcrb_internal(1e-3, 0.0, -lp.delta / 2, 0.0, 0.0,
                                 cfg.L, cfg.omega0, cfg.P)

    def test_shot_noise_reduction_at_zero_rotation(self, cfg):
        s = taylor_qcrb_no_internal(1e-3, 0.0, 0.0, cfg.L, cfg.omega0, cfg.P)
        expect = HBAR * C_LIGHT**2 * 1e-3 / (16 * cfg.L**2 * cfg.omega0 * cfg.P)
        assert s == pytest.approx(expect, rel=1e-12)

    def test_nonnegative_and_zero_only_at_nulling(self, cfg):
        rng = np.random.default_rng(13)
        lp = limit_params(1e-3, 1e-4)
        for _ in range(50):
            r = rng.uniform(-lp.delta, lp.delta)
            theta = rng.uniform(0, 2 * math.pi)
            try:
                s = taylor_qcrb_internal(1e-3, 1e-4, r, theta, 0.0,
                                         cfg.L, cfg.omega0, cfg.P)
            except ValueError:
                continue  # collapsed denominator is outside validity
            assert s >= 0.0
            assert (s == 0.0) == (abs(r) == lp.delta / 2)

    def test_30db_input_squeezing_factor_1000(self, cfg):
        r30 = r_from_db(30.0)
        s0 = taylor_qcrb_no_internal(1e-3, 0.0, 0.0, cfg.L, cfg.omega0, cfg.P)
        s1 = taylor_qcrb_no_internal(1e-3, 0.0, r30, cfg.L, cfg.omega0, cfg.P)
        assert s0 / s1 == pytest.approx(1000.0, rel=1e-12)

    def test_no_internal_matches_exact(self, cfg):
        c = replace(cfg, T_src=1e-3, Theta=0.0)
        exact = qcrb_lossless(c, OMEGA)
        tay = taylor_qcrb_no_internal(1e-3, 0.0, 0.0, cfg.L, cfg.omega0, cfg.P)
        assert exact == pytest.approx(tay, rel=1e-2)

    def test_regime_warning(self, cfg):
        with pytest.warns(RegimeWarning):
            taylor_qcrb_no_internal(0.14, 0.0, 0.0, cfg.L, cfg.omega0, cfg.P)
        with pytest.warns(RegimeWarning):
            taylor_qcrb_internal(1e-3, 0.2, 0.0, 0.0, 0.0,
                                 cfg.L, cfg.omega0, cfg.P)


class TestTaylorLoss:
    def test_internal_equals_alpha1_loss_limit(self, cfg):
        c = replace(cfg, T_src=1e-3)
        assert taylor_loss_internal(c, OMEGA) == pytest.approx(
            loss_limit(c, OMEGA, ALPHA_INTERNAL), rel=1e-14)

    def test_no_internal_equals_alpha4_loss_limit(self, cfg):
        c = replace(cfg, T_src=1e-3)
        assert taylor_loss_no_internal(c, OMEGA) == pytest.approx(
            loss_limit(c, OMEGA, ALPHA_NO_INTERNAL), rel=1e-14)

    def test_external_term_four_times_larger(self, cfg):
        c = replace(cfg, T_src=1e-3)
        pref = HBAR * C_LIGHT**2 / (4 * c.L**2 * c.omega0 * c.P)
        gap = taylor_loss_internal(c, OMEGA) - taylor_loss_no_internal(c, OMEGA)
        assert gap == pytest.approx(0.75 * pref * c.T_src * c.eps_ext, rel=1e-10)

    def test_internal_branch_never_below_no_internal(self, cfg):
        rng = np.random.default_rng(11)
        for _ in range(20):
            c = replace(cfg, T_src=10 ** rng.uniform(-3, -1.5),
                        eps_ext=rng.uniform(0.0, 0.3))
            assert taylor_loss_internal(c, OMEGA) >= \
                taylor_loss_no_internal(c, OMEGA)

    def test_theta_scan_of_exact_pipeline(self, cfg):
        # the exact loss spectrum, minimised over the squeeze angle at the
        # nulling squeeze strength, lands on the internal-squeezing floor
        t = 1e-3
        base = replace(cfg, T_src=t, eps_arm=1e-5, eps_src_channels=(0.0,),
                       eps_ext=1e-3)
        lossless = replace(base, eps_arm=0.0, eps_ext=0.0)
        thetas = np.linspace(0, math.pi, 241)
        best = math.inf
        for theta in thetas:
            sq = InternalSqueeze("fixed", r=t / 2, theta=float(theta))
            s = optimal_spectrum(replace(base, internal_sqz=sq), OMEGA)[0]
            s -= optimal_spectrum(replace(lossless, internal_sqz=sq), OMEGA)[0]
            best = min(best, s)
        assert best == pytest.approx(taylor_loss_internal(base, OMEGA), rel=3e-3)


class TestSignalResponseRatio:
    def test_full_cancellation(self):
        assert signal_response_ratio(-math.pi / 2, 0.0) == pytest.approx(0.0,
                                                                         abs=1e-12)

    def test_half_at_zero_argument(self):
        assert signal_response_ratio(0.0, 0.0) == 0.5

    def test_stated_optimum_substitution(self):
        # theta = pi/2 + theta0 at zero rotation angle (theta0 = pi/2) gives
        # sin(theta + theta0) = cos(2 theta0) = -1, hence zero response
        theta0 = math.pi / 2
        theta = math.pi / 2 + theta0
        assert math.sin(theta + theta0) == pytest.approx(-1.0, abs=1e-12)
        ratio = signal_response_ratio(theta, theta0)
        assert ratio == pytest.approx(0.0, abs=1e-7)
        assert ratio <= 0.5
