from dataclasses import replace

import numpy as np
import pytest

from cfmimo import (BussgangStatistics, CombinerKind, Toggles,
                    build_correlations, estimate_statistics, evaluate_se,
                    linear_statistics, optimal_combiner, perfect_hardware_se,
                    sample_channel, scenario_from_config, sinr,
                    unaware_combiner)
from cfmimo.seeding import complex_normal, derive_rng

ALL_OFF = dict(lna=False, pn=False, iqi=False, adc=False)


def random_instance(rng, ln=8, k_users=3, noise=0.1):
    gain = complex_normal(rng, (ln, k_users))
    x = complex_normal(rng, (ln, ln))
    cov = x @ x.conj().T / ln + noise * np.eye(ln)
    return gain, cov


def impaired_setup(**kwargs):
    cfg = {"dims": {"L": 2, "N": 2, "K": 3, "M": 16, "R": 3},
           "radio": {"scs_hz": 3.84e6 / 16},
           "layout": {"area_m": 150.0},
           "impairments": {"pn_variance_mode": "ar1"}}
    s = scenario_from_config(cfg)
    if kwargs:
        s = replace(s, impairments=replace(s.impairments, toggles=Toggles(**kwargs)))
    corr = build_correlations(s, (0, "corr"))
    chan = sample_channel(corr, (0, "chan"))
    return s, chan


def test_single_user_combiner_is_matched_filter():
    rng = derive_rng(0)
    gain = complex_normal(rng, (6, 1))
    v = optimal_combiner(gain, 0.37 * np.eye(6), 0)
    np.testing.assert_allclose(v, gain[:, 0] / 0.37, atol=1e-12)


def test_sinr_scale_invariance():
    rng = derive_rng(1)
    gain, cov = random_instance(rng)
    v = optimal_combiner(gain, cov, 1)
    base = sinr(v, gain, cov, 1)
    for c in (0.1, -3.0, 2.5j, 1e6):
        assert sinr(c * v, gain, cov, 1) == pytest.approx(base, rel=1e-9)


def test_covariance_scaling_rescales_combiner_without_sinr_change():
    # without interference the denominator matrix is c*C, so v scales by 1/c
    # and the SINR against the unscaled statistics is untouched
    rng = derive_rng(2)
    gain, cov = random_instance(rng, k_users=1)
    v = optimal_combiner(gain, cov, 0)
    v_scaled = optimal_combiner(gain, 4.0 * cov, 0)
    np.testing.assert_allclose(v_scaled, v / 4.0, rtol=1e-9)
    assert sinr(v_scaled, gain, cov, 0) == pytest.approx(sinr(v, gain, cov, 0), rel=1e-9)


def test_matched_filter_with_orthogonal_interference():
    gain = np.zeros((4, 2), dtype=complex)
    gain[:2, 0] = [1.0, 1.0j]
    gain[2:, 1] = [2.0, 0.0]
    noise = 0.25
    v = gain[:, 0]
    expected = np.linalg.norm(gain[:, 0]) ** 2 / noise
    assert sinr(v, gain, noise * np.eye(4), 0) == pytest.approx(expected, rel=1e-12)


def test_optimal_combiner_beats_random_combiners():
    rng = derive_rng(3)
    for _ in range(20):
        gain, cov = random_instance(rng, ln=4, k_users=2)
        v_star = optimal_combiner(gain, cov, 0)
        best = sinr(v_star, gain, cov, 0)
        for _ in range(1000):
            v = complex_normal(rng, (4,))
            assert best >= sinr(v, gain, cov, 0) - 1e-12 * best


def test_closed_form_identity():
    rng = derive_rng(4)
    for _ in range(100):
        gain, cov = random_instance(rng, ln=6, k_users=3)
        k = int(rng.integers(3))
        v_star = optimal_combiner(gain, cov, k)
        explicit = sinr(v_star, gain, cov, k)
        reduced = gain @ gain.conj().T - np.outer(gain[:, k], gain[:, k].conj()) + cov
        closed = (gain[:, k].conj() @ np.linalg.solve(reduced, gain[:, k])).real
        assert explicit == pytest.approx(closed, rel=1e-9)


def test_sinr_rejects_zero_combiner():
    gain, cov = random_instance(derive_rng(5))
    with pytest.raises(ValueError):
        sinr(np.zeros(8, dtype=complex), gain, cov, 0)


def test_unaware_equals_aware_without_impairments():
    s, chan = impaired_setup(**ALL_OFF)
    lin = linear_statistics(chan, s)
    for m in (0, 7):
        for k in range(s.dims.K):
            v_un = unaware_combiner(chan, s, m, k)
            v_aw = optimal_combiner(lin.gain[m], lin.distortion_cov[m], k)
            g_un = sinr(v_un, lin.gain[m], lin.distortion_cov[m], k)
            g_aw = sinr(v_aw, lin.gain[m], lin.distortion_cov[m], k)
            assert g_un == pytest.approx(g_aw, rel=1e-6)


def test_unaware_single_user_is_mrc():
    cfg = {"dims": {"L": 2, "N": 2, "K": 1, "M": 16, "R": 3},
           "layout": {"area_m": 150.0}}
    s = scenario_from_config(cfg)
    corr = build_correlations(s, (0, "corr"))
    chan = sample_channel(corr, (0, "chan"))
    v = unaware_combiner(chan, s, 3, 0)
    g = chan.stacked()[3][:, 0]
    ratio = v / g
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-9)


def test_perfect_hardware_scalar_case():
    cfg = {"dims": {"L": 1, "N": 1, "K": 1, "M": 8, "R": 1},
           "layout": {"area_m": 100.0}}
    s = scenario_from_config(cfg)
    corr = build_correlations(s, (0, "corr"))
    chan = sample_channel(corr, (0, "chan"))
    result = perfect_hardware_se(chan, s)
    p = s.radio.uplink_power_w[0]
    gamma = p * np.abs(chan.stacked()[:, 0, 0]) ** 2 / s.radio.noise_power_w
    np.testing.assert_allclose(result.se[0], np.log2(1 + gamma), rtol=1e-9)


def test_perfect_hardware_monotone_in_power():
    s, chan = impaired_setup()
    boosted = replace(s, radio=replace(s.radio, uplink_power_w=np.array([0.4, 0.1, 0.1])))
    base = perfect_hardware_se(chan, s)
    up = perfect_hardware_se(chan, boosted)
    assert np.all(up.se[0] > base.se[0])


def test_perfect_matches_combiner_route_on_linear_statistics():
    s, chan = impaired_setup(**ALL_OFF)
    lin = linear_statistics(chan, s)
    result = perfect_hardware_se(chan, s)
    for m in (0, 5, 11):
        for k in range(s.dims.K):
            v = optimal_combiner(lin.gain[m], lin.distortion_cov[m], k)
            gamma = sinr(v, lin.gain[m], lin.distortion_cov[m], k)
            assert result.se[k, m] == pytest.approx(np.log2(1 + gamma), rel=1e-9)


def test_evaluate_se_values_and_kinds():
    # gamma = 0 -> SE 0; gamma = 1 -> SE 1, via hand-built statistics
    gain = np.zeros((2, 3, 1), dtype=complex)
    gain[:, 0, 0] = [0.0, 1.0]
    cov = np.broadcast_to(np.eye(3), (2, 3, 3)).copy()
    stats = BussgangStatistics(gain=gain, distortion_cov=cov, sample_count=10)
    s, chan = impaired_setup()
    se = evaluate_se(stats, chan, s, CombinerKind.DISTORTION_AWARE).se
    assert se[0, 0] == pytest.approx(0.0, abs=1e-12)
    assert se[0, 1] == pytest.approx(1.0, rel=1e-12)


def test_evaluate_aware_equals_explicit_combiner_route():
    s, chan = impaired_setup()
    stats = estimate_statistics(chan, s, 200, (0, "buss"))
    result = evaluate_se(stats, chan, s, "aware")
    for m in (0, 9):
        for k in range(s.dims.K):
            v = optimal_combiner(stats.gain[m], stats.distortion_cov[m], k)
            gamma = sinr(v, stats.gain[m], stats.distortion_cov[m], k)
            assert result.se[k, m] == pytest.approx(np.log2(1 + gamma), rel=1e-9)


def test_aware_dominates_unaware_rowwise():
    s, chan = impaired_setup()
    stats = estimate_statistics(chan, s, 300, (0, "buss"))
    aware = evaluate_se(stats, chan, s, "aware")
    unaware = evaluate_se(stats, chan, s, "unaware")
    assert np.all(aware.se >= unaware.se - 1e-12)
    assert np.all(np.isfinite(aware.se)) and np.all(aware.se >= 0)
    assert np.all(np.isfinite(unaware.se)) and np.all(unaware.se >= 0)


def test_evaluate_requires_statistics_for_impaired_kinds():
    s, chan = impaired_setup()
    with pytest.raises(ValueError):
        evaluate_se(None, chan, s, "aware")
    with pytest.raises(ValueError):
        evaluate_se(None, chan, s, "unaware")


def test_degenerate_statistics_fall_back_and_report_subcarriers():
    # singular denominator matrix (single UE, zero covariance): the solve
    # falls back to the pseudo-inverse and names the affected subcarriers
    s, chan = impaired_setup()
    gain = np.zeros((4, 3, 1), dtype=complex)
    gain[:, 0, 0] = 1.0
    cov = np.zeros((4, 3, 3), dtype=complex)
    stats = BussgangStatistics(gain=gain, distortion_cov=cov, sample_count=10)
    result = evaluate_se(stats, chan, s, "aware")
    assert np.all(np.isfinite(result.se))
    assert result.metadata["pinv_fallbacks"] == 4
    assert result.metadata["fallback_subcarriers"] == [0, 1, 2, 3]
