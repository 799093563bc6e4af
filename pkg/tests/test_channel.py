import numpy as np
import pytest

from cfmimo import (build_correlations, correlation_from_clusters,
                    load_realization, sample_channel, save_realization,
                    scenario_from_config, sv_power_delay_profile, ula_response)
from cfmimo.channel import draw_taps, tap_dft_matrix
from cfmimo.seeding import derive_rng


def small_scenario(**dims):
    base = {"L": 2, "N": 4, "K": 3, "M": 32, "R": 4}
    base.update(dims)
    return scenario_from_config({"dims": base, "layout": {"area_m": 200.0}})


def test_ula_broadside_is_all_ones():
    np.testing.assert_allclose(ula_response(0.0, 0.7, 4), np.ones(4))


def test_ula_endfire_two_elements():
    np.testing.assert_allclose(ula_response(np.pi / 2, 0.0, 2), [1.0, -1.0], atol=1e-15)


def test_ula_unit_modulus():
    rng = np.random.default_rng(3)
    for _ in range(50):
        v = ula_response(rng.uniform(-np.pi, np.pi), rng.uniform(-np.pi / 2, np.pi / 2), 8)
        np.testing.assert_allclose(np.abs(v), 1.0, atol=1e-12)


def test_pdp_single_cluster_closed_form():
    # one cluster at tap 0: powers proportional to e^{-r/2}, normalized
    powers = sv_power_delay_profile(derive_rng(0), n_taps=3, n_clusters=1,
                                    cluster_decay=2.0, ray_decay=2.0)
    raw = np.exp(-np.arange(3) / 2.0)
    np.testing.assert_allclose(powers[0], raw / raw.sum(), atol=1e-4)
    np.testing.assert_allclose(powers[0], [0.5065, 0.3072, 0.1863], atol=1e-4)


def test_pdp_normalization_and_sign():
    for seed in range(30):
        powers = sv_power_delay_profile(derive_rng(seed), n_taps=6)
        assert np.all(powers >= 0)
        assert powers.sum() == pytest.approx(1.0, abs=1e-12)


def test_pdp_degenerate_ray_decay():
    powers = sv_power_delay_profile(derive_rng(5), n_taps=6, ray_decay=1e-12)
    # all of each cluster's power sits on its arrival tap
    assert np.all((powers > 0).sum(axis=1) == 1)


def test_correlation_invariants():
    s = small_scenario()
    corr = build_correlations(s, (0, "corr"))
    cov = corr.cov
    herm = np.abs(cov - cov.conj().swapaxes(-1, -2)).max()
    assert herm < 1e-12
    eigvals = np.linalg.eigvalsh(cov)
    traces = np.einsum("klrnn->klr", cov).real
    assert np.all(eigvals >= -1e-10 * traces[..., None])
    total = np.einsum("klrnn->kl", cov).real
    np.testing.assert_allclose(total, s.dims.N * s.beta_kl, rtol=1e-9)


def test_correlation_scalar_antenna_case():
    s = small_scenario(N=1)
    corr = build_correlations(s, (0, "corr"))
    total = corr.cov[..., 0, 0].real.sum(axis=-1)
    np.testing.assert_allclose(total, s.beta_kl, rtol=1e-9)


def test_correlation_single_cluster_broadside_rank_one():
    powers = np.array([[0.6, 0.3, 0.1]])
    cov = correlation_from_clusters(2.0, powers, np.zeros(1), np.zeros(1), 4)
    ones = np.ones((4, 4))
    for r in range(3):
        np.testing.assert_allclose(cov[r], 2.0 * powers[0, r] * ones, atol=1e-12)


def test_sample_channel_deterministic():
    s = small_scenario()
    corr = build_correlations(s, (0, "corr"))
    a = sample_channel(corr, (0, "chan", 0))
    b = sample_channel(corr, (0, "chan", 0))
    assert np.array_equal(a.taps, b.taps)
    c = sample_channel(corr, (0, "chan", 1))
    assert not np.array_equal(a.taps, c.taps)


def test_zero_covariance_gives_zero_channel():
    factors = np.zeros((2, 3, 3))
    h = draw_taps(factors, derive_rng(1), size=10)
    assert np.all(h == 0)


def test_sample_covariance_identity():
    eye = np.broadcast_to(np.eye(3), (2, 3, 3)).copy()
    h = draw_taps(eye, derive_rng(2), size=100_000)      # factors of R = I
    emp = np.einsum("tri,trj->rij", h, h.conj()) / 100_000
    assert np.abs(emp - eye).max() < 0.02


def test_sample_covariance_random_psd():
    rng = np.random.default_rng(9)
    x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    cov = x @ x.conj().T / 4
    eigval, eigvec = np.linalg.eigh(cov)
    factors = (eigvec * np.sqrt(np.maximum(eigval, 0)))[None]
    h = draw_taps(factors, derive_rng(3), size=100_000)
    emp = np.einsum("tri,trj->ij", h, h.conj()) / 100_000
    rel = np.linalg.norm(emp - cov) / np.linalg.norm(cov)
    assert rel < 0.03


def test_frequency_channel_is_tap_dft():
    s = small_scenario()
    corr = build_correlations(s, (0, "corr"))
    real = sample_channel(corr, (0, "chan", 0))
    K, L, R, N = real.taps.shape
    M = s.dims.M
    # brute-force summation oracle
    for k in range(K):
        for l in range(L):
            for m in range(0, M, 7):
                direct = sum(real.taps[k, l, r] * np.exp(-2j * np.pi * r * m / M)
                             for r in range(R))
                assert np.abs(real.freq[k, l, m] - direct).max() < 1e-10


def test_parseval_over_taps():
    s = small_scenario()
    corr = build_correlations(s, (0, "corr"))
    real = sample_channel(corr, (0, "chan", 0))
    freq_energy = np.sum(np.abs(real.freq) ** 2, axis=(2, 3)) / s.dims.M
    tap_energy = np.sum(np.abs(real.taps) ** 2, axis=(2, 3))
    np.testing.assert_allclose(freq_energy, tap_energy, rtol=1e-9)


def test_stacked_layout_is_ap_major():
    s = small_scenario()
    corr = build_correlations(s, (0, "corr"))
    real = sample_channel(corr, (0, "chan", 0))
    stacked = real.stacked()
    N = s.dims.N
    for l in range(s.dims.L):
        np.testing.assert_array_equal(stacked[5, l * N:(l + 1) * N, 1],
                                      real.freq[1, l, 5, :])


def test_dump_round_trip(tmp_path):
    s = small_scenario()
    corr = build_correlations(s, (0, "corr"))
    real = sample_channel(corr, (0, "chan", 0))
    path = tmp_path / "chan.bin"
    save_realization(real, path)
    loaded = load_realization(path)
    # complex64 storage: single-precision agreement
    np.testing.assert_allclose(loaded.taps, real.taps, rtol=1e-6, atol=1e-30)
    np.testing.assert_allclose(loaded.freq, real.freq, rtol=1e-6, atol=1e-30)


def test_dft_matrix_shape():
    e = tap_dft_matrix(3, 8)
    assert e.shape == (3, 8)
    np.testing.assert_allclose(e[0], np.ones(8))
