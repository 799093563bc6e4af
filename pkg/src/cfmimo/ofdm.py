"""OFDM transforms and time-domain FIR channel application.

Unitary transform pair: modulation is the scaled inverse DFT
s[q] = (1/sqrt(M)) sum_m s_bar[m] e^{j 2 pi q m / M} with a cyclic prefix of
``cp_len`` samples prepended (a literal copy of the block tail, which equals
the same exponential formula evaluated at q < 0); demodulation is the scaled
forward DFT of the M body samples.  All functions act on the last axis and
broadcast over leading axes.
"""

from __future__ import annotations

import numpy as np

from .seeding import complex_normal


def ofdm_modulate(freq: np.ndarray, cp_len: int) -> np.ndarray:
    """Frequency symbols (..., M) -> time samples (..., cp_len + M)."""
    if cp_len < 0:
        raise ValueError("cp_len must be nonnegative")
    M = freq.shape[-1]
    if cp_len >= M:
        raise ValueError(f"cp_len must be < M, got cp_len={cp_len}, M={M}")
    body = np.fft.ifft(freq, axis=-1) * np.sqrt(M)
    if cp_len == 0:
        return body
    return np.concatenate([body[..., M - cp_len:], body], axis=-1)


def ofdm_demodulate(body: np.ndarray) -> np.ndarray:
    """M body samples (CP already removed) -> frequency symbols."""
    M = body.shape[-1]
    return np.fft.fft(body, axis=-1) / np.sqrt(M)


def apply_fir_channel(tx: np.ndarray, taps: np.ndarray, powers: np.ndarray,
                      noise_var: float = 0.0, rng=None) -> np.ndarray:
    """Received block at one AP for CP-extended transmit signals.

    tx     (..., K, M + R - 1) time samples including the CP
    taps   (K, R, N) FIR taps from each UE to the AP's N antennas
    powers (K,) per-UE transmit powers

    Returns (..., N, M):  y[n, q] = sum_k sum_r taps[k, r, n] sqrt(p_k)
    tx[k, R-1+q-r] plus CN(0, noise_var) noise per antenna and sample when
    ``noise_var > 0`` (requires ``rng``).
    """
    K, R, N = taps.shape
    if tx.shape[-2] != K:
        raise ValueError(f"tx has {tx.shape[-2]} UE rows, taps expect {K}")
    M = tx.shape[-1] - (R - 1)
    if M < 1:
        raise ValueError("tx too short for the tap count")
    # window start s corresponds to delay r = R-1-s, hence the tap reversal
    lagged = np.lib.stride_tricks.sliding_window_view(tx, M, axis=-1)
    scaled = np.sqrt(np.asarray(powers))[:, None, None] * taps[:, ::-1, :]
    out = np.einsum("krn,...krq->...nq", scaled, lagged, optimize=True)
    if noise_var > 0.0:
        if rng is None:
            raise ValueError("noise_var > 0 requires an rng")
        out = out + complex_normal(rng, out.shape, noise_var)
    return out
