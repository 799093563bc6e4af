"""Monte-Carlo estimation of the effective linear channel after distortion.

Conditioned on one channel realization, the quantized frequency-domain
receive vector decomposes per subcarrier into

    y_bar[m] = gain[m] @ s_bar[m] + eta[m]

with ``gain[m]`` the cross-correlation E{y_bar s_bar^H} (the symbol
covariance is the identity) and ``eta`` uncorrelated with the symbols.  Both
the gain matrix and the distortion-plus-noise covariance are estimated from
independent chain runs; the gain is the least-squares fit on the sample set,
so the empirical residual-symbol cross-correlation is zero by construction
and the estimated covariance is the Schur complement of the joint sample
moment matrix (hence positive semidefinite for any sample set).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .impairments import AgcState, compute_agc, impairment_chain
from .ofdm import apply_fir_channel, ofdm_demodulate, ofdm_modulate
from .scenario import NetworkScenario
from .seeding import complex_normal, derive_rng, seed_keys

# fixed internal batch size: derived noise/phase streams are indexed by
# chunk, so results never depend on user-facing knobs
CHUNK_SYMBOLS = 128


@dataclass(frozen=True)
class BussgangStatistics:
    gain: np.ndarray            # (M, L*N, K)
    distortion_cov: np.ndarray  # (M, L*N, L*N) Hermitian PSD
    sample_count: int


def _chain_chunk(realization: ChannelRealization, scenario: NetworkScenario,
                 agc: AgcState, base: tuple, chunk_idx: int, size: int):
    """Run ``size`` independent OFDM symbols through the full chain.

    Returns (symbols (size, K, M), received (size, L*N, M)).
    """
    dims = scenario.dims
    K, L, N, M, R = dims.K, dims.L, dims.N, dims.M, dims.R
    params = scenario.impairments
    noise_var = scenario.radio.noise_power_w

    rng_sym = derive_rng(*base, "sym", chunk_idx)
    symbols = complex_normal(rng_sym, (size, K, M))
    tx = ofdm_modulate(symbols, cp_len=R - 1)

    received = np.empty((size, L * N, M), dtype=complex)
    for l in range(L):
        rng_noise = derive_rng(*base, "noise", chunk_idx, l)
        block = apply_fir_channel(tx, realization.taps[:, l],
                                  scenario.radio.uplink_power_w,
                                  noise_var=noise_var, rng=rng_noise)
        rng_pn = derive_rng(*base, "pn", chunk_idx, l)
        block = impairment_chain(block, agc.input_power[l], agc.adc_input_power[l],
                                 params, dims.adc_bits, rng=rng_pn)
        received[:, l * N:(l + 1) * N, :] = ofdm_demodulate(block)
    return symbols, received


def run_chain_once(realization: ChannelRealization, scenario: NetworkScenario, seed):
    """One end-to-end chain run: (symbols (K, M), received (L*N, M))."""
    agc = compute_agc(realization.correlations, scenario.radio.uplink_power_w,
                      scenario.radio.noise_power_w, scenario.impairments)
    symbols, received = _chain_chunk(realization, scenario, agc,
                                     seed_keys(seed), 0, 1)
    return symbols[0], received[0]


def estimate_statistics(realization: ChannelRealization, scenario: NetworkScenario,
                        n_samples: int, seed) -> BussgangStatistics:
    """Estimate per-subcarrier gain and distortion covariance from
    ``n_samples`` independent chain runs (fresh symbols, noise and phase
    noise; the channel realization is held fixed).
    """
    if n_samples < 2:
        raise ValueError("need at least 2 samples to estimate statistics")
    dims = scenario.dims
    K, M, LN = dims.K, dims.M, dims.L * dims.N
    if n_samples < K:
        raise ValueError(f"need at least K={K} samples for a full-rank symbol Gram")
    agc = compute_agc(realization.correlations, scenario.radio.uplink_power_w,
                      scenario.radio.noise_power_w, scenario.impairments)
    base = seed_keys(seed)

    moment_yy = np.zeros((M, LN, LN), dtype=complex)
    moment_ys = np.zeros((M, LN, K), dtype=complex)
    moment_ss = np.zeros((M, K, K), dtype=complex)
    done = 0
    chunk_idx = 0
    while done < n_samples:
        size = min(CHUNK_SYMBOLS, n_samples - done)
        symbols, received = _chain_chunk(realization, scenario, agc,
                                         base, chunk_idx, size)
        # contiguous (M, ., T) layouts so the accumulation runs as batched BLAS
        recv_m = np.ascontiguousarray(received.transpose(2, 1, 0))
        sym_m = np.ascontiguousarray(symbols.transpose(2, 1, 0))
        moment_yy += recv_m @ recv_m.conj().transpose(0, 2, 1)
        moment_ys += recv_m @ sym_m.conj().transpose(0, 2, 1)
        moment_ss += sym_m @ sym_m.conj().transpose(0, 2, 1)
        done += size
        chunk_idx += 1
    moment_yy /= n_samples
    moment_ys /= n_samples
    moment_ss /= n_samples

    if K > 0:
        # least-squares gain: moment_ss is Hermitian, so solving against the
        # conjugate-transposed cross moment gives gain = ys @ ss^{-1}
        gain = np.linalg.solve(moment_ss, moment_ys.conj().transpose(0, 2, 1))
        gain = gain.conj().transpose(0, 2, 1)
        cov = moment_yy - gain @ moment_ys.conj().transpose(0, 2, 1)
    else:
        gain = np.zeros((M, LN, 0), dtype=complex)
        cov = moment_yy

    cov = 0.5 * (cov + cov.conj().transpose(0, 2, 1))
    eigval, eigvec = np.linalg.eigh(cov)
    clamped = np.maximum(eigval, 0.0)
    cov = (eigvec * clamped[:, None, :]) @ eigvec.conj().transpose(0, 2, 1)
    return BussgangStatistics(gain=gain, distortion_cov=cov, sample_count=n_samples)


# -- binary dump, same conventions as the channel dump ----------------------
#
#   magic "CFBS" | u32 version | u32 M, LN, K, T
#   gain complex64 (M, LN, K), distortion_cov complex64 (M, LN, LN)

_MAGIC = b"CFBS"
_VERSION = 1


def save_statistics(stats: BussgangStatistics, path) -> None:
    M, LN, K = stats.gain.shape
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<5I", _VERSION, M, LN, K, stats.sample_count))
        fh.write(np.ascontiguousarray(stats.gain, dtype="<c8").tobytes())
        fh.write(np.ascontiguousarray(stats.distortion_cov, dtype="<c8").tobytes())


def load_statistics(path) -> BussgangStatistics:
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ValueError(f"{path} is not a statistics dump")
        version, M, LN, K, count = struct.unpack("<5I", fh.read(20))
        if version != _VERSION:
            raise ValueError(f"unsupported statistics dump version {version}")
        gain = np.frombuffer(fh.read(M * LN * K * 8), dtype="<c8").reshape(M, LN, K)
        cov = np.frombuffer(fh.read(M * LN * LN * 8), dtype="<c8").reshape(M, LN, LN)
    return BussgangStatistics(gain=gain.astype(complex),
                              distortion_cov=cov.astype(complex), sample_count=count)
