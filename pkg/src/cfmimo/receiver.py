"""Combining vectors, per-subcarrier SINR and spectral efficiency.

Three receive strategies, matching the three curves of the combiner
comparison:

    aware    SINR-optimal combining against the estimated effective channel,
             treating distortion-plus-noise as colored noise
    unaware  MMSE combining designed for the impairment-free model (true
             frequency channel, white noise), then evaluated against the
             true impaired statistics
    perfect  impairment-free hardware with optimal combining, computed in
             closed form from the channel realization alone

For the optimal combiner v* = (sum_{i != k} b_i b_i^H + C)^{-1} b_k the SINR
equals the quadratic form b_k^H (sum_{i != k} b_i b_i^H + C)^{-1} b_k; both
routes are implemented and tested against each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .bussgang import BussgangStatistics
from .channel import ChannelRealization
from .scenario import NetworkScenario

# relative residual above this, or a singular solve, triggers the
# pseudo-inverse fallback (rcond 1e-12) for the affected subcarriers
SOLVE_RESIDUAL_TOL = 1e-6


class CombinerKind(str, Enum):
    DISTORTION_AWARE = "aware"
    DISTORTION_UNAWARE = "unaware"
    PERFECT_HARDWARE = "perfect"


@dataclass
class SEResult:
    se: np.ndarray              # (K, M) bits per symbol, log2(1 + sinr)
    kind: CombinerKind
    metadata: dict = field(default_factory=dict)

    def subcarrier_average(self) -> np.ndarray:
        return np.nanmean(self.se, axis=1)


def _solve_stack(matrices: np.ndarray, rhs: np.ndarray, counter: dict | None = None):
    """Solve a stack of Hermitian systems (M, n, n) @ x = (M, n).

    Falls back to a pseudo-inverse for subcarriers whose solve fails or whose
    relative residual exceeds SOLVE_RESIDUAL_TOL; occurrences are counted in
    ``counter["pinv_fallbacks"]`` and the degenerate subcarrier indices are
    collected in ``counter["fallback_subcarriers"]``.
    """
    try:
        x = np.linalg.solve(matrices, rhs[..., None])[..., 0]
        residual = np.linalg.norm(np.einsum("mij,mj->mi", matrices, x) - rhs, axis=-1)
        scale = np.linalg.norm(rhs, axis=-1)
        bad = residual > SOLVE_RESIDUAL_TOL * np.maximum(scale, 1e-300)
    except np.linalg.LinAlgError:
        x = np.zeros_like(rhs)
        bad = np.ones(matrices.shape[0], dtype=bool)
    if np.any(bad):
        if counter is not None:
            counter["pinv_fallbacks"] = counter.get("pinv_fallbacks", 0) + int(bad.sum())
            counter.setdefault("fallback_subcarriers", []).extend(np.nonzero(bad)[0].tolist())
        for m in np.nonzero(bad)[0]:
            x[m] = np.linalg.pinv(matrices[m], rcond=1e-12) @ rhs[m]
    return x


def optimal_combiner(gain_m: np.ndarray, cov_m: np.ndarray, k: int) -> np.ndarray:
    """SINR-maximizing combiner for UE k at one subcarrier.

    gain_m (LN, K) effective channel columns, cov_m (LN, LN) distortion-plus-
    noise covariance.
    """
    b_k = gain_m[:, k]
    interference = gain_m @ gain_m.conj().T - np.outer(b_k, b_k.conj())
    return _solve_stack((interference + cov_m)[None], b_k[None])[0]


def sinr(v: np.ndarray, gain_m: np.ndarray, cov_m: np.ndarray, k: int) -> float:
    """Signal to interference-plus-noise ratio of combiner v for UE k."""
    if not np.any(v):
        raise ValueError("combiner must be nonzero")
    projected = v.conj() @ gain_m
    signal = np.abs(projected[k]) ** 2
    interference = np.sum(np.abs(projected) ** 2) - signal
    noise = (v.conj() @ cov_m @ v).real
    denom = interference + noise
    if denom <= 0.0:
        raise ValueError("invalid statistics: zero interference-plus-noise power")
    return float(signal / denom)


def unaware_combiner(realization: ChannelRealization, scenario: NetworkScenario,
                     m: int, k: int) -> np.ndarray:
    """MMSE combiner for the impairment-free model at subcarrier m."""
    chan = realization.stacked()[m]                    # (LN, K)
    powers = scenario.radio.uplink_power_w
    noise_var = scenario.radio.noise_power_w
    scaled = chan * np.sqrt(powers)
    g_k = scaled[:, k]
    cov = scaled @ scaled.conj().T - np.outer(g_k, g_k.conj()) \
        + noise_var * np.eye(chan.shape[0])
    return _solve_stack(cov[None], g_k[None])[0]


def linear_statistics(realization: ChannelRealization,
                      scenario: NetworkScenario) -> BussgangStatistics:
    """Analytic statistics of the impairment-free chain: gain = sqrt(p) g,
    covariance = noise_var * I.  Useful as an exact reference."""
    chan = realization.stacked()                       # (M, LN, K)
    gain = chan * np.sqrt(scenario.radio.uplink_power_w)
    M, LN, _ = chan.shape
    eye = np.broadcast_to(np.eye(LN), (M, LN, LN)).copy()
    return BussgangStatistics(gain=gain,
                              distortion_cov=scenario.radio.noise_power_w * eye,
                              sample_count=0)


def _closed_form_gammas(gain: np.ndarray, cov: np.ndarray, counter: dict) -> np.ndarray:
    """gamma[k, m] = b_k^H (sum_{i != k} b_i b_i^H + cov)^{-1} b_k, batched."""
    M, LN, K = gain.shape
    total = gain @ gain.conj().transpose(0, 2, 1) + cov
    gammas = np.empty((K, M))
    for k in range(K):
        b_k = gain[:, :, k]
        reduced = total - b_k[:, :, None] * b_k.conj()[:, None, :]
        x = _solve_stack(reduced, b_k, counter)
        gammas[k] = np.maximum(np.einsum("mi,mi->m", b_k.conj(), x).real, 0.0)
    return gammas


def evaluate_se(statistics: BussgangStatistics | None, realization: ChannelRealization,
                scenario: NetworkScenario, kind: CombinerKind) -> SEResult:
    """Per-UE, per-subcarrier spectral efficiency for one combining strategy.

    ``statistics`` may be None for the perfect-hardware case, which is
    analytic.  The returned entries are log2(1 + gamma) for this channel
    realization; averaging over realizations and drops happens in the runner.
    """
    kind = CombinerKind(kind)
    counter: dict = {}
    if kind is CombinerKind.PERFECT_HARDWARE:
        gammas = _closed_form_gammas_from_stats(linear_statistics(realization, scenario), counter)
    elif kind is CombinerKind.DISTORTION_AWARE:
        if statistics is None:
            raise ValueError("distortion-aware combining needs estimated statistics")
        gammas = _closed_form_gammas_from_stats(statistics, counter)
    elif kind is CombinerKind.DISTORTION_UNAWARE:
        if statistics is None:
            raise ValueError("distortion-unaware evaluation needs estimated statistics")
        gammas = _unaware_gammas(statistics, realization, scenario, counter)
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(f"unknown combiner kind {kind}")
    se = np.log2(1.0 + gammas)
    metadata = {"pinv_fallbacks": counter.get("pinv_fallbacks", 0)}
    if counter.get("fallback_subcarriers"):
        metadata["fallback_subcarriers"] = sorted(set(counter["fallback_subcarriers"]))
    return SEResult(se=se, kind=kind, metadata=metadata)


def _closed_form_gammas_from_stats(stats: BussgangStatistics, counter: dict) -> np.ndarray:
    return _closed_form_gammas(stats.gain, stats.distortion_cov, counter)


def _unaware_gammas(stats: BussgangStatistics, realization: ChannelRealization,
                    scenario: NetworkScenario, counter: dict) -> np.ndarray:
    """Design v for the impairment-free model, evaluate against (gain, cov)."""
    linear = linear_statistics(realization, scenario)
    M, LN, K = linear.gain.shape
    total = linear.gain @ linear.gain.conj().transpose(0, 2, 1) + linear.distortion_cov
    gammas = np.empty((K, M))
    for k in range(K):
        g_k = linear.gain[:, :, k]
        reduced = total - g_k[:, :, None] * g_k.conj()[:, None, :]
        v = _solve_stack(reduced, g_k, counter)
        projected = np.einsum("mi,mik->mk", v.conj(), stats.gain)
        signal = np.abs(projected[:, k]) ** 2
        interference = np.sum(np.abs(projected) ** 2, axis=1) - signal
        noise = np.einsum("mi,mij,mj->m", v.conj(), stats.distortion_cov, v).real
        denom = interference + noise
        gammas[k] = np.where(denom > 0.0, signal / np.where(denom > 0.0, denom, 1.0), np.nan)
    return np.maximum(gammas, 0.0)


def perfect_hardware_se(realization: ChannelRealization,
                        scenario: NetworkScenario) -> SEResult:
    """Spectral efficiency of ideal hardware with optimal combining."""
    return evaluate_se(None, realization, scenario, CombinerKind.PERFECT_HARDWARE)
