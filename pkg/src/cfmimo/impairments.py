"""Per-AP receiver impairment chain.

Four independently toggleable stages applied to the distortion-free antenna
signals, in order:

    LNA        y -> b1*y + (b2/P_in) |y|^2 y          (third-order, odd terms)
    PN + IQI   y -> e^{j psi} (y + alpha*conj(y)),     psi common to all
               antennas of the AP (shared local oscillator), i.i.d. per sample
    ADC        uniform midrise quantization of real and imaginary parts

The chain is memoryless per sample; operating points come from a long-term
AGC (expectations over both data and fading), not from the current channel
realization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import SpatialCorrelation
from .scenario import ImpairmentParams

# Gaussian-MSE-optimal uniform step per bit width (unit input variance);
# beyond the table a +-4 sigma loading is used, Delta = 8/2^bits.
OPTIMAL_UNIFORM_STEP = {1: 1.596, 2: 0.996, 3: 0.586, 4: 0.335}


def gaussian_optimal_step(bits: int) -> float:
    if bits < 1:
        raise ValueError("quantizer needs at least 1 bit")
    return OPTIMAL_UNIFORM_STEP.get(bits, 8.0 / 2**bits)


@dataclass(frozen=True)
class AgcState:
    input_power: np.ndarray      # (L, N) long-term E|y'|^2 at the LNA input
    adc_input_power: np.ndarray  # (L, N) long-term power in front of the ADC


@dataclass(frozen=True)
class QuantizerSpec:
    bits: int
    step: float
    levels: np.ndarray       # 2^bits midrise output levels, increasing
    thresholds: np.ndarray   # 2^bits + 1 decision edges, -inf ... +inf


def compute_agc(correlations: SpatialCorrelation, powers: np.ndarray,
                noise_var: float, params: ImpairmentParams) -> AgcState:
    """Long-term operating powers per (AP, antenna).

    Input power averages over fading and data:
    P_in[l,n] = sum_k p_k sum_r cov[k,l,r,n,n] + noise_var.  The pre-ADC
    power follows from complex-Gaussian moment identities (E|y|^4 = 2 P^2,
    E|y|^6 = 6 P^3) applied to the enabled stages.
    """
    diag = np.einsum("klrnn->kln", correlations.cov).real
    p_in = np.einsum("k,kln->ln", np.asarray(powers), diag) + noise_var
    gain = 1.0
    if params.toggles.lna:
        b1, b2 = params.b1, params.b2
        gain *= abs(b1) ** 2 + 4.0 * (b1 * np.conj(b2)).real + 6.0 * abs(b2) ** 2
    if params.toggles.iqi:
        gain *= 1.0 + abs(params.alpha) ** 2
    return AgcState(input_power=p_in, adc_input_power=p_in * gain)


def lna(y, input_power, b1: complex, b2: complex):
    """Third-order quasi-memoryless amplifier, normalized by the AGC power."""
    return b1 * y + (b2 / input_power) * np.abs(y) ** 2 * y


def phase_noise_samples(rng, sigma2_psi: float, size=None) -> np.ndarray:
    """Zero-mean Gaussian phase draws, one per (AP, time sample)."""
    if sigma2_psi < 0:
        raise ValueError("phase-noise variance must be nonnegative")
    return rng.normal(0.0, np.sqrt(sigma2_psi), size=size)


def iqi_pn(y, alpha: complex, psi):
    """Common-oscillator rotation plus conjugate IQ-imbalance leakage."""
    return np.exp(1j * psi) * (y + alpha * np.conj(y))


def build_quantizer(bits: int, adc_input_power: float) -> QuantizerSpec:
    """Uniform midrise quantizer scaled to the pre-ADC per-component power.

    The per-component standard deviation is sqrt(adc_input_power / 2); the
    step is the Gaussian-MSE-optimal uniform step for that deviation.  Levels
    are (2d - D - 1) * step / 2 for d = 1..D and interior thresholds
    (d - D/2) * step, D = 2^bits.
    """
    if adc_input_power <= 0:
        raise ValueError("adc_input_power must be positive")
    sigma_c = np.sqrt(adc_input_power / 2.0)
    step = gaussian_optimal_step(bits) * sigma_c
    D = 2**bits
    d = np.arange(1, D + 1)
    levels = (2 * d - D - 1) * step / 2.0
    thresholds = np.concatenate([[-np.inf], (np.arange(1, D) - D / 2) * step, [np.inf]])
    return QuantizerSpec(bits=bits, step=step, levels=levels, thresholds=thresholds)


def _quantize_real(x, spec: QuantizerSpec):
    # level index i covers [threshold_i, threshold_{i+1}); values at a
    # threshold fall in the upper cell, extremes clip to the outer levels
    D = 2**spec.bits
    idx = np.clip(np.floor(x / spec.step + D / 2), 0, D - 1)
    return (idx - (D - 1) / 2.0) * spec.step


def quantize_complex(y, spec: QuantizerSpec):
    """Quantize real and imaginary parts independently."""
    y = np.asarray(y)
    return _quantize_real(y.real, spec) + 1j * _quantize_real(y.imag, spec)


def impairment_chain(block: np.ndarray, input_power: np.ndarray,
                     adc_input_power: np.ndarray, params: ImpairmentParams,
                     adc_bits: int, rng=None) -> np.ndarray:
    """Apply the enabled stages to one AP's block, shape (..., N, M).

    ``input_power`` and ``adc_input_power`` are the AP's per-antenna AGC
    powers, shape (N,).  Phase noise needs ``rng``; one draw per time sample
    is shared by all N antennas.  Disabled stages are identities.
    """
    toggles = params.toggles
    y = block
    if toggles.lna:
        y = lna(y, np.asarray(input_power)[:, None], params.b1, params.b2)
    if toggles.pn or toggles.iqi:
        if toggles.pn:
            if rng is None:
                raise ValueError("phase noise requires an rng")
            psi = phase_noise_samples(rng, params.sigma2_psi,
                                      size=block.shape[:-2] + block.shape[-1:])
            psi = psi[..., None, :]
        else:
            psi = 0.0
        alpha = params.alpha if toggles.iqi else 0.0
        y = iqi_pn(y, alpha, psi)
    if toggles.adc:
        out = np.array(y, dtype=complex, copy=True)
        for n in range(out.shape[-2]):
            spec = build_quantizer(adc_bits, float(np.asarray(adc_input_power)[n]))
            out[..., n, :] = quantize_complex(out[..., n, :], spec)
        y = out
    return y
