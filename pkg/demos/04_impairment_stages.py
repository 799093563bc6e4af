"""Behavior of the four impairment stages in isolation.

Prints the LNA compression characteristic, the IQ-imbalance image level,
the phase-noise rotation statistics and the quantizer transfer / SQNR, all
at the reference hardware parameters.
"""

import numpy as np

from cfmimo import (build_quantizer, iqi_pn, lna, phase_noise_samples,
                    quantize_complex, scenario_from_config)
from cfmimo.seeding import complex_normal, derive_rng

params = scenario_from_config({"impairments": {"pn_variance_mode": "ar1"}}).impairments
rng = derive_rng(0)

print(f"LNA: b1 = {params.b1}, b2 = {params.b2} (AGC-normalized cubic)")
for level_db in (-10, -3, 0, 3, 6):
    amp = 10 ** (level_db / 20)
    out = lna(amp + 0j, 1.0, params.b1, params.b2)
    gain_db = 20 * np.log10(abs(out) / amp)
    print(f"  input {level_db:+3d} dB rel. AGC point -> gain {gain_db:6.3f} dB")

print(f"\nIQ imbalance: alpha = {params.alpha:.4f}")
y = complex_normal(rng, (200_000,))
out = iqi_pn(y, params.alpha, 0.0)
image = np.mean(np.abs(out - y) ** 2) / np.mean(np.abs(y) ** 2)
print(f"  conjugate image level: {10 * np.log10(image):.1f} dB "
      f"(|alpha|^2 = {10 * np.log10(abs(params.alpha) ** 2):.1f} dB)")

print(f"\nphase noise: sigma^2 = {params.sigma2_psi:.4f} rad^2 "
      f"(lambda = {params.lambda_psi}, innovation rate {params.beta_pn:.0f}/s)")
psi = phase_noise_samples(rng, params.sigma2_psi, (200_000,))
coherent = abs(np.mean(np.exp(1j * psi)))
print(f"  mean rotation |E e^(j psi)| = {coherent:.4f} "
      f"-> coherent-signal loss {-20 * np.log10(coherent):.2f} dB")

print("\n2-bit uniform midrise quantizer at unit per-component deviation:")
spec = build_quantizer(2, 2.0)
print(f"  step {spec.step:.3f}, levels {np.round(spec.levels, 3)}, "
      f"inner thresholds {np.round(spec.thresholds[1:-1], 3)}")
x = complex_normal(rng, (500_000,), variance=2.0)
q = quantize_complex(x, spec)
sqnr = -10 * np.log10(np.mean(np.abs(x - q) ** 2) / 2.0)
print(f"  Gaussian-input SQNR: {sqnr:.2f} dB")
for bits in (1, 2, 3, 4, 8):
    spec_b = build_quantizer(bits, 2.0)
    qb = quantize_complex(x, spec_b)
    sqnr_b = -10 * np.log10(np.mean(np.abs(x - qb) ** 2) / 2.0)
    print(f"  {bits} bit(s): {sqnr_b:5.2f} dB")
