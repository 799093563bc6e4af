"""Effective linear channel of the distorted receiver.

Estimates the per-subcarrier gain matrix and distortion covariance for one
channel realization, shows the estimator converging onto the analytic values
when all impairments are off, and how distortion reshapes the covariance
when they are on.
"""

from dataclasses import replace

import numpy as np

from cfmimo import (Toggles, build_correlations, estimate_statistics,
                    linear_statistics, sample_channel, scenario_from_config)

cfg = {"dims": {"L": 2, "N": 2, "K": 3, "M": 32, "R": 4},
       "radio": {"scs_hz": 3.84e6 / 32},
       "layout": {"area_m": 200.0},
       "impairments": {"pn_variance_mode": "ar1"}}
scenario = scenario_from_config(cfg)
corr = build_correlations(scenario, (0, "corr"))
chan = sample_channel(corr, (0, "chan"))

linear_scenario = replace(scenario, impairments=replace(
    scenario.impairments, toggles=Toggles(False, False, False, False)))
reference = linear_statistics(chan, linear_scenario)

print("estimator convergence with all impairments off:")
for T in (50, 200, 800, 3200):
    stats = estimate_statistics(chan, linear_scenario, T, (0, "buss"))
    rel = np.linalg.norm(stats.gain - reference.gain) / np.linalg.norm(reference.gain)
    print(f"  T = {T:5d} chain runs -> relative gain error {rel:.4f}")

print("\nwith the full impairment chain (2-bit ADC, LNA, PN, IQI):")
stats = estimate_statistics(chan, scenario, 2000, (0, "buss"))
ratio = np.linalg.norm(stats.gain) / np.linalg.norm(reference.gain)
print(f"  gain shrinkage |B_impaired| / |B_linear| = {ratio:.3f}")

noise_var = scenario.radio.noise_power_w
diag = np.einsum("mii->mi", stats.distortion_cov).real
print(f"  distortion+noise diagonal vs thermal noise alone: "
      f"{diag.mean() / noise_var:.1f}x")
m = 7
eig = np.linalg.eigvalsh(stats.distortion_cov[m])[::-1]
print(f"  covariance eigenvalues at subcarrier {m} (normalized): "
      f"{np.round(eig / eig.max(), 3)}")
print("  the spread shows the distortion is colored, which is exactly what")
print("  the distortion-aware combiner exploits")
