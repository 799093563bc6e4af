"""Experiment configuration: dimensions, radio constants, impairment
parameters and network geometry.

A :class:`NetworkScenario` is the single immutable object the rest of the
pipeline consumes.  It is resolved from a JSON config file with the schema
below; every key is optional and falls back to the defaults in
``DEFAULT_CONFIG`` (a 16-AP / 10-UE network in a 0.5 x 0.5 km area at
7.5 GHz):

    dims         {L, N, K, M, R, adc_bits}
    radio        {fc_ghz, scs_hz, noise_figure_db, uplink_power_w}
    impairments  {b1_re, b1_im, b2_re, b2_im, alpha_mag, alpha_phase_rad,
                  lambda_psi, beta_pn, pn_variance_mode,
                  toggles {lna, pn, iqi, adc}}
    layout       {area_m, height_diff_m, shadow_std_db}
    mc           {drops, channel_realizations, bussgang_samples, seed}

``uplink_power_w`` is one transmit power shared by all UEs, or a list with
one entry per UE.  Derived quantities (bandwidth, sample period, noise power,
phase-noise variance) are populated on load and serialized back by
:func:`to_config`, so load -> save -> load round-trips field for field.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .seeding import as_rng

THERMAL_NOISE_DBM_PER_HZ = -174.0

DEFAULT_CONFIG = {
    "dims": {"L": 16, "N": 4, "K": 10, "M": 256, "R": 6, "adc_bits": 2},
    "radio": {
        "fc_ghz": 7.5,
        "scs_hz": 15e3,
        "noise_figure_db": 7.0,
        "uplink_power_w": 0.1,
    },
    "impairments": {
        "b1_re": 1.065,
        "b1_im": 0.0,
        "b2_re": -0.028,
        "b2_im": 0.0,
        "alpha_mag": 0.18,
        "alpha_phase_rad": 0.1 * math.pi,
        "lambda_psi": 0.99,
        "beta_pn": 1e3,
        "pn_variance_mode": "default",
        "toggles": {"lna": True, "pn": True, "iqi": True, "adc": True},
    },
    "layout": {"area_m": 500.0, "height_diff_m": 10.0, "shadow_std_db": 8.2},
    "mc": {"drops": 50, "channel_realizations": 10, "bussgang_samples": 1000, "seed": 0},
}


class ConfigError(ValueError):
    """Config validation failure; the message names the violated rule."""


@dataclass(frozen=True)
class SystemDims:
    L: int          # access points
    N: int          # antennas per AP
    K: int          # single-antenna UEs
    M: int          # OFDM subcarriers
    R: int          # channel taps (CP length is R-1)
    adc_bits: int


@dataclass(frozen=True)
class RadioParams:
    fc_ghz: float
    scs_hz: float
    bandwidth_hz: float
    sample_period_s: float
    noise_figure_db: float
    noise_power_dbm: float
    noise_power_w: float
    uplink_power_w: np.ndarray  # shape (K,), per-UE transmit power


@dataclass(frozen=True)
class Toggles:
    lna: bool = True
    pn: bool = True
    iqi: bool = True
    adc: bool = True

    def as_dict(self) -> dict:
        return {"lna": self.lna, "pn": self.pn, "iqi": self.iqi, "adc": self.adc}


@dataclass(frozen=True)
class ImpairmentParams:
    b1: complex                 # LNA linear gain
    b2: complex                 # LNA cubic gain
    alpha: complex              # IQ-imbalance conjugate weight
    lambda_psi: float           # adjacent-sample phase-noise correlation
    beta_pn: float              # phase-noise innovation rate (1/s)
    pn_variance_mode: str       # "default" or "ar1", see phase_noise_variance
    sigma2_psi: float           # derived per-sample phase variance (rad^2)
    toggles: Toggles = field(default_factory=Toggles)


@dataclass(frozen=True)
class LayoutParams:
    area_m: float
    height_diff_m: float
    shadow_std_db: float


@dataclass(frozen=True)
class MonteCarloParams:
    drops: int
    channel_realizations: int
    bussgang_samples: int
    seed: int


@dataclass(frozen=True)
class NetworkScenario:
    dims: SystemDims
    radio: RadioParams
    impairments: ImpairmentParams
    layout: LayoutParams
    mc: MonteCarloParams
    ap_positions: np.ndarray    # (L, 3) meters
    ue_positions: np.ndarray    # (K, 3) meters
    beta_kl: np.ndarray         # (K, L) linear large-scale gains


def pathloss_db(d_3d_m, fc_ghz: float, shadow_db=0.0):
    """Urban-microcell street-canyon pathloss gain in dB (3GPP TR 38.901).

    ``d_3d_m`` is the 3D node distance in meters, ``fc_ghz`` the carrier in
    GHz; ``shadow_db`` is an externally sampled log-normal shadowing term.
    """
    d = np.asarray(d_3d_m, dtype=float)
    if np.any(d <= 0):
        raise ValueError("pathloss_db requires positive distance")
    if fc_ghz <= 0:
        raise ValueError("pathloss_db requires positive carrier frequency")
    return -32.4 - 20.0 * np.log10(fc_ghz) - 31.9 * np.log10(d) + shadow_db


def noise_power_dbm(bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal noise power over a bandwidth, in dBm."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be positive")
    return THERMAL_NOISE_DBM_PER_HZ + 10.0 * np.log10(bandwidth_hz) + noise_figure_db


def dbm_to_watt(x_dbm: float) -> float:
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def phase_noise_variance(beta_pn: float, sample_period_s: float,
                         lambda_psi: float, mode: str = "default") -> float:
    """Per-sample phase-noise variance in rad^2.

    mode "default": (2*pi*beta*T_s) / (1 - lambda)^2
    mode "ar1":     (2*pi*beta*T_s) / (1 - lambda^2), the stationary variance
                    of an AR(1) process with innovation variance 2*pi*beta*T_s.

    At lambda = 0.99 the two differ by a factor ~199; the "default" mapping
    yields a variance well above 1 rad^2, which buries every other impairment.
    The shipped configs therefore select "ar1" (see README).
    """
    if not 0.0 < lambda_psi < 1.0:
        raise ConfigError(f"0<lambda_psi<1 violated: lambda_psi={lambda_psi}")
    innovation = 2.0 * math.pi * beta_pn * sample_period_s
    if mode == "default":
        return innovation / (1.0 - lambda_psi) ** 2
    if mode == "ar1":
        return innovation / (1.0 - lambda_psi**2)
    raise ConfigError(f"unknown pn_variance_mode: {mode!r} (expected 'default' or 'ar1')")


def _merged_config(cfg: dict) -> dict:
    merged = copy.deepcopy(DEFAULT_CONFIG)
    for section, values in cfg.items():
        if section not in merged:
            raise ConfigError(f"unknown config section: {section!r}")
        if not isinstance(values, dict):
            raise ConfigError(f"config section {section!r} must be an object")
        for key, val in values.items():
            if key not in merged[section]:
                raise ConfigError(f"unknown key {section}.{key}")
            if key == "toggles":
                for tkey, tval in val.items():
                    if tkey not in merged[section]["toggles"]:
                        raise ConfigError(f"unknown key impairments.toggles.{tkey}")
                    merged[section]["toggles"][tkey] = bool(tval)
            else:
                merged[section][key] = val
    return merged


def _build_parts(cfg: dict):
    d = cfg["dims"]
    for name in ("L", "N", "K", "M", "R", "adc_bits"):
        value = d[name]
        if int(value) != value or value < 1:
            raise ConfigError(f"dims.{name} must be an integer >= 1, got {value}")
    dims = SystemDims(L=int(d["L"]), N=int(d["N"]), K=int(d["K"]),
                      M=int(d["M"]), R=int(d["R"]), adc_bits=int(d["adc_bits"]))
    if not dims.M > dims.R:
        raise ConfigError(f"M>R violated: M={dims.M}, R={dims.R}")

    r = cfg["radio"]
    if r["fc_ghz"] <= 0 or r["scs_hz"] <= 0:
        raise ConfigError("radio.fc_ghz and radio.scs_hz must be positive")
    bandwidth = dims.M * float(r["scs_hz"])
    power = r["uplink_power_w"]
    power = np.full(dims.K, float(power)) if np.isscalar(power) else np.asarray(power, dtype=float)
    if power.shape != (dims.K,):
        raise ConfigError(f"radio.uplink_power_w must be scalar or length K={dims.K}")
    if np.any(power <= 0):
        raise ConfigError("radio.uplink_power_w entries must be positive")
    sigma2_dbm = float(noise_power_dbm(bandwidth, float(r["noise_figure_db"])))
    radio = RadioParams(
        fc_ghz=float(r["fc_ghz"]),
        scs_hz=float(r["scs_hz"]),
        bandwidth_hz=bandwidth,
        sample_period_s=1.0 / bandwidth,
        noise_figure_db=float(r["noise_figure_db"]),
        noise_power_dbm=sigma2_dbm,
        noise_power_w=dbm_to_watt(sigma2_dbm),
        uplink_power_w=power,
    )

    i = cfg["impairments"]
    lam = float(i["lambda_psi"])
    if not 0.0 < lam < 1.0:
        raise ConfigError(f"0<lambda_psi<1 violated: lambda_psi={lam}")
    if i["beta_pn"] <= 0:
        raise ConfigError("impairments.beta_pn must be positive")
    impair = ImpairmentParams(
        b1=complex(i["b1_re"], i["b1_im"]),
        b2=complex(i["b2_re"], i["b2_im"]),
        alpha=i["alpha_mag"] * np.exp(1j * i["alpha_phase_rad"]),
        lambda_psi=lam,
        beta_pn=float(i["beta_pn"]),
        pn_variance_mode=str(i["pn_variance_mode"]),
        sigma2_psi=phase_noise_variance(float(i["beta_pn"]), radio.sample_period_s,
                                        lam, str(i["pn_variance_mode"])),
        toggles=Toggles(**{k: bool(v) for k, v in i["toggles"].items()}),
    )

    lay = cfg["layout"]
    if lay["area_m"] <= 0:
        raise ConfigError("layout.area_m must be positive")
    if lay["height_diff_m"] < 0 or lay["shadow_std_db"] < 0:
        raise ConfigError("layout.height_diff_m and layout.shadow_std_db must be nonnegative")
    layout = LayoutParams(float(lay["area_m"]), float(lay["height_diff_m"]),
                          float(lay["shadow_std_db"]))

    m = cfg["mc"]
    for name in ("drops", "channel_realizations", "bussgang_samples"):
        if int(m[name]) != m[name] or m[name] < 1:
            raise ConfigError(f"mc.{name} must be an integer >= 1, got {m[name]}")
    if int(m["seed"]) != m["seed"] or m["seed"] < 0:
        raise ConfigError(f"mc.seed must be a nonnegative integer, got {m['seed']}")
    mc = MonteCarloParams(int(m["drops"]), int(m["channel_realizations"]),
                          int(m["bussgang_samples"]), int(m["seed"]))
    return dims, radio, impair, layout, mc


def _draw_geometry(dims: SystemDims, radio: RadioParams, layout: LayoutParams, rng):
    """AP/UE drop: uniform horizontal positions, fixed vertical separation."""
    ap_xy = rng.uniform(0.0, layout.area_m, size=(dims.L, 2))
    ue_xy = rng.uniform(0.0, layout.area_m, size=(dims.K, 2))
    shadow = rng.normal(0.0, layout.shadow_std_db, size=(dims.K, dims.L))
    ap = np.column_stack([ap_xy, np.full(dims.L, layout.height_diff_m)])
    ue = np.column_stack([ue_xy, np.zeros(dims.K)])
    d3d = np.linalg.norm(ue[:, None, :] - ap[None, :, :], axis=-1)
    beta = 10.0 ** (pathloss_db(d3d, radio.fc_ghz, shadow) / 10.0)
    return ap, ue, beta


def scenario_from_config(cfg: dict) -> NetworkScenario:
    """Resolve a (possibly partial) config dict into a full scenario.

    Geometry is drawn deterministically from mc.seed, so identical configs
    resolve to identical scenarios.
    """
    merged = _merged_config(cfg)
    dims, radio, impair, layout, mc = _build_parts(merged)
    rng = as_rng((mc.seed, "geometry"))
    ap, ue, beta = _draw_geometry(dims, radio, layout, rng)
    return NetworkScenario(dims, radio, impair, layout, mc, ap, ue, beta)


def load_config(path) -> NetworkScenario:
    """Load and validate a JSON config file; returns the resolved scenario."""
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config parse failure in {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return scenario_from_config(cfg)


def drop_network(scenario: NetworkScenario, seed) -> NetworkScenario:
    """Redraw AP/UE positions and large-scale gains for an existing scenario."""
    rng = as_rng(seed)
    ap, ue, beta = _draw_geometry(scenario.dims, scenario.radio, scenario.layout, rng)
    return replace(scenario, ap_positions=ap, ue_positions=ue, beta_kl=beta)


def to_config(scenario: NetworkScenario) -> dict:
    """Serialize a scenario back to the JSON config schema."""
    power = scenario.radio.uplink_power_w
    power_out = float(power[0]) if scenario.dims.K > 0 and np.all(power == power[0]) else [float(p) for p in power]
    return {
        "dims": {"L": scenario.dims.L, "N": scenario.dims.N, "K": scenario.dims.K,
                 "M": scenario.dims.M, "R": scenario.dims.R, "adc_bits": scenario.dims.adc_bits},
        "radio": {
            "fc_ghz": scenario.radio.fc_ghz,
            "scs_hz": scenario.radio.scs_hz,
            "noise_figure_db": scenario.radio.noise_figure_db,
            "uplink_power_w": power_out,
        },
        "impairments": {
            "b1_re": scenario.impairments.b1.real,
            "b1_im": scenario.impairments.b1.imag,
            "b2_re": scenario.impairments.b2.real,
            "b2_im": scenario.impairments.b2.imag,
            "alpha_mag": float(abs(scenario.impairments.alpha)),
            "alpha_phase_rad": float(np.angle(scenario.impairments.alpha)),
            "lambda_psi": scenario.impairments.lambda_psi,
            "beta_pn": scenario.impairments.beta_pn,
            "pn_variance_mode": scenario.impairments.pn_variance_mode,
            "toggles": scenario.impairments.toggles.as_dict(),
        },
        "layout": {"area_m": scenario.layout.area_m,
                   "height_diff_m": scenario.layout.height_diff_m,
                   "shadow_std_db": scenario.layout.shadow_std_db},
        "mc": {"drops": scenario.mc.drops,
               "channel_realizations": scenario.mc.channel_realizations,
               "bussgang_samples": scenario.mc.bussgang_samples,
               "seed": scenario.mc.seed},
    }


def save_config(scenario: NetworkScenario, path) -> None:
    Path(path).write_text(json.dumps(to_config(scenario), indent=2, sort_keys=True) + "\n")
