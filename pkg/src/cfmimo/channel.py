"""Correlated Rayleigh channel model.

Spatial correlation matrices are built per (UE, AP, tap) from a clustered
power delay profile (Saleh-Valenzuela style exponential decay over clusters
and taps) combined with uniform-linear-array responses; tap realizations are
then drawn as h = A z with A a factor of the covariance and z ~ CN(0, I).

Array layouts used throughout:

    covariance matrices  (K, L, R, N, N)
    tap realizations     (K, L, R, N)
    frequency channels   (K, L, M, N),  h_bar[m] = sum_r h[r] e^{-j2pi r m / M}
    stacked channels     (M, L*N, K)    AP-major stacking over the antenna axis
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .scenario import NetworkScenario
from .seeding import complex_normal, derive_rng, seed_keys

# eigenvalues below -tol*trace indicate a genuinely indefinite matrix;
# anything in (-tol*trace, 0) is roundoff and is clamped to zero
PSD_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SpatialCorrelation:
    cov: np.ndarray           # (K, L, R, N, N) Hermitian PSD
    sqrt_factors: np.ndarray  # (K, L, R, N, N), A with A A^H = cov
    n_subcarriers: int


@dataclass(frozen=True)
class ChannelRealization:
    taps: np.ndarray          # (K, L, R, N)
    freq: np.ndarray          # (K, L, M, N)
    correlations: SpatialCorrelation

    def stacked(self) -> np.ndarray:
        """Frequency channels stacked over APs: (M, L*N, K)."""
        K, L, M, N = self.freq.shape
        return self.freq.transpose(2, 1, 3, 0).reshape(M, L * N, K)


def ula_response(azimuth: float, elevation: float, n_antennas: int) -> np.ndarray:
    """Half-wavelength ULA steering vector, unit-modulus entries."""
    n = np.arange(n_antennas)
    return np.exp(1j * np.pi * n * np.sin(azimuth) * np.cos(elevation))


def sv_power_delay_profile(rng, n_taps: int, n_clusters: int = 5,
                           cluster_decay: float = 2.0, ray_decay: float = 2.0) -> np.ndarray:
    """Clustered tap-power map, shape (n_clusters, n_taps), total power 1.

    The first cluster arrives at tap 0; later arrival times are cumulative
    unit-mean exponential inter-arrivals, rounded to the tap grid and clipped
    to [0, n_taps-1].  Cluster c carries power e^{-T_c/cluster_decay} at its
    arrival tap, decaying by e^{-1/ray_decay} per subsequent tap; decays are
    in units of the sample period.
    """
    if n_taps < 1 or n_clusters < 1:
        raise ValueError("n_taps and n_clusters must be >= 1")
    if cluster_decay <= 0 or ray_decay <= 0:
        raise ValueError("decay constants must be positive")
    arrivals = np.zeros(n_clusters)
    if n_clusters > 1:
        arrivals[1:] = np.cumsum(rng.exponential(1.0, size=n_clusters - 1))
    arrival_taps = np.clip(np.rint(arrivals).astype(int), 0, n_taps - 1)
    offsets = np.arange(n_taps)[None, :] - arrival_taps[:, None]
    powers = np.where(
        offsets >= 0,
        np.exp(-arrival_taps / cluster_decay)[:, None]
        * np.exp(-np.maximum(offsets, 0) / ray_decay),
        0.0,
    )
    return powers / powers.sum()


def correlation_from_clusters(beta: float, tap_powers: np.ndarray,
                              azimuths: np.ndarray, elevations: np.ndarray,
                              n_antennas: int) -> np.ndarray:
    """Per-tap covariance (R, N, N) from cluster angles and tap powers."""
    steering = np.stack([ula_response(az, el, n_antennas)
                         for az, el in zip(azimuths, elevations)])   # (C, N)
    return beta * np.einsum("cr,cn,cm->rnm", tap_powers, steering, steering.conj())


def _psd_sqrt(cov: np.ndarray) -> np.ndarray:
    """Factor A with A A^H = cov for a stack of Hermitian PSD matrices."""
    eigval, eigvec = np.linalg.eigh(cov)
    trace = np.trace(cov, axis1=-2, axis2=-1).real
    floor = -PSD_TOLERANCE * trace[..., None]
    if np.any(eigval < floor):
        raise np.linalg.LinAlgError("correlation matrix is not positive semidefinite")
    return eigvec * np.sqrt(np.maximum(eigval, 0.0))[..., None, :]


def build_correlations(scenario: NetworkScenario, seed, n_clusters: int = 5,
                       cluster_decay: float = 2.0, ray_decay: float = 2.0,
                       angle_spread_rad: float = np.deg2rad(40.0)) -> SpatialCorrelation:
    """Draw cluster angles and delay profiles for every (UE, AP) pair.

    Cluster azimuth/elevation pairs are uniform in the +-angle_spread
    neighborhood of the line-of-sight angles from AP to UE (elevation
    convention atan2(height difference, horizontal distance)).  The result
    satisfies sum_r trace(cov[k,l,r]) = N * beta_kl.
    """
    dims = scenario.dims
    base = seed_keys(seed)
    cov = np.empty((dims.K, dims.L, dims.R, dims.N, dims.N), dtype=complex)
    for k in range(dims.K):
        for l in range(dims.L):
            rng = derive_rng(*base, "corr", k, l)
            diff = scenario.ue_positions[k] - scenario.ap_positions[l]
            az0 = np.arctan2(diff[1], diff[0])
            el0 = np.arctan2(abs(diff[2]), np.hypot(diff[0], diff[1]))
            az = az0 + rng.uniform(-angle_spread_rad, angle_spread_rad, n_clusters)
            el = el0 + rng.uniform(-angle_spread_rad, angle_spread_rad, n_clusters)
            powers = sv_power_delay_profile(rng, dims.R, n_clusters,
                                            cluster_decay, ray_decay)
            cov[k, l] = correlation_from_clusters(scenario.beta_kl[k, l],
                                                  powers, az, el, dims.N)
    return SpatialCorrelation(cov=cov, sqrt_factors=_psd_sqrt(cov),
                              n_subcarriers=dims.M)


def draw_taps(sqrt_factors: np.ndarray, rng, size=()) -> np.ndarray:
    """Sample h = A z, z ~ CN(0, I), for factors of shape (R, N, N)."""
    if isinstance(size, int):
        size = (size,)
    z = complex_normal(rng, (*size, *sqrt_factors.shape[:-1]))
    return np.einsum("rij,...rj->...ri", sqrt_factors, z)


def tap_dft_matrix(n_taps: int, n_subcarriers: int) -> np.ndarray:
    """(R, M) matrix with entries e^{-j 2 pi r m / M}."""
    r = np.arange(n_taps)[:, None]
    m = np.arange(n_subcarriers)[None, :]
    return np.exp(-2j * np.pi * r * m / n_subcarriers)


def sample_channel(correlations: SpatialCorrelation, seed) -> ChannelRealization:
    """One correlated Rayleigh realization of all (UE, AP) channels."""
    K, L, R, N, _ = correlations.cov.shape
    base = seed_keys(seed)
    taps = np.empty((K, L, R, N), dtype=complex)
    for k in range(K):
        for l in range(L):
            rng = derive_rng(*base, "chan", k, l)
            taps[k, l] = draw_taps(correlations.sqrt_factors[k, l], rng)
    freq = np.einsum("klrn,rm->klmn", taps, tap_dft_matrix(R, correlations.n_subcarriers))
    return ChannelRealization(taps=taps, freq=freq, correlations=correlations)


# -- binary dump (little-endian, for cross-language regression fixtures) ----
#
#   magic "CFCH" | u32 version | u32 K, L, R, M, N
#   taps  complex64, C-order, shape (K, L, R, N)
#   freq  complex64, C-order, shape (K, L, M, N)

_MAGIC = b"CFCH"
_VERSION = 1


def save_realization(realization: ChannelRealization, path) -> None:
    K, L, R, N = realization.taps.shape
    M = realization.freq.shape[2]
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<6I", _VERSION, K, L, R, M, N))
        fh.write(np.ascontiguousarray(realization.taps, dtype="<c8").tobytes())
        fh.write(np.ascontiguousarray(realization.freq, dtype="<c8").tobytes())


def load_realization(path) -> ChannelRealization:
    """Read a dump; the returned realization has no correlation back-reference."""
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ValueError(f"{path} is not a channel dump")
        version, K, L, R, M, N = struct.unpack("<6I", fh.read(24))
        if version != _VERSION:
            raise ValueError(f"unsupported channel dump version {version}")
        taps = np.frombuffer(fh.read(K * L * R * N * 8), dtype="<c8").reshape(K, L, R, N)
        freq = np.frombuffer(fh.read(K * L * M * N * 8), dtype="<c8").reshape(K, L, M, N)
    return ChannelRealization(taps=taps.astype(complex), freq=freq.astype(complex),
                              correlations=None)
