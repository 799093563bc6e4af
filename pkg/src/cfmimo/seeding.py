"""Deterministic RNG derivation for nested Monte-Carlo loops.

Every stochastic stage of the simulator draws from a generator derived from
a tuple of keys such as ``(master_seed, "chan", drop, realization)``.  Sibling
streams are independent of the order in which they are created, so work items
can run in parallel without changing any result.
"""

from __future__ import annotations

import hashlib

import numpy as np

SeedLike = "int | str | tuple | np.random.Generator"


def _as_entropy(key) -> int:
    if isinstance(key, (bool, float)):
        raise TypeError(f"seed keys must be int or str, got {type(key).__name__}")
    if isinstance(key, (int, np.integer)):
        if key < 0:
            raise ValueError(f"seed keys must be nonnegative, got {key}")
        return int(key)
    if isinstance(key, str):
        digest = hashlib.sha256(key.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "little")
    raise TypeError(f"seed keys must be int or str, got {type(key).__name__}")


def derive_rng(*keys) -> np.random.Generator:
    """Generator seeded from a tuple of ints and string tags."""
    if not keys:
        raise ValueError("derive_rng needs at least one key")
    return np.random.default_rng(
        np.random.SeedSequence([_as_entropy(k) for k in keys])
    )


def as_rng(seed) -> np.random.Generator:
    """Accept a Generator, a single int/str, or a tuple of derivation keys."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, (tuple, list)):
        return derive_rng(*seed)
    return derive_rng(seed)


def seed_keys(seed) -> tuple:
    """Normalize a seed argument into a tuple usable as a derivation prefix."""
    if isinstance(seed, np.random.Generator):
        raise TypeError("this operation derives child streams and needs int/str keys, not a Generator")
    if isinstance(seed, (tuple, list)):
        return tuple(seed)
    return (seed,)


def complex_normal(rng: np.random.Generator, shape=(), variance: float = 1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian draws, CN(0, variance)."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
