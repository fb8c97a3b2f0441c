"""Synthetic series generators used by the tests, demos, and benchmarks."""

from __future__ import annotations

import numpy as np


def random_walk(n: int, seed: int = 0, scale: float = 1.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.cumsum(rng.standard_normal(n)) * scale


def smooth_walk(n: int, seed: int = 0, window: int = 8) -> np.ndarray:
    """Random walk with short-range smoothing; bounds stay tight on it."""
    rng = np.random.default_rng(seed)
    steps = rng.standard_normal(n + window)
    kernel = np.ones(window) / window
    return np.cumsum(np.convolve(steps, kernel, mode="valid")[:n])


def planted_pair_series(n: int, pattern_length: int, offsets=(100, 400),
                        jitter: float = 0.02, seed: int = 0) -> np.ndarray:
    """Random-walk background with one pattern planted at two offsets.

    The second copy carries a deterministic ramped perturbation: the pair's
    distance is strictly positive at every window length, and any shifted
    window pair inside the pattern picks up strictly more perturbation, so
    the planted offsets win without ties.
    """
    rng = np.random.default_rng(seed * 7919 + 1)
    t = random_walk(n, seed=seed, scale=1.0)
    pattern = np.cumsum(rng.standard_normal(pattern_length))
    pattern = (pattern - pattern.mean()) / (pattern.std() + 1e-12)
    ramp = np.linspace(0.1, 3.0, pattern_length)
    signs = np.where(np.arange(pattern_length) % 2 == 0, 1.0, -1.0)
    a, b = offsets
    t[a:a + pattern_length] = pattern * 3.0
    t[b:b + pattern_length] = pattern * 3.0 + jitter * ramp * signs
    return t


def planted_cluster_series(n: int, pattern_length: int, offsets,
                           jitter: float = 0.02, seed: int = 0) -> np.ndarray:
    """Random-walk background with several jittered copies of one pattern."""
    rng = np.random.default_rng(seed * 7919 + 1)
    t = random_walk(n, seed=seed, scale=1.0)
    pattern = np.cumsum(rng.standard_normal(pattern_length))
    pattern = (pattern - pattern.mean()) / (pattern.std() + 1e-12)
    for off in offsets:
        noise = rng.standard_normal(pattern_length) * jitter
        t[off:off + pattern_length] = pattern * 3.0 + noise
    return t


def planted_motif_benchmark(n: int, pattern_length: int, seed: int = 0) -> np.ndarray:
    """Large smooth series with one strong planted pair, for timing runs."""
    t = smooth_walk(n, seed=seed, window=16)
    t = t / (t.std() + 1e-12)
    rng = np.random.default_rng(seed * 7919 + 5)
    pattern = np.cumsum(rng.standard_normal(pattern_length))
    pattern = (pattern - pattern.mean()) / (pattern.std() + 1e-12)
    a, b = n // 4, 3 * n // 4
    ramp = np.linspace(0.5, 1.5, pattern_length)
    signs = np.where(np.arange(pattern_length) % 2 == 0, 1.0, -1.0)
    t[a:a + pattern_length] = pattern * 4.0
    t[b:b + pattern_length] = pattern * 4.0 + 0.01 * ramp * signs
    return t


def taxi_like_series(days: int = 75, samples_per_day: int = 48,
                     anomaly_day: int = 33, seed: int = 7) -> np.ndarray:
    """Periodic half-hourly ridership shape with a double-count splice.

    Two consecutive samples in the small hours of one day absorb the two
    samples that follow them — the same corruption a clock set back one hour
    inflicts on an unadjusted accumulator.
    """
    rng = np.random.default_rng(seed)
    hours = (np.arange(samples_per_day) + 0.5) / samples_per_day * 24.0
    daily = (12.0
             + 8.0 * np.exp(-0.5 * ((hours - 9.0) / 2.0) ** 2)
             + 10.0 * np.exp(-0.5 * ((hours - 19.0) / 2.5) ** 2)
             - 7.0 * np.exp(-0.5 * ((hours - 3.5) / 2.0) ** 2))
    t = np.tile(daily, days)
    weekly = 1.0 + 0.15 * np.sin(2 * np.pi * np.arange(t.size) / (7 * samples_per_day))
    t = t * weekly + rng.normal(0.0, 0.35, t.size)
    splice = anomaly_day * samples_per_day + 4   # 02:00 slot
    t[splice] += t[splice + 2]
    t[splice + 1] += t[splice + 3]
    return t
