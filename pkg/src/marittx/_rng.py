"""Counter-based uniform random streams shared by both kernel backends.

Agent-mode sampling must give identical trajectories for a given seed no
matter which backend runs it, so uniforms come from a stateless splitmix64
hash of (seed, counter) instead of a stateful generator. The counter for a
draw is ``step * n_nodes + node``, which makes the stream order-independent
and lets the numpy backend generate whole blocks at once.
"""

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
_M64 = (1 << 64) - 1
_INV_2_53 = 2.0**-53


def mix64(value: int) -> int:
    """splitmix64 finalizer on a plain Python integer (wraps mod 2^64)."""
    z = value & _M64
    z = ((z ^ (z >> 30)) * MIX1) & _M64
    z = ((z ^ (z >> 27)) * MIX2) & _M64
    return z ^ (z >> 31)


def stream_seed(seed: int, start_time: float) -> int:
    """Effective stream seed for a run starting at ``start_time``.

    Folding the start time into the seed decorrelates consecutive simulation
    windows that reuse the same logical seed.
    """
    time_bits = int(np.float64(start_time).view(np.uint64))
    return mix64((seed & _M64) ^ time_bits)


def uniform(seed: int, counter: int) -> float:
    """Single uniform in [0, 1); pure-Python reference implementation."""
    z = (seed + (counter + 1) * GOLDEN) & _M64
    z = ((z ^ (z >> 30)) * MIX1) & _M64
    z = ((z ^ (z >> 27)) * MIX2) & _M64
    z = z ^ (z >> 31)
    return (z >> 11) * _INV_2_53


def uniform_block(seed: int, counters: np.ndarray) -> np.ndarray:
    """Vectorized uniforms for one seed and an array of counters."""
    z = np.uint64(seed & _M64) + (counters.astype(np.uint64) + np.uint64(1)) * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    z ^= z >> np.uint64(31)
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53


def uniform_grid(seeds: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Uniforms for every (seed, counter) pair; shape (len(seeds), len(counters))."""
    z = seeds.astype(np.uint64)[:, None] + (
        counters.astype(np.uint64)[None, :] + np.uint64(1)
    ) * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    z ^= z >> np.uint64(31)
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53
