"""Counter-based pseudo-random streams (splitmix64).

Every output is a pure function of (seed, counter), so independent
substreams can be evaluated in any order, split across workers, and
still produce bit-identical results. The generator is the splitmix64
finalizer applied to an additive counter sequence; it is platform
independent and has no sequential state.
"""

from __future__ import annotations

import numpy as np

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def mix64(z: int) -> int:
    """Splitmix64 finalizer on a plain Python integer, reduced mod 2^64."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def raw64(seed: int, start: int, count: int) -> np.ndarray:
    """Vector of uint64 stream values at counters start .. start+count-1.

    Element i equals mix64(seed + (start+i+1) * GOLDEN_GAMMA); the scalar
    and vector paths agree exactly.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    # uint64 arithmetic wraps silently on arrays; silence the overflow
    # warning that numpy emits for the intended modular multiplies
    with np.errstate(over="ignore"):
        ctr = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        z = ctr * np.uint64(GOLDEN_GAMMA) + np.uint64(seed & _MASK64)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def substream_seed(master_seed: int, index: int) -> int:
    """Seed of substream `index` under `master_seed`.

    Defined as the master stream's value at counter `index`, so substreams
    inherit the determinism contract of raw64.
    """
    if index < 0:
        raise ValueError("substream index must be non-negative")
    return mix64((master_seed + (index + 1) * GOLDEN_GAMMA) & _MASK64)


def uniform_below(seed: int, n: int, count: int) -> np.ndarray:
    """`count` exact-uniform draws from [0, n), deterministic in (seed, n, count).

    Rejection sampling against the largest multiple of n below 2^64 makes
    the draws exactly uniform, not just uniform up to modulo bias.
    Rejected lanes redraw from fresh counters assigned in lane order, so
    the output is a pure function of the arguments.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > (1 << 63):
        raise ValueError("n exceeds the supported range")
    if count < 0:
        raise ValueError("count must be non-negative")
    if n == 1:
        return np.zeros(count, dtype=np.int64)
    out = raw64(seed, 0, count)
    limit = ((1 << 64) // n) * n
    if limit <= _MASK64:
        lim = np.uint64(limit)
        next_ctr = count
        bad = np.flatnonzero(out >= lim)
        while bad.size:
            fresh = raw64(seed, next_ctr, bad.size)
            next_ctr += int(bad.size)
            out[bad] = fresh
            bad = bad[fresh >= lim]
    return (out % np.uint64(n)).astype(np.int64)
