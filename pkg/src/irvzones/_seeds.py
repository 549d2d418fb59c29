"""Deterministic 64-bit seed streams for reproducible randomized runs."""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    x &= _MASK64
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK64
    return x ^ (x >> 31)


def stream_seed(seed: int, counter: int) -> int:
    """Independent 64-bit stream seed for iteration `counter` of a run."""
    return splitmix64((seed & _MASK64) + (counter + 1) * _GOLDEN)
