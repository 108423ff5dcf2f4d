"""Deterministic integer mixing used everywhere a seeded choice is needed.

All pseudo-random decisions in the package (schedule interleaving, gap
selection, noise flips) go through ``mix64`` so that runs are exactly
reproducible across platforms: no floats, no ``random`` module state.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1

# Domain-separation tags for the different decision streams.
TAG_BIRTH = 0xB1127
TAG_GAP = 0x6A9
TAG_DESC = 0xDE5C
TAG_NOISE = 0x0153

def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)

def mix64(*parts: int) -> int:
    """Hash a tuple of integers to a 64-bit value, order-sensitive."""
    acc = 0x243F6A8885A308D3
    for p in parts:
        acc = _splitmix64((acc ^ (p & _MASK)) & _MASK)
        # fold in high bits of negative / oversized ints
        if p < 0 or p > _MASK:
            acc = _splitmix64((acc ^ ((abs(p) >> 64) & _MASK) ^ 1) & _MASK)
    return acc
