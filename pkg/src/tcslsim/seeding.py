"""Per-realization seed derivation for deterministic parallel generation.

Each realization index gets its own 32-bit seed so workers can draw
independently in any order while the merged output stays a pure function
of the base seed.  The mixer is a 32-bit finalizer (multiply/xor-shift
avalanche) applied to base XOR index; it is a bijection of the 32-bit
space, so distinct indices under the same base can only collide once the
index range itself wraps 2^32 — far beyond any batch size used here.
"""

from __future__ import annotations

_MASK32 = 0xFFFFFFFF


def derive_seed(base_seed: int, index: int) -> int:
    """Mix (base_seed, index) into a well-separated 32-bit seed."""
    if not 0 <= base_seed <= _MASK32:
        raise ValueError("base_seed must be a 32-bit unsigned integer")
    if index < 0:
        raise ValueError("index must be non-negative")
    h = (base_seed ^ index) & _MASK32
    h ^= h >> 16
    h = (h * 0x85EBCA6B) & _MASK32
    h ^= h >> 13
    h = (h * 0xC2B2AE35) & _MASK32
    h ^= h >> 16
    return h
