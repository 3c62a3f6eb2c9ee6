"""Seeded pseudo-randomness with a pinned, documented algorithm.

Traces must reproduce byte-for-byte across runs and reimplementations, so
the generator is spelled out rather than borrowed from a runtime library:

* state update: ``state = (state + 0x9E3779B97F4A7C15) mod 2^64``
* output mix (splitmix64): ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
  z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2^64)
* bounded draw: ``below(n) = (next_u64() * n) >> 64`` (multiply-shift)
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return (z ^ (z >> 31)) & _MASK

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return (self.next_u64() * n) >> 64

    def choice(self, seq):
        return seq[self.below(len(seq))]
