"""SplitMix64, the project's only source of pseudorandomness.

Everything derived from it is spelled out here so that splits and
synthetic logs can be reproduced bit-for-bit by any implementation:

* ``next_u64``: state += 0x9E3779B97F4A7C15; mix with the standard
  (30, 0xBF58476D1CE4E5B9), (27, 0x94D049BB133111EB), 31 shift/multiply
  finalizer, all modulo 2**64.
* ``random``: ``(next_u64() >> 11) * 2**-53``, uniform on [0, 1).
* ``below(n)``: rejection sampling, drawing until ``x < n * (2**64 // n)``
  and returning ``x % n``.
* ``shuffle``: Fisher-Yates from the last index down, ``j = below(i + 1)``.
"""

from __future__ import annotations

from typing import MutableSequence

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        limit = ((1 << 64) // n) * n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def shuffle(self, seq: MutableSequence) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]
