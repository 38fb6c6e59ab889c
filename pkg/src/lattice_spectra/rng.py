"""SplitMix64 generator used for every seeded choice in the package.

The update is the published SplitMix64 step::

    state = (state + 0x9E3779B97F4A7C15) mod 2**64
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    return z ^ (z >> 31)

Integers in ``[0, m)`` are drawn by rejection (values at or above the
largest multiple of ``m`` below 2**64 are redrawn, then reduced mod ``m``),
and floats in ``[0, 1)`` are ``(next >> 11) * 2**-53``.  Any language that
follows these three rules reproduces the same regions and search traces.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        """Uniform integer in ``[0, m)``."""
        if m <= 0:
            raise ValueError(f"below() needs a positive bound, got {m}")
        limit = (1 << 64) - ((1 << 64) % m)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % m

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))
