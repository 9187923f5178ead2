"""xorshift64* generator with splitmix64 seeding.

Implemented here (a few lines) rather than taken from numpy so that streams
are fixed by the algorithm and do not depend on library versions.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


class XorShift64Star:
    algorithm = "xorshift64*"

    def __init__(self, seed: int, stream: int = 0):
        s = splitmix64((seed & _MASK) ^ splitmix64(stream & _MASK))
        self.state = s or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        if n == 1:
            return 0
        bits = (n - 1).bit_length()
        while True:
            v = 0
            got = 0
            while got < bits:
                v = (v << 64) | self.next_u64()
                got += 64
            v >>= got - bits
            if v < n:
                return v

    def integers(self, n: int, count: int) -> list[int]:
        return [self.below(n) for _ in range(count)]

    def signed(self, bound: int) -> int:
        """Uniform integer in ``[-bound, bound]``."""
        return self.below(2 * bound + 1) - bound
