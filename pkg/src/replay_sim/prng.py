"""SplitMix64, chosen because it is short enough to reproduce bit-exactly anywhere."""

from __future__ import annotations

from typing import Sequence, TypeVar

from .model import fnv1a_64

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

T = TypeVar("T")


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection of the biased low tail."""
        if n <= 0:
            raise ValueError("n must be positive")
        threshold = (1 << 64) % n
        while True:
            x = self.next_u64()
            if x >= threshold:
                return x % n

    def choice(self, items: Sequence[T]) -> T:
        return items[self.below(len(items))]

    def chance(self, numerator: int, denominator: int) -> bool:
        return self.below(denominator) < numerator


def derive_seed(seed: int, *labels) -> int:
    """Independent 64-bit sub-seed for a (seed, label...) combination."""
    text = "\x1f".join([str(seed & MASK64), *map(str, labels)])
    return SplitMix64(fnv1a_64(text.encode("utf-8"))).next_u64()
