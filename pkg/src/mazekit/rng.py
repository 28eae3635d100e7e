"""Seeded randomness for every stochastic step in the toolkit.

All randomness flows through SplitMix64, a 64-bit mixing generator small
enough to restate in a few lines in any language.  Given the same seed the
stream is identical everywhere, which is what makes generated corpora and
dataset splits byte-reproducible.

Reference sequence (seed 0): the first three draws are
0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """SplitMix64 finalizer: avalanche a 64-bit value."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(master: int, index: int) -> int:
    """Seed for the index-th item of a batch.

    Equals the (index+1)-th draw of a SplitMix64 stream seeded with
    ``master``, so per-item work can run in any order or in parallel
    without changing results.
    """
    return mix64((master + (index + 1) * GOLDEN_GAMMA) & MASK64)


class SplitMix64:
    """Deterministic stream of 64-bit values with small sampling helpers."""

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & MASK64
        return mix64(self._state)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n). Rejection sampling kills modulo bias."""
        if n <= 0:
            raise ValueError("randbelow() requires n >= 1")
        limit = MASK64 + 1 - ((MASK64 + 1) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def choice(self, seq):
        if not seq:
            raise ValueError("choice() on empty sequence")
        return seq[self.randbelow(len(seq))]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, iterating from the last index down."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]
