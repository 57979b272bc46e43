"""Deterministic prime supply from a window, without a PRNG.

All primes of the window come from a sieve; a session seed only shifts the
starting offset in that list, so the same seed always yields the same primes.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

import numpy as np

from ..errors import PoolTooSmall

DEFAULT_WINDOW = (1 << 20, 1 << 21)


@lru_cache(maxsize=8)
def primes_in_window(lo: int, hi: int) -> tuple[int, ...]:
    """All primes p with lo <= p < hi (segmented sieve)."""
    if hi <= 2:
        return ()
    root = int(hi**0.5) + 1
    small = np.ones(root + 1, dtype=bool)
    small[:2] = False
    for i in range(2, int(root**0.5) + 1):
        if small[i]:
            small[i * i :: i] = False
    seg = np.ones(hi - lo, dtype=bool)
    for q in np.nonzero(small)[0]:
        q = int(q)
        start = max(q * q, ((lo + q - 1) // q) * q)
        seg[start - lo :: q] = False
    if lo < 2:
        seg[: 2 - lo] = False
    return tuple(int(lo + i) for i in np.nonzero(seg)[0])


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeSource:
    """Hands out unused window primes in a seed-determined order."""

    def __init__(self, seed: int = 0, window: tuple[int, int] = DEFAULT_WINDOW) -> None:
        self.window = window
        self.all = primes_in_window(*window)
        if not self.all:
            raise ValueError(f"no primes in window {window}")
        # Knuth's multiplicative step keeps nearby seeds far apart
        self.cursor = (seed * 2654435761) % len(self.all)
        self.issued = 0

    def take(self, k: int, exclude: Iterable[int] = ()) -> list[int]:
        """Next ``k`` primes after the cursor, skipping ``exclude``; small windows wrap around."""
        skip = set(exclude)
        if len(set(self.all) - skip) < k:
            raise PoolTooSmall(f"window {self.window} holds fewer than {k} usable primes")
        out: list[int] = []
        while len(out) < k:
            p = self.all[self.cursor]
            self.cursor = (self.cursor + 1) % len(self.all)
            if p in skip or p in out:
                continue
            assert is_prime(p)
            out.append(p)
            self.issued += 1
        return out
