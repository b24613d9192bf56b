"""Prime selection: the largest prime ``p <= n`` with ``n + 2 <= 2p``."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from math import isqrt


def sieve(limit: int) -> bytearray:
    """``flags[k] == 1`` iff ``k`` is prime, for ``0 <= k <= limit``."""
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"[: min(2, limit + 1)]
    for k in range(2, isqrt(limit) + 1):
        if flags[k]:
            flags[k * k :: k] = bytes(len(range(k * k, limit + 1, k)))
    return flags


def primes_up_to(limit: int) -> list[int]:
    if limit < 2:
        return []
    flags = sieve(limit)
    return [k for k in range(2, limit + 1) if flags[k]]


def is_prime(k: int) -> bool:
    """Deterministic trial division."""
    if k < 2:
        return False
    if k % 2 == 0:
        return k == 2
    for d in range(3, isqrt(k) + 1, 2):
        if k % d == 0:
            return False
    return True


class _PrimeTable:
    def __init__(self):
        self.limit = 1
        self.primes: list[int] = []

    def ensure(self, n: int) -> None:
        if n > self.limit:
            self.limit = max(n, 2 * self.limit, 1024)
            self.primes = primes_up_to(self.limit)

    def largest_at_most(self, n: int) -> int:
        self.ensure(n)
        idx = bisect_right(self.primes, n)
        return self.primes[idx - 1] if idx else 0


_TABLE = _PrimeTable()


@dataclass(frozen=True)
class PrimeChoice:
    n: int
    p: int

    def __post_init__(self):
        if not (self.n + 2 <= 2 * self.p and self.p <= self.n):
            raise ValueError(f"p = {self.p} violates n/2 + 1 <= p <= n for n = {self.n}")


def select_prime(n: int) -> PrimeChoice:
    """Largest prime ``p`` with ``n/2 + 1 <= p <= n`` (so 2 for n = 2, 3 for n = 3, 4)."""
    if n < 2:
        raise ValueError(f"select_prime needs n >= 2, got {n}")
    p = _TABLE.largest_at_most(n)
    if 2 * p < n + 2:
        raise AssertionError(f"no prime in [n/2 + 1, n] for n = {n}")
    return PrimeChoice(n, p)
