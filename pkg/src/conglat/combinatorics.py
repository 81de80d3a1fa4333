"""Exact integer sequences used by the Green's-structure tables.

Everything here works on Python integers, so no value can overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod

from conglat.errors import QNotPrimePower


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` and ``p`` prime, or ``None``."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return (p, k) if q == 1 else None


@lru_cache(maxsize=None)
def stirling2(n: int, r: int) -> int:
    if n < 0 or r < 0:
        raise ValueError("stirling2 needs n, r >= 0")
    if n == r:
        return 1
    if r == 0 or r > n:
        return 0
    return r * stirling2(n - 1, r) + stirling2(n - 1, r - 1)


def bell(n: int) -> int:
    return sum(stirling2(n, r) for r in range(n + 1))


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def double_factorial(k: int) -> int:
    """``k!!`` with the empty-product convention ``(-1)!! = 0!! = 1``."""
    if k < -1:
        raise ValueError(f"double factorial undefined for {k}")
    return prod(range(k, 0, -2))


def gaussian_binomial(n: int, r: int, q: int) -> int:
    """Number of ``r``-dimensional subspaces of ``F_q^n``."""
    if prime_power(q) is None:
        raise QNotPrimePower(f"q={q} is not a prime power")
    if r < 0 or r > n:
        return 0
    num = prod(q ** (n - i) - 1 for i in range(r))
    den = prod(q ** (r - i) - 1 for i in range(r))
    return num // den


def binary_ones(n: int) -> int:
    return bin(n).count("1")


@lru_cache(maxsize=None)
def involutions(k: int) -> int:
    """Number of self-inverse permutations of a ``k``-set."""
    if k <= 1:
        return 1
    return involutions(k - 1) + (k - 1) * involutions(k - 2)


@dataclass(frozen=True)
class IntegerPartition:
    """An integer partition, stored as its weakly decreasing parts."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p <= 0 for p in self.parts):
            raise ValueError("parts must be positive")
        if list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError("parts must be weakly decreasing")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        """``mu_i`` for ``i = 1..n``: how many parts are equal to ``i``."""
        return tuple(self.parts.count(i) for i in range(1, self.n + 1))

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def integer_partitions(n: int) -> list[IntegerPartition]:
    """All partitions of ``n``, in reverse lexicographic order of part lists.

    ``integer_partitions(3)`` is ``[(3), (2,1), (1,1,1)]``.
    """
    out = []

    def rec(remaining, largest, acc):
        if remaining == 0:
            out.append(IntegerPartition(tuple(acc)))
            return
        for part in range(min(remaining, largest), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(n, n, [])
    return out


def shape_count(mu: IntegerPartition) -> int:
    """Set partitions of an ``n``-set whose block sizes are the parts of ``mu``."""
    n = mu.n
    den = prod(factorial(m) * factorial(i) ** m for i, m in enumerate(mu.multiplicities, 1))
    return factorial(n) // den
