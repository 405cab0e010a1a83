"""Binomial divisibility by digit domination (Kummer / Lucas).

p does not divide C(n, i) exactly when every base-p digit of i is at most the
matching digit of n.  Such i are called *dominated* (by n, in base p).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

ENUMERATION_CAP = 10**7
DIRECT_LIMIT = 10**6


@dataclass(frozen=True)
class DigitVector:
    """Base-``base`` digits, least significant first."""

    base: int
    digits: tuple

    @classmethod
    def of(cls, n: int, base: int) -> "DigitVector":
        if n < 0 or base < 2:
            raise ValueError("need n >= 0 and base >= 2")
        ds = []
        while n:
            n, d = divmod(n, base)
            ds.append(d)
        return cls(base, tuple(ds))

    @property
    def value(self) -> int:
        v = 0
        for d in reversed(self.digits):
            v = v * self.base + d
        return v


def _dominated(i: int, n: int, p: int) -> bool:
    while i:
        if i % p > n % p:
            return False
        i //= p
        n //= p
    return True


def divides_binomial(p: int, n: int, i: int) -> bool:
    """True iff p | C(n, i)."""
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    return not _dominated(i, n, p)


def dominated_count(n: int, p: int) -> int:
    """Number of i in [0, n] with p not dividing C(n, i)."""
    count = 1
    for d in DigitVector.of(n, p).digits:
        count *= d + 1
    return count


def dominated_set(n: int, p: int) -> Iterator[int]:
    """All i in [0, n] dominated by n in base p, in increasing order."""
    digits = DigitVector.of(n, p).digits
    vals = [0]
    weight = 1
    for d in digits:
        vals = [v + k * weight for k in range(d + 1) for v in vals]
        weight *= p
    return iter(vals)


def _cover_direct(n: int, p1: int, p2: int) -> bool:
    for i in range(1, n):
        if _dominated(i, n, p1) and _dominated(i, n, p2):
            return False
    return True


def binomial_cover_check(n: int, p1: int, p2: int) -> bool:
    """True iff every C(n, i), 0 < i < n, is divisible by p1 or by p2.

    Walks the smaller of the two domination sets and tests each member
    against the other base; the intersection must be exactly {0, n}.
    """
    if n < 2:
        raise ValueError("binomial_cover_check needs n >= 2")
    c1, c2 = dominated_count(n, p1), dominated_count(n, p2)
    if min(c1, c2) > ENUMERATION_CAP:
        if n <= DIRECT_LIMIT:
            return _cover_direct(n, p1, p2)
        raise MemoryError(f"domination sets for n={n} exceed {ENUMERATION_CAP}")
    walk, other = (p1, p2) if c1 <= c2 else (p2, p1)
    for i in dominated_set(n, walk):
        if 0 < i < n and _dominated(i, n, other):
            return False
    return True


def binomial_cover_direct(n: int, p1: int, p2: int) -> bool:
    """Reference check by iterating every i (practical for n <= 10**6)."""
    return _cover_direct(n, p1, p2)
