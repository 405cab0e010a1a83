"""Integers of the form (q**d - 1)/(q - 1) = 1 + q + ... + q**(d-1), d >= 3."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

from .primes import MAX_N, iroot


@dataclass(frozen=True)
class RepunitWitness:
    q: int
    d: int
    value: int


def repunit_value(q: int, d: int, limit: int = MAX_N) -> int:
    """1 + q + ... + q**(d-1), or -1 once the running sum exceeds ``limit``."""
    total, term = 0, 1
    for _ in range(d):
        total += term
        if total > limit:
            return -1
        term *= q
    return total


def repunit_decompose(n: int) -> List[RepunitWitness]:
    """All (q, d) with q >= 2, d >= 3 and 1 + q + ... + q**(d-1) == n.

    >>> [(w.q, w.d) for w in repunit_decompose(31)]
    [(5, 3), (2, 5)]
    """
    if n < 3:
        raise ValueError("repunit_decompose needs n >= 3")
    found = []
    # d = 3: q**2 + q + 1 = n  <=>  (2q + 1)**2 = 4n - 3
    s = math.isqrt(4 * n - 3)
    if s * s == 4 * n - 3 and s % 2 == 1 and (s - 1) // 2 >= 2:
        found.append(RepunitWitness((s - 1) // 2, 3, n))
    # q**(d-1) < n < 2 q**(d-1), so q is floor(n**(1/(d-1))) or one below it.
    for d in range(4, n.bit_length() + 1):
        q0 = iroot(n, d - 1)
        for q in (q0 - 1, q0, q0 + 1):
            if q >= 2 and repunit_value(q, d, n) == n:
                found.append(RepunitWitness(q, d, n))
    return found


def repunit_values_upto(X: int) -> set:
    """Distinct values n <= X having at least one repunit witness."""
    values = set()
    d = 3
    while repunit_value(2, d, X) != -1:
        qmax = iroot(X, d - 1)
        for q in range(2, qmax + 1):
            v = repunit_value(q, d, X)
            if v != -1:
                values.add(v)
        d += 1
    return values


def count_repunits_upto(X: int) -> int:
    if X < 7:
        raise ValueError("count_repunits_upto needs X >= 7")
    return len(repunit_values_upto(X))
