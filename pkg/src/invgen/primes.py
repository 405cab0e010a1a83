"""Prime arithmetic: sieving, primality, factorization, von Mangoldt sums.

All integers are plain Python ints, so modular products never overflow; the
working domain is still capped at 2**62 to keep the deterministic
Miller-Rabin basis and the trial-division threshold meaningful.
"""

from __future__ import annotations

import functools
import math
import random
import threading
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np

MAX_N = 1 << 62
MAX_SEGMENT = 10**9
TRIAL_LIMIT = 10**6

# Valid for every n < 3.3e24, which covers the 64-bit range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = _MR_BASES

_base_lock = threading.Lock()
_base_limit = 0
_base_primes: np.ndarray = np.array([], dtype=np.int64)


class ResourceError(RuntimeError):
    """Requested computation exceeds the configured resource caps."""


def _simple_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def base_primes(limit: int) -> np.ndarray:
    """Primes <= limit from a shared table that grows on demand."""
    global _base_limit, _base_primes
    if limit > _base_limit:
        with _base_lock:
            if limit > _base_limit:
                new_limit = max(limit, 2 * _base_limit, 1 << 16)
                _base_primes = _simple_sieve(new_limit)
                _base_limit = new_limit
    table = _base_primes
    return table[: np.searchsorted(table, limit, side="right")]


def _primes_streaming(limit: int, span: int = 1 << 22) -> Iterator[int]:
    # Used only when sqrt(hi) is too large for an in-memory base table.
    small = base_primes(min(limit, 1 << 24))
    yield from (int(p) for p in small)
    lo = (1 << 24) + 1
    while lo <= limit:
        hi = min(lo + span - 1, limit)
        flags = sieve_segment(lo, hi)
        for i in np.flatnonzero(flags):
            yield lo + int(i)
        lo = hi + 1


def sieve_segment(lo: int, hi: int) -> np.ndarray:
    """Boolean array whose entry i is True iff lo + i is prime.

    >>> np.flatnonzero(sieve_segment(2, 10)) + 2
    array([2, 3, 5, 7])
    """
    if lo > hi:
        raise ValueError(f"empty range: lo={lo} > hi={hi}")
    if lo < 2:
        raise ValueError("lo must be at least 2")
    if hi > MAX_N:
        raise ValueError("hi exceeds 2**62")
    if hi - lo > MAX_SEGMENT:
        raise ResourceError(f"segment width {hi - lo} exceeds {MAX_SEGMENT}")
    width = hi - lo + 1
    flags = np.ones(width, dtype=bool)
    root = math.isqrt(hi)
    if root <= 1 << 24:
        candidates: Iterator[int] = (int(p) for p in base_primes(root))
    else:
        candidates = _primes_streaming(root)
    for p in candidates:
        start = max(p * p, -(-lo // p) * p)
        if start > hi:
            continue
        flags[start - lo :: p] = False
    return flags


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for the 64-bit range."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def iroot(n: int, k: int) -> int:
    """Largest integer x with x**k <= n, by integer Newton iteration."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)  # overestimate
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def prime_power_decompose(n: int) -> Optional[Tuple[int, int]]:
    """Return (p, a) with p**a == n and p prime, or None."""
    if n < 2:
        raise ValueError("prime_power_decompose needs n >= 2")
    for a in range(n.bit_length(), 0, -1):
        q = iroot(n, a)
        if q >= 2 and q**a == n and is_prime(q):
            return q, a
    return None


@dataclass(frozen=True)
class FactorMap:
    n: int
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factor list {self.factors}")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factors of {self.n} multiply to {prod}")

    @property
    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    def prime_powers(self) -> Iterator[Tuple[int, int, int]]:
        """Yield (p, a, p**a) for every prime power dividing n."""
        for p, e in self.factors:
            q = 1
            for a in range(1, e + 1):
                q *= p
                yield p, a, q

    def is_prime_power(self) -> bool:
        return len(self.factors) == 1


def _rho_brent(n: int, rng: random.Random) -> int:
    # Returns a nontrivial factor of an odd composite n.
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict, rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    pp = prime_power_decompose(n)
    if pp is not None:
        out[pp[0]] = out.get(pp[0], 0) + pp[1]
        return
    d = _rho_brent(n, rng)
    _split(d, out, rng)
    _split(n // d, out, rng)


@functools.lru_cache(maxsize=1)
def _trial_primes() -> List[int]:
    return base_primes(TRIAL_LIMIT).tolist()


def factorize(n: int) -> FactorMap:
    """Complete factorization: trial division, then Brent's rho on the rest.

    >>> factorize(30).factors
    ((2, 1), (3, 1), (5, 1))
    """
    if n < 1 or n > MAX_N:
        raise ValueError(f"factorize needs 1 <= n <= 2**62, got {n}")
    found: dict = {}
    m = n
    limit = min(TRIAL_LIMIT, math.isqrt(m))
    # A prime cofactor ends trial division early; MR is far cheaper than the loop.
    if m <= limit * limit or not is_prime(m):
        for p in _trial_primes():
            if p * p > m:
                break
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                found[p] = e
                if m > TRIAL_LIMIT and is_prime(m):
                    break
    if m > 1:
        # Seeded so factorize stays a pure function of n.
        _split(m, found, random.Random(m))
    return FactorMap(n, tuple(sorted(found.items())))


def largest_prime_in(lo: int, hi: int) -> Optional[int]:
    """Largest prime in [lo, hi], found by descending primality tests."""
    if hi < 2:
        return None
    k = hi
    lo = max(lo, 2)
    while k >= lo:
        if is_prime(k):
            return k
        k -= 1
    return None


def primes_in(lo: int, hi: int) -> List[int]:
    """Sorted list of primes in [lo, hi] (empty if lo > hi)."""
    lo = max(lo, 2)
    if lo > hi:
        return []
    if hi < 1 << 20:
        table = base_primes(hi)
        return [int(p) for p in table[np.searchsorted(table, lo) :]]
    return [lo + int(i) for i in np.flatnonzero(sieve_segment(lo, hi))]


def mertens_lambda_sum(lo: int, hi: int, primes_only: bool = False,
                       chunk: int = 1 << 24) -> float:
    """Sum of Lambda(m)/m over lo <= m <= hi.

    Lambda is log p on prime powers p**k; with ``primes_only`` the k >= 2
    terms are dropped.
    """
    if lo < 2 or lo > hi or hi > 10**9:
        raise ValueError("mertens_lambda_sum needs 2 <= lo <= hi <= 10**9")
    parts = []
    a = lo
    while a <= hi:
        b = min(a + chunk - 1, hi)
        idx = np.flatnonzero(sieve_segment(a, b)).astype(np.float64) + a
        parts.append(float(np.sum(np.log(idx) / idx)))
        a = b + 1
    if not primes_only:
        for p in base_primes(math.isqrt(hi)):
            p = int(p)
            logp = math.log(p)
            q = p * p
            while q <= hi:
                if q >= lo:
                    parts.append(logp / q)
                q *= p
    return math.fsum(parts)
