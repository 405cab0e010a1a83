"""Certificate search and independent verification.

Two certificate shapes are produced:

* ``PrimeOrderPair`` -- primes p | n and r with t = n // r, u = n - t*r
  satisfying the five sufficient conditions (not a prime power, not a
  repunit value, u >= 3, gcd(t, n) = 1, and no multiple of p in (0, n) of the
  form a*r + b with 0 <= a <= t, 0 <= b <= u).  Witnesses are n/p disjoint
  p-cycles and t disjoint r-cycles with u fixed points.
* ``PrimePowerPair`` -- p**a | n and a prime r with r < n - 2 < n <= r + p**a,
  additionally guarded by r > n/2 and the existence of an even permutation of
  order p**a on n points.

``verify`` re-derives every hypothesis through code paths that the search
does not use.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

from . import primes
from .forms import repunit_decompose

PRIME_ORDER = "prime-order"
QUESTION1 = "question1"

NO_SEMIPRIME = "no-semiprime-found"
UNSATISFIABLE = "conditions-unsatisfiable-in-budget"
BUDGET = "budget-exhausted"
FLAG_REASONS = (NO_SEMIPRIME, UNSATISFIABLE, BUDGET)

MIN_PROPOSITION_N = 25


class OutOfDomain(ValueError):
    """n lies below the range where the sufficient conditions apply."""


@dataclass(frozen=True)
class PrimeOrderPair:
    n: int
    p: int
    r: int
    t: int
    u: int


@dataclass(frozen=True)
class PrimePowerPair:
    n: int
    p: int
    a: int
    r: int


@dataclass(frozen=True)
class Flagged:
    n: int
    reason: str
    trace: Dict[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.reason not in FLAG_REASONS:
            raise ValueError(f"unknown flag reason {self.reason!r}")


Certificate = Union[PrimeOrderPair, PrimePowerPair, Flagged]


@dataclass(frozen=True)
class SearchPolicy:
    """Tunables for the certificate search.

    ``h0`` is either ``"paper"`` (h = max(64, ceil(exp(sqrt(log n log log n)))))
    or a fixed positive integer.  ``max_h`` of None means floor(n**(1/3)); it
    is always clamped to isqrt(n).  ``max_candidates`` caps the number of
    (p, r) pairs handed to the condition checker per n.
    """

    c: float = 0.02
    h0: Union[str, int] = "paper"
    growth: float = 2.0
    max_h: Optional[int] = None
    mode: str = PRIME_ORDER
    verify_inline: bool = True
    unsafe_lemma: bool = False
    max_candidates: int = 100_000

    def __post_init__(self):
        if not 0 < self.c <= 1 / 25:
            raise ValueError(f"c must lie in (0, 1/25], got {self.c}")
        if self.growth <= 1:
            raise ValueError("growth factor must exceed 1")
        if self.mode not in (PRIME_ORDER, QUESTION1):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.h0 != "paper" and not (isinstance(self.h0, int) and self.h0 >= 1):
            raise ValueError("h0 must be 'paper' or a positive integer")
        if self.max_h is not None and self.max_h < 1:
            raise ValueError("max_h must be positive")
        if self.max_candidates < 1:
            raise ValueError("max_candidates must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    def fingerprint(self) -> str:
        # verify_inline does not change search output.
        d = self.to_dict()
        d.pop("verify_inline")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def paper_h(n: int) -> int:
    """max(64, ceil(exp(sqrt(log n * log log n))))."""
    if n < 16:
        raise ValueError("paper_h needs n >= 16")
    L = math.log(n)
    return max(64, math.ceil(math.exp(math.sqrt(L * math.log(L)))))


def h_schedule(n: int, policy: SearchPolicy) -> List[int]:
    if policy.h0 == "paper":
        h = paper_h(max(n, 16))
    else:
        h = int(policy.h0)
    cap = primes.iroot(n, 3) if policy.max_h is None else policy.max_h
    cap = min(cap, math.isqrt(n))
    out = [h]
    while True:
        h = math.ceil(h * policy.growth)
        if h > cap:
            break
        out.append(h)
    return out


# -- conditions ---------------------------------------------------------------


@dataclass(frozen=True)
class ConditionReport:
    n: int
    p: int
    r: int
    t: int
    u: int
    not_prime_power: bool
    not_repunit: bool
    u_at_least_3: bool
    t_coprime_n: bool
    no_small_multiple: bool
    r_large: bool
    u_below_r: bool
    r_prime: bool
    p_prime: bool

    @property
    def ok(self) -> bool:
        return all((self.not_prime_power, self.not_repunit, self.u_at_least_3,
                    self.t_coprime_n, self.no_small_multiple, self.r_large,
                    self.u_below_r, self.r_prime, self.p_prime))


def condition_v_fast(n: int, p: int, r: int, t: int, u: int) -> bool:
    """True iff no multiple of p in (0, n) lies in any [j*r, j*r + u], j <= t.

    For m < n = t*r + u with u < r we always have m // r <= t, so m is of the
    form a*r + b (0 <= a <= t, 0 <= b <= u) exactly when m % r <= u.  Each of
    the t + 1 intervals is tested for a multiple of p with floor arithmetic.
    """
    if r < 2 or t != n // r or u != n - t * r or not 0 <= u < r:
        raise ValueError(f"inconsistent (n, r, t, u) = ({n}, {r}, {t}, {u})")
    if p < 1 or n % p:
        raise ValueError(f"p={p} does not divide n={n}")
    for j in range(t + 1):
        lo = max(1, j * r)
        hi = min(n - 1, j * r + u)
        if lo <= hi and (hi // p) * p >= lo:
            return False
    return True


def _is_prime_power(n: int) -> bool:
    return primes.prime_power_decompose(n) is not None


def check_conditions(n: int, p: int, r: int) -> ConditionReport:
    if n < MIN_PROPOSITION_N:
        raise OutOfDomain(f"n={n} is below {MIN_PROPOSITION_N}")
    if p < 2 or n % p:
        raise ValueError(f"p={p} does not divide n={n}")
    t, u = divmod(n, r)
    return ConditionReport(
        n=n, p=p, r=r, t=t, u=u,
        not_prime_power=not _is_prime_power(n),
        not_repunit=not repunit_decompose(n),
        u_at_least_3=u >= 3,
        t_coprime_n=math.gcd(t, n) == 1,
        no_small_multiple=t >= 0 and u < r and condition_v_fast(n, p, r, t, u),
        r_large=r * r > 2 * n,
        u_below_r=u < r,
        r_prime=primes.is_prime(r),
        p_prime=primes.is_prime(p),
    )


# -- prime-order search -------------------------------------------------------


def _p1_window(h: int, c: float) -> Tuple[int, int]:
    lo = math.ceil(h ** (1 - 2 * c) / 2)
    hi = math.floor(h ** (1 - c))
    return max(lo, 2), hi


class _Search:
    """Bookkeeping shared by the two search paths for one n."""

    def __init__(self, n: int, policy: SearchPolicy):
        self.n = n
        self.policy = policy
        self.fmap = primes.factorize(n)
        self.trace = {"semiprimes": 0, "candidates": 0, "h_steps": 0,
                      "prime_powers": 0, "h_final": 0}
        self.exhausted = False

    def descending_divisors_above(self, u: int) -> Iterator[int]:
        for p in reversed(self.fmap.primes):
            if p <= u:
                return
            yield p

    def try_r(self, r: int) -> Optional[PrimeOrderPair]:
        n = self.n
        t, u = divmod(n, r)
        for p in self.descending_divisors_above(u):
            if self.trace["candidates"] >= self.policy.max_candidates:
                self.exhausted = True
                return None
            self.trace["candidates"] += 1
            if check_conditions(n, p, r).ok:
                return PrimeOrderPair(n, p, r, t, u)
        return None


def _prime_order_search(n: int, policy: SearchPolicy) -> Tuple[Optional[PrimeOrderPair], _Search]:
    s = _Search(n, policy)
    if n < MIN_PROPOSITION_N:
        return None, s
    # Conditions (i) and (ii) depend on n alone.
    if s.fmap.is_prime_power() or repunit_decompose(n):
        return None, s
    seen = set()
    for step, h in enumerate(h_schedule(n, policy)):
        s.trace["h_steps"] = step + 1
        s.trace["h_final"] = h
        lo_p1, hi_p1 = _p1_window(h, policy.c)
        for p1 in primes.primes_in(lo_p1, hi_p1):
            if n % p1 == 0:
                continue
            lo_r = -(-max(n - h, 1) // p1)
            hi_r = (n - 3) // p1
            for r in reversed(primes.primes_in(lo_r, hi_r)):
                if (p1, r) in seen:
                    continue
                seen.add((p1, r))
                s.trace["semiprimes"] += 1
                if n // r != p1 or r * r <= 2 * n:
                    continue
                cert = s.try_r(r)
                if cert is not None or s.exhausted:
                    return cert, s
    # t = 1: r in (n/2, n - 3]; condition (v) then reduces to p > n - r.
    P = s.fmap.primes[-1]
    r = primes.largest_prime_in(max(n // 2 + 1, n - P + 1), n - 3)
    while r is not None:
        s.trace["semiprimes"] += 1
        cert = s.try_r(r)
        if cert is not None or s.exhausted:
            return cert, s
        r = primes.largest_prime_in(max(n // 2 + 1, n - P + 1), r - 1)
    return None, s


def find_prime_order_cert(n: int, policy: SearchPolicy = SearchPolicy()) -> Optional[PrimeOrderPair]:
    return _prime_order_search(n, policy)[0]


# -- prime-power search -------------------------------------------------------


def even_order_witness_exists(p: int, a: int, n: int) -> bool:
    """Is there an even permutation of order exactly p**a on n points?"""
    q = p**a
    if q > n:
        return False
    if p % 2 == 1 or a == 0:
        return True
    # Cycles of 2-power lengths including one of length 2**a; an odd number of
    # them would be odd, so a second even-length cycle (length >= 2) is needed.
    return q + 2 <= n


def _prime_power_search(n: int, policy: SearchPolicy,
                        fmap: Optional[primes.FactorMap] = None) -> Tuple[Optional[PrimePowerPair], int]:
    fmap = fmap or primes.factorize(n)
    powers = [(q, p, a) for p, a, q in fmap.prime_powers()
              if a == 1 or policy.mode == QUESTION1]
    tried = 0
    for q, p, a in sorted(powers, reverse=True):
        tried += 1
        if policy.unsafe_lemma:
            lo = max(n - q, 2)
        else:
            if not even_order_witness_exists(p, a, n):
                continue
            lo = max(n - q, n // 2 + 1)
        r = primes.largest_prime_in(lo, n - 3)
        if r is not None:
            return PrimePowerPair(n, p, a, r), tried
    return None, tried


def find_prime_power_cert(n: int, policy: SearchPolicy = SearchPolicy()) -> Optional[PrimePowerPair]:
    if n < 5:
        raise ValueError("find_prime_power_cert needs n >= 5")
    return _prime_power_search(n, policy)[0]


def certify(n: int, policy: SearchPolicy = SearchPolicy()) -> Certificate:
    """Search for a certificate for n; Flagged when both paths fail."""
    if n < 5:
        raise ValueError(f"certify needs n >= 5, got {n}")
    fmap = primes.factorize(n)
    cert: Optional[Certificate]
    cert, tried = _prime_power_search(n, policy, fmap)
    trace = {"prime_powers": tried}
    if cert is None:
        cert, s = _prime_order_search(n, policy)
        trace.update(s.trace, prime_powers=tried)
        if cert is None:
            if s.exhausted:
                reason = BUDGET
            elif trace["semiprimes"] == 0 and n >= MIN_PROPOSITION_N and not (
                    fmap.is_prime_power() or repunit_decompose(n)):
                reason = NO_SEMIPRIME
            else:
                reason = UNSATISFIABLE
            return Flagged(n, reason, trace)
    if policy.verify_inline and not verify(cert, unsafe_lemma=policy.unsafe_lemma):
        raise AssertionError(f"search produced an unverifiable certificate {cert}")
    return cert


# -- verification -------------------------------------------------------------


def _prime_by_trial(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0 or m % 3 == 0:
        return False
    k = 5
    while k * k <= m:
        if m % k == 0 or m % (k + 2) == 0:
            return False
        k += 6
    return True


def _verify_prime(m: int) -> bool:
    return _prime_by_trial(m) if m < 10**10 else primes.is_prime(m)


def _verify_prime_order(c: PrimeOrderPair) -> bool:
    n, p, r, t, u = c.n, c.p, c.r, c.t, c.u
    if n < MIN_PROPOSITION_N or not (_verify_prime(p) and _verify_prime(r)):
        return False
    if n % p or r * r <= 2 * n:
        return False
    if t != n // r or u != n - t * r or not 3 <= u < r:
        return False
    if math.gcd(t, n) != 1:
        return False
    if len(primes.factorize(n).factors) == 1:
        return False
    if repunit_decompose(n):
        return False
    for m in range(p, n, p):
        if m // r <= t and m % r <= u:
            return False
    return True


def _verify_prime_power(c: PrimePowerPair, unsafe_lemma: bool) -> bool:
    n, p, a, r = c.n, c.p, c.a, c.r
    if n < 5 or a < 1 or not (_verify_prime(p) and _verify_prime(r)):
        return False
    q = p**a
    if n % q or not r < n - 2 < n <= r + q:
        return False
    if unsafe_lemma:
        return True
    return 2 * r > n and even_order_witness_exists(p, a, n)


def verify(cert: Certificate, unsafe_lemma: bool = False) -> bool:
    if isinstance(cert, PrimeOrderPair):
        return _verify_prime_order(cert)
    if isinstance(cert, PrimePowerPair):
        return _verify_prime_power(cert, unsafe_lemma)
    if isinstance(cert, Flagged):
        raise ValueError("a Flagged result carries nothing to verify")
    raise TypeError(f"not a certificate: {cert!r}")
