"""Desk-scale statistics for products of two primes in short intervals."""

from __future__ import annotations

import csv
import io
import math
import random
import warnings
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .primes import is_prime, mertens_lambda_sum, primes_in

MAX_INTERVALS = 10**9
LOWER_RANGE_EXPONENT = 2  # h >= (log X)**C is only checked as a warning


def h_policy(n: int) -> int:
    if n < 16:
        raise ValueError("h_policy needs n >= 16")
    L = math.log(n)
    return max(64, math.ceil(math.exp(math.sqrt(L * math.log(L)))))


def count_e2_in_interval(x: int, h: int, p1_lo: int, p1_hi: int) -> int:
    """Pairs (p1, p2) of primes with p1 in [p1_lo, p1_hi] and x <= p1*p2 <= x+h.

    A number with two factorizations into the window counts twice; p**2 with
    p in the window counts once.
    """
    if x < 2 or h < 1:
        raise ValueError("need x >= 2 and h >= 1")
    count = 0
    for p1 in primes_in(p1_lo, p1_hi):
        for p2 in range(-(-x // p1), (x + h) // p1 + 1):
            if is_prime(p2):
                count += 1
    return count


def e2_window(h: float, c: float) -> Tuple[int, int]:
    """Integer window [ceil(h**(1-2c)), floor(h**(1-c))]."""
    return math.ceil(h ** (1 - 2 * c)), math.floor(h ** (1 - c))


def main_term(h: float, P1: float, c: float) -> float:
    """h times the sum of Lambda(m)/m over the window for P1."""
    if P1 < 16 or not 0 < c < 0.5:
        raise ValueError("main_term needs P1 >= 16 and 0 < c < 1/2")
    lo, hi = e2_window(P1, c)
    lo = max(lo, 2)
    if lo > hi:
        warnings.warn(f"empty window [{lo}, {hi}] for P1={P1}, c={c}")
        return 0.0
    return h * mertens_lambda_sum(lo, hi)


def smooth_count(X: int, B: int) -> int:
    """Number of 1 <= n <= X with every prime factor <= B (1 included)."""
    if X < 1 or B < 2:
        raise ValueError("need X >= 1 and B >= 2")
    ps = primes_in(2, min(B, X))
    if B >= X:
        return X

    # Count products of primes taken from ps[i:], bounded by `limit`.
    def rec(limit: int, i: int) -> int:
        total = 1
        for k in range(i, len(ps)):
            p = ps[k]
            if p > limit:
                break
            q = p
            while q <= limit:
                total += rec(limit // q, k + 1)
                q *= p
        return total

    return rec(X, 0)


@dataclass(frozen=True)
class E2Config:
    X: int
    h: int
    c: float = 0.02
    p1_window: Optional[Tuple[int, int]] = None
    sample: str = "random"  # all | random | stride
    K: int = 10_000
    seed: int = 0
    stride: int = 1

    def window(self) -> Tuple[int, int]:
        return self.p1_window or e2_window(self.h, self.c)

    def __post_init__(self):
        if not 0 < self.c < 0.5:
            raise ValueError("c must lie in (0, 1/2)")
        if self.X < 2 or self.h < 1:
            raise ValueError("need X >= 2 and h >= 1")
        if self.sample not in ("all", "random", "stride"):
            raise ValueError(f"unknown sample mode {self.sample!r}")


@dataclass(frozen=True)
class E2IntervalStat:
    x: int
    count: int
    main_term: float
    deficient: bool


@dataclass(frozen=True)
class E2Summary:
    samples: int
    deficient: int
    deficient_fraction: float
    threshold: float
    reference_ratio: float  # h**(-c)
    window: Tuple[int, int]


def sample_points(cfg: E2Config) -> List[int]:
    if cfg.sample == "all":
        if cfg.X - 1 > MAX_INTERVALS:
            from .primes import ResourceError
            raise ResourceError(f"{cfg.X - 1} intervals exceed {MAX_INTERVALS}")
        return list(range(2, cfg.X + 1))
    if cfg.sample == "stride":
        return list(range(2, cfg.X + 1, cfg.stride))
    rng = random.Random(cfg.seed)
    return [rng.randint(2, cfg.X) for _ in range(cfg.K)]


def scan_intervals(cfg: E2Config) -> Tuple[List[E2IntervalStat], E2Summary]:
    logX = math.log(cfg.X)
    if not logX**LOWER_RANGE_EXPONENT <= cfg.h <= cfg.X ** 0.1:
        warnings.warn(f"h={cfg.h} outside [(log X)^{LOWER_RANGE_EXPONENT}, X^(1/10)] "
                      f"for X={cfg.X}")
    lo, hi = cfg.window()
    threshold = cfg.c * cfg.h / logX
    mt = main_term(cfg.h, cfg.h, cfg.c) if cfg.h >= 16 else 0.0
    stats = []
    for x in sample_points(cfg):
        k = count_e2_in_interval(x, cfg.h, lo, hi)
        stats.append(E2IntervalStat(x, k, mt, k < threshold))
    bad = sum(s.deficient for s in stats)
    summary = E2Summary(
        samples=len(stats),
        deficient=bad,
        deficient_fraction=bad / len(stats) if stats else 0.0,
        threshold=threshold,
        reference_ratio=cfg.h ** (-cfg.c),
        window=(lo, hi),
    )
    return stats, summary


def stats_to_csv(stats: List[E2IntervalStat]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "count", "main_term", "deficient"])
    for s in stats:
        w.writerow([s.x, s.count, repr(s.main_term), int(s.deficient)])
    return buf.getvalue()
