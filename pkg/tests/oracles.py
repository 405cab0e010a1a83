"""Brute-force reference implementations, independent of the package code."""

import math


def is_prime_trial(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factor_trial(n):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def von_mangoldt(m):
    fs = set(factor_trial(m))
    return math.log(fs.pop()) if len(fs) == 1 else 0.0


def lambda_sum(lo, hi):
    return math.fsum(von_mangoldt(m) / m for m in range(lo, hi + 1))


def repunit_values_brute(X):
    values = set()
    q = 2
    while 1 + q + q * q <= X:
        v = 1 + q + q * q
        term = q * q
        while v <= X:
            values.add(v)
            term *= q
            v += term
        q += 1
    return values


def condition_v_brute(n, p, r, t, u):
    for a in range(t + 1):
        for b in range(u + 1):
            m = a * r + b
            if 0 < m < n and m % p == 0:
                return False
    return True


def conditions_brute(n, p, r):
    """All five sufficient conditions plus side requirements, naively."""
    if not (is_prime_trial(p) and is_prime_trial(r)) or n % p:
        return False
    t = n // r
    u = n - t * r
    fs = set(factor_trial(n))
    if len(fs) == 1:
        return False
    if n in repunit_values_brute(n):
        return False
    if u < 3 or u >= r or math.gcd(t, n) != 1 or r * r <= 2 * n:
        return False
    return condition_v_brute(n, p, r, t, u)


def closure_order(gens, n):
    identity = tuple(range(n))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = tuple(s[g[i]] for i in range(n))
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return len(seen)


def largest_prime_factor_table(X):
    lpf = list(range(X + 1))
    lpf[1] = 1
    for p in range(2, X + 1):
        if lpf[p] == p:  # untouched so far, hence prime
            for k in range(2 * p, X + 1, p):
                lpf[k] = p
    return lpf


def e2_count_brute(x, h, lo, hi):
    count = 0
    for m in range(x, x + h + 1):
        fs = factor_trial(m)
        if len(fs) != 2:
            continue
        a, b = fs
        if a == b:
            count += lo <= a <= hi
        else:
            count += (lo <= a <= hi) + (lo <= b <= hi)
    return count


def spf_table(N):
    """Smallest prime factor of every m <= N (numpy sieve; spf[m] == m for primes)."""
    import numpy as np

    spf = np.zeros(N + 1, dtype=np.int32)
    for p in range(2, math.isqrt(N) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


def e2_count_spf(x, h, lo, hi, spf):
    """e2_count_brute, factoring by table lookup instead of trial division."""
    count = 0
    for m in range(x, x + h + 1):
        a = int(spf[m])
        b = m // a
        if b < 2 or int(spf[b]) != b:
            continue
        count += (lo <= a <= hi) if a == b else (lo <= a <= hi) + (lo <= b <= hi)
    return count
