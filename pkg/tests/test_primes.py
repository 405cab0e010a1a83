import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invgen import primes
from invgen.primes import (ResourceError, factorize, is_prime, largest_prime_in,
                           mertens_lambda_sum, prime_power_decompose, sieve_segment)
from oracles import factor_trial, is_prime_trial, lambda_sum


def flagged(lo, hi):
    return [lo + int(i) for i in np.flatnonzero(sieve_segment(lo, hi))]


def test_sieve_small_windows():
    assert flagged(2, 10) == [2, 3, 5, 7]
    assert flagged(90, 100) == [97]


def test_sieve_matches_is_prime_near_million():
    lo, hi = 10**6, 10**6 + 100
    assert flagged(lo, hi) == [n for n in range(lo, hi + 1) if is_prime(n)]


def test_sieve_errors():
    with pytest.raises(ValueError):
        sieve_segment(10, 9)
    with pytest.raises(ResourceError):
        sieve_segment(2, 2 + 10**9 + 1)


def test_sieve_random_windows_agree_with_is_prime():
    rng = random.Random(7)
    for _ in range(100):
        lo = rng.randrange(2, 10**12 - 10**4)
        flags = sieve_segment(lo, lo + 10**4 - 1)
        expect = np.array([is_prime(lo + i) for i in range(10**4)])
        assert np.array_equal(flags, expect)


@pytest.mark.parametrize("n, expected", [(0, False), (1, False), (2, True), (3, True),
                                         (4, False), (1681, False), (2**61 - 1, True),
                                         (2**62 - 57, True), (3215031751, False)])
def test_is_prime_values(n, expected):
    assert is_prime(n) is expected


def test_is_prime_matches_trial_division():
    assert [n for n in range(5000) if is_prime(n)] == [n for n in range(5000) if is_prime_trial(n)]
    rng = random.Random(3)
    for _ in range(300):
        n = rng.randrange(10**9, 10**10)
        assert is_prime(n) == is_prime_trial(n)


def test_strong_pseudoprimes_rejected():
    # Strong pseudoprimes to several small bases.
    for n in (2047, 1373653, 25326001, 3215031751, 2152302898747,
              3474749660383, 341550071728321, 3825123056546413051):
        assert not is_prime(n)


def test_prime_power_decompose_examples():
    assert prime_power_decompose(8) == (2, 3)
    assert prime_power_decompose(97) == (97, 1)
    assert prime_power_decompose(12) is None
    with pytest.raises(ValueError):
        prime_power_decompose(1)


def test_prime_power_round_trip():
    for p in primes.primes_in(2, 1000):
        a = 1
        while p**a <= 2**40:
            assert prime_power_decompose(p**a) == (p, a)
            a += 1


def test_factorize_examples():
    assert factorize(30).factors == ((2, 1), (3, 1), (5, 1))
    assert factorize(1024).factors == ((2, 10),)
    assert factorize(999999999989).factors == ((999999999989, 1),)
    assert is_prime(999999999989)


def test_factorize_hard_cofactors():
    # Products of two primes above the trial-division threshold.
    p, q = 1000003, 1000033
    assert factorize(p * q).factors == ((p, 1), (q, 1))
    assert factorize(p * p * 3).factors == ((3, 1), (p, 2))
    assert factorize(2**62 - 1).factors == ((3, 1), (715827883, 1), (2147483647, 1))


def test_factorize_reconstruction_random():
    rng = random.Random(11)
    for _ in range(10**5):
        n = rng.randrange(2, 10**12)
        fm = factorize(n)
        assert math.prod(p**e for p, e in fm.factors) == n
    for _ in range(200):
        n = rng.randrange(2, 2**62)
        fm = factorize(n)
        assert math.prod(p**e for p, e in fm.factors) == n
        assert all(is_prime(p) for p in fm.primes)


@given(st.integers(min_value=2, max_value=10**7))
@settings(max_examples=300)
def test_factorize_matches_trial(n):
    expect = {}
    for p in factor_trial(n):
        expect[p] = expect.get(p, 0) + 1
    assert factorize(n).factors == tuple(sorted(expect.items()))


def test_largest_prime_in():
    assert largest_prime_in(25, 27) is None
    assert largest_prime_in(10, 12) == 11
    lo, hi = 10**9, 10**9 + 100
    assert largest_prime_in(lo, hi) == max(lo + int(i) for i in np.flatnonzero(sieve_segment(lo, hi)))
    assert largest_prime_in(lo, hi) == 10**9 + 97


def test_mertens_examples():
    assert mertens_lambda_sum(2, 10) == pytest.approx(1.694650657924469, rel=1e-12)
    assert mertens_lambda_sum(2, 2) == pytest.approx(math.log(2) / 2)
    assert mertens_lambda_sum(14, 16) == pytest.approx(math.log(2) / 16)


def test_mertens_matches_direct_summation():
    rng = random.Random(5)
    for _ in range(20):
        lo = rng.randrange(2, 20000)
        hi = lo + rng.randrange(0, 3000)
        assert mertens_lambda_sum(lo, hi) == pytest.approx(lambda_sum(lo, hi), rel=1e-11, abs=1e-14)


def test_mertens_primes_only_drops_powers():
    assert mertens_lambda_sum(14, 16, primes_only=True) == 0.0
    full = mertens_lambda_sum(2, 1000)
    primes_part = mertens_lambda_sum(2, 1000, primes_only=True)
    powers = sum(math.log(p) / p**k for p in primes.primes_in(2, 31)
                 for k in range(2, 11) if p**k <= 1000)
    assert full - primes_part == pytest.approx(powers)


@pytest.mark.parametrize("x", [10**3, 10**4, 10**5, 10**6])
def test_mertens_theorem_shadow(x):
    assert abs(mertens_lambda_sum(2, x) - math.log(x)) < 2


def test_mertens_chunking_is_seamless():
    assert mertens_lambda_sum(2, 50000, chunk=977) == pytest.approx(mertens_lambda_sum(2, 50000), rel=1e-13)


def test_base_table_concurrent_first_use():
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(8) as pool:
        results = list(pool.map(lambda _: len(primes.base_primes(10**5)), range(16)))
    assert len(set(results)) == 1 and results[0] == 9592
