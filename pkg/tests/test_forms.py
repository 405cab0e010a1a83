import random

import pytest

from invgen.forms import count_repunits_upto, repunit_decompose, repunit_value
from invgen.primes import MAX_N
from oracles import repunit_values_brute


def pairs(n):
    return sorted((w.q, w.d) for w in repunit_decompose(n))


def test_examples():
    assert pairs(7) == [(2, 3)]
    assert pairs(31) == [(2, 5), (5, 3)]
    assert pairs(30) == []
    assert pairs(8191) == [(2, 13), (90, 3)]


def test_count_examples():
    assert count_repunits_upto(7) == 1
    assert count_repunits_upto(31) == len(repunit_values_brute(31)) == 5


def test_count_matches_brute_and_sqrt_shadow():
    for X in (10**4, 10**5, 10**6):
        brute = repunit_values_brute(X)
        assert count_repunits_upto(X) == len(brute)
        assert count_repunits_upto(X) <= 2 * X**0.5


def test_every_generated_value_detected():
    for q in range(2, 1001):
        for d in range(3, 21):
            v = repunit_value(q, d)
            if v == -1:
                break
            assert (q, d) in pairs(v)


def test_no_false_positives():
    rng = random.Random(2)
    brute = repunit_values_brute(10**6)
    for n in list(range(3, 5000)) + [rng.randrange(3, 10**6) for _ in range(2000)]:
        ws = repunit_decompose(n)
        assert bool(ws) == (n in brute)
        for w in ws:
            assert sum(w.q**k for k in range(w.d)) == n == w.value


def test_large_values():
    q = 1_000_003
    assert (q, 3) in pairs(1 + q + q * q)
    assert pairs(2**61 - 1) == [(2, 61)]
    with pytest.raises(ValueError):
        repunit_decompose(2)
    assert repunit_value(2, 70) == -1 and repunit_value(2, 62) == 2**62 - 1 <= MAX_N
