import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ergodic_primes.errors import InvalidClassError, ParameterError, ResourceError
from ergodic_primes.primes import (
    ResidueClass,
    chebyshev_theta,
    euler_totient,
    factorize,
    is_prime,
    mobius,
    primes_upto,
    sieve_primes,
    siegel_walfisz_error,
    units_mod,
)


def trial_division(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def test_sieve_small():
    assert list(sieve_primes(1)) == []
    assert list(sieve_primes(10)) == [2, 3, 5, 7]
    assert list(sieve_primes(2)) == [2]


def test_sieve_million_count():
    table = sieve_primes(10**6)
    assert len(table) == 78498
    # independent oracle on a window
    window = [n for n in range(999_000, 10**6 + 1) if trial_division(n)]
    assert table.upto(10**6)[-len(window):].tolist() == window


@given(st.integers(1, 3000))
def test_sieve_matches_trial_division(n):
    assert list(sieve_primes(n)) == [p for p in range(2, n + 1) if trial_division(p)]


def test_sieve_segments_agree():
    a = sieve_primes(200_000).primes
    b = sieve_primes(200_000, segment=1000).primes
    assert np.array_equal(a, b)


def test_sieve_budget():
    with pytest.raises(ResourceError):
        sieve_primes(10**9, memory_budget=10**6)
    with pytest.raises(ParameterError):
        sieve_primes(0)


def test_table_upto_guard():
    t = sieve_primes(100)
    assert t.upto(10).tolist() == [2, 3, 5, 7]
    with pytest.raises(ParameterError):
        t.upto(101)


@pytest.mark.parametrize("q,phi", [(1, 1), (7, 6), (12, 4)])
def test_totient_examples(q, phi):
    assert euler_totient(q) == phi


def test_totient_multiplicative():
    for m in range(1, 51):
        for n in range(1, 51):
            if math.gcd(m, n) == 1:
                assert euler_totient(m * n) == euler_totient(m) * euler_totient(n)


@given(st.integers(1, 2000))
def test_totient_counts_units(q):
    units = units_mod(q)
    assert len(units) == euler_totient(q)
    assert units == {a for a in range(1, q + 1) if math.gcd(a, q) == 1}


def test_units_examples():
    assert units_mod(1) == {1}
    assert units_mod(6) == {1, 5}
    assert units_mod(12) == {1, 5, 7, 11}


@given(st.integers(1, 5000))
def test_factorize_and_mobius(n):
    fac = factorize(n)
    assert math.prod(p**e for p, e in fac) == n
    assert all(is_prime(p) for p, _ in fac)
    brute = 0 if any(n % (d * d) == 0 for d in range(2, math.isqrt(n) + 1)) else (-1) ** len(fac)
    assert mobius(n) == brute


def test_theta_examples():
    assert chebyshev_theta(1) == 0.0
    assert chebyshev_theta(10) == pytest.approx(math.log(210), abs=1e-12)
    assert chebyshev_theta(10, 4, 1) == pytest.approx(math.log(5), abs=1e-12)
    assert chebyshev_theta(10, ResidueClass(4, 1)) == pytest.approx(1.6094379124341003)


@pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 6, 10, 12])
def test_theta_partition(q):
    x = 20_000
    total = math.fsum(chebyshev_theta(x, q, r) for r in units_mod(q))
    total += math.fsum(math.log(p) for p, _ in factorize(q) if p <= x) if q > 1 else 0.0
    assert total == pytest.approx(chebyshev_theta(x), rel=1e-13)


def test_sw_examples():
    assert siegel_walfisz_error(1) == 1.0
    assert siegel_walfisz_error(10) == pytest.approx(10 - math.log(210), abs=1e-12)
    assert siegel_walfisz_error(10**6) / 10**6 <= 0.01


def test_sw_invalid_class():
    with pytest.raises(InvalidClassError):
        siegel_walfisz_error(100, 4, 2)
    with pytest.raises(ParameterError):
        ResidueClass(4, 0)


def test_sw_average_decay_q_le_6():
    xs = [10**3, 10**4, 10**5, 10**6]
    for q in range(1, 7):
        seq = [np.mean([siegel_walfisz_error(x, q, r) / x for r in units_mod(q)]) for x in xs]
        inversions = sum(b > a for a, b in zip(seq, seq[1:]))
        assert inversions <= 1, (q, seq)


def test_primes_upto_matches_sieve():
    assert primes_upto(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
