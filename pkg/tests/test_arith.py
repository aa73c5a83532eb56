import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracjump.arith import FactoredInteger, crt_coefficients, factor, is_prime, mod_pow
from fracjump.errors import InvalidInputError, InvalidModulusError

from conftest import BIG_P


def sieve(limit):
    flags = bytearray([1]) * limit
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit - 1) + 1):
        if flags[i]:
            for j in range(i * i, limit, i):
                flags[j] = 0
    return flags


def test_mod_pow_examples():
    assert mod_pow(3, 4, 5) == 1
    assert mod_pow(2, 10, 1000) == 24
    assert mod_pow(123, 0, 7) == 1
    with pytest.raises(InvalidModulusError):
        mod_pow(2, 3, 1)


@given(st.integers(0, 1023), st.integers(0, 1023), st.integers(2, 1023))
def test_mod_pow_matches_repeated_multiplication(b, e, m):
    acc = 1 % m
    for _ in range(e):
        acc = acc * b % m
    assert mod_pow(b, e, m) == acc


def test_is_prime_examples():
    assert not is_prime(15)
    assert is_prime(BIG_P)
    assert is_prime((BIG_P**3 - 1) // (BIG_P - 1))
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    assert not is_prime(BIG_P * 1000000007)


def test_is_prime_agrees_with_sieve_below_2_20():
    flags = sieve(1 << 20)
    bad = [v for v in range(1 << 20) if is_prime(v) != bool(flags[v])]
    assert bad == []


def test_factor_examples():
    assert factor(24) == FactoredInteger(24, ((2, 3), (3, 1)))
    assert factor(4).factors == ((2, 2),)
    f = factor(4294967297)
    assert f.complete and f.factors == ((641, 1), (6700417, 1))
    assert 641 * 6700417 == 4294967297
    assert factor(1).factors == ()


def test_factor_reconstructs_every_value_below_2_20():
    for v in range(1, 1 << 20):
        f = factor(v)
        assert f.complete
        assert f.product() == v


def test_factor_beyond_trial_division():
    a, b = 1000003, 1000000007
    f = factor(a * b * b)
    assert f.complete and f.factors == ((a, 1), (b, 2))
    f = factor((BIG_P**3 - 1) // (BIG_P - 1))
    assert f.complete and len(f.factors) == 1


def test_factor_budget_exhaustion_is_reported():
    # two ~2^40 primes, no chance with a tiny budget
    n = 1099511627791 * 1099511628401
    f = factor(n, effort_budget=10)
    assert not f.complete
    with pytest.raises(InvalidInputError):
        FactoredInteger(n, (), True)


def test_factored_integer_from_primes():
    f = FactoredInteger.from_primes(360, [2, 3, 5])
    assert f.factors == ((2, 3), (3, 2), (5, 1))
    with pytest.raises(InvalidInputError):
        FactoredInteger.from_primes(360, [2, 3])
    with pytest.raises(InvalidInputError):
        FactoredInteger.from_primes(360, [2, 3, 5, 4])


def test_crt_coefficients_examples():
    assert crt_coefficients([5, 3]) == (15, [6, 10])
    assert crt_coefficients([BIG_P]) == (BIG_P, [1])
    assert crt_coefficients([3, 5, 7]) == (105, [70, 21, 15])
    with pytest.raises(InvalidInputError):
        crt_coefficients([5, 5])
    with pytest.raises(InvalidInputError):
        crt_coefficients([4, 5])


@given(st.sets(st.sampled_from([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]), min_size=1, max_size=5))
def test_crt_coefficients_kronecker_delta(primes):
    primes = sorted(primes)
    N, u = crt_coefficients(primes)
    assert N == math.prod(primes)
    for i, ui in enumerate(u):
        assert 0 <= ui < N
        for j, pj in enumerate(primes):
            assert ui % pj == (1 if i == j else 0)
