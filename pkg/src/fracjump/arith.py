"""Integer utilities: modular powers, primality, factoring and CRT coefficients.

Everything works on plain Python ints, which are arbitrary precision.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass, field

from .errors import InvalidInputError, InvalidModulusError

TRIAL_DIVISION_BOUND = 10**6
DEFAULT_FACTOR_BUDGET = 2_000_000

# Deterministic for every n < 3.3 * 10**24, which covers n < 2**64.
_DETERMINISTIC_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# (bound, number of leading witnesses that suffice below it)
_WITNESS_TIERS = (
    (2_047, 1),
    (1_373_653, 2),
    (25_326_001, 3),
    (3_215_031_751, 4),
    (2_152_302_898_747, 5),
    (3_474_749_660_383, 6),
    (341_550_071_728_321, 7),
    (3_825_123_056_546_413_051, 9),
)
_RANDOM_ROUNDS = 64
_sysrand = random.SystemRandom()


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """Return ``base**exponent % modulus`` for a modulus of at least 2."""
    if modulus < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {modulus}")
    if exponent < 0:
        raise InvalidInputError("negative exponent")
    return pow(base, exponent, modulus)


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin test.

    Exact below 2**64 (fixed witness set); above that, 64 rounds with random
    witnesses bound the error by 4**-64.
    """
    if n < 2:
        return False
    for q in _DETERMINISTIC_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    witnesses = _DETERMINISTIC_WITNESSES
    for bound, count in _WITNESS_TIERS:
        if n < bound:
            witnesses = witnesses[:count]
            break
    if not all(_strong_probable_prime(n, a, d, s) for a in witnesses):
        return False
    if n < 1 << 64:
        return True
    for _ in range(_RANDOM_ROUNDS):
        a = _sysrand.randrange(2, n - 1)
        if not _strong_probable_prime(n, a, d, s):
            return False
    return True


@functools.cache
def small_primes(bound: int = TRIAL_DIVISION_BOUND) -> tuple[int, ...]:
    """Primes up to ``bound`` (inclusive), by a bytearray sieve."""
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, bound + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


@dataclass(frozen=True)
class FactoredInteger:
    """``value`` together with (prime, exponent) pairs.

    When ``complete`` is False the listed factors are only part of ``value``.
    """

    value: int
    factors: tuple[tuple[int, int], ...] = field(default=())
    complete: bool = True

    def __post_init__(self):
        if self.value < 1:
            raise InvalidInputError("FactoredInteger requires value >= 1")
        for prime, exponent in self.factors:
            if exponent < 1 or not is_prime(prime):
                raise InvalidInputError(f"bad factor {prime}^{exponent}")
        if self.complete and self.product() != self.value:
            raise InvalidInputError(
                f"factors multiply to {self.product()}, not {self.value}"
            )

    def product(self) -> int:
        out = 1
        for prime, exponent in self.factors:
            out *= prime**exponent
        return out

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(prime for prime, _ in self.factors)

    @classmethod
    def from_primes(cls, value: int, primes) -> "FactoredInteger":
        """Build a complete factorization from a list of primes dividing ``value``.

        Exponents are recovered by repeated division, so each prime need only
        be listed once. Used to supply externally certified factorizations.
        """
        rest = value
        factors = []
        for prime in sorted(set(primes)):
            if not is_prime(prime):
                raise InvalidInputError(f"{prime} is not prime")
            e = 0
            while rest % prime == 0:
                rest //= prime
                e += 1
            if e == 0:
                raise InvalidInputError(f"{prime} does not divide {value}")
            factors.append((prime, e))
        if rest != 1:
            raise InvalidInputError(f"primes do not fully factor {value}")
        return cls(value, tuple(factors), True)


def _brent(n: int, budget: int, c: int) -> tuple[int | None, int]:
    """One Pollard-Brent run with x -> x^2 + c. Returns (divisor or None, iterations used)."""
    y, r, q, g = 2, 1, 1, 1
    x = ys = y
    used = 0
    m = 128
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
            used += min(m, r - k)
            g = math.gcd(q, n)
            k += m
            if used >= budget:
                return None, used
        r *= 2
    if g == n:
        # Backtrack one step at a time over the last block.
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return (g if g != n else None), used


def _split(n: int, budget: int) -> tuple[int | None, int]:
    spent = 0
    for c in range(1, 64):
        if spent >= budget:
            break
        d, used = _brent(n, budget - spent, c)
        spent += used
        if d is not None:
            return d, spent
    return None, spent


def factor(value: int, effort_budget: int = DEFAULT_FACTOR_BUDGET) -> FactoredInteger:
    """Factor ``value`` by trial division to 10**6 followed by Pollard-Brent rho.

    ``effort_budget`` caps the total number of rho iterations. If it runs out
    the result has ``complete=False`` and lists only the primes found.
    """
    if value < 1:
        raise InvalidInputError("factor requires value >= 1")
    counts: dict[int, int] = {}
    rest = value
    for q in small_primes():
        if q * q > rest:
            break
        while rest % q == 0:
            counts[q] = counts.get(q, 0) + 1
            rest //= q
    if 1 < rest <= TRIAL_DIVISION_BOUND**2:
        counts[rest] = counts.get(rest, 0) + 1
        rest = 1

    complete = True
    stack = [rest] if rest > 1 else []
    budget = effort_budget
    while stack:
        m = stack.pop()
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack += [root, root]
            continue
        d, used = _split(m, budget)
        budget -= used
        if d is None:
            complete = False
            continue
        stack += [d, m // d]

    factors = tuple(sorted(counts.items()))
    return FactoredInteger(value, factors, complete)


def crt_coefficients(primes) -> tuple[int, list[int]]:
    """Return ``(N, u)`` with N the product and u_i = 1 mod p_i, 0 mod p_j (j != i)."""
    primes = [int(p) for p in primes]
    if not primes:
        raise InvalidInputError("need at least one prime")
    if len(set(primes)) != len(primes):
        raise InvalidInputError(f"repeated modulus in {primes}")
    for p in primes:
        if not is_prime(p):
            raise InvalidInputError(f"{p} is not prime")
    N = math.prod(primes)
    u = []
    for p in primes:
        v = N // p
        u.append(v * pow(v, -1, p) % N)
    return N, u
