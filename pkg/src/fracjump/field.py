"""Prime fields, dense polynomials over them, and quotient rings F_p[x]/(f).

Also hosts the primitivity machinery: Rabin's irreducibility test, exact
multiplicative orders from a factored group order, the projective
primitivity test and the scan that rescales a projectively primitive
polynomial into a primitive one.

Polynomials are dense coefficient tuples, lowest degree first, with no
trailing zeros; the zero polynomial is the empty tuple.
"""

from __future__ import annotations

import functools
import itertools
import random
import re
from dataclasses import dataclass

from .arith import FactoredInteger, factor, is_prime
from .errors import (
    IncompleteFactorizationError,
    InternalContradictionError,
    InvalidInputError,
    InvalidModulusError,
    NotAUnitError,
    NotFoundError,
)

STRATEGIES = ("exhaustive-lex", "seeded-random", "small-coefficients-first")


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not _cached_is_prime(self.p):
            raise InvalidModulusError(f"{self.p} is not prime")

    def __call__(self, value: int) -> "Fp":
        return Fp(self, value)

    def __repr__(self):
        return f"GF({self.p})"


@functools.lru_cache(maxsize=256)
def _cached_is_prime(p: int) -> bool:
    return is_prime(p)


@functools.lru_cache(maxsize=256)
def GF(p: int) -> PrimeField:
    """Return the (cached) prime field of order ``p``."""
    return PrimeField(int(p))


@functools.lru_cache(maxsize=256)
def _factor_cached(value: int) -> FactoredInteger:
    return factor(value)


@dataclass(frozen=True)
class Fp:
    field: PrimeField
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.field.p)

    @property
    def p(self) -> int:
        return self.field.p

    def _other(self, other) -> int:
        if isinstance(other, Fp):
            if other.field != self.field:
                raise InvalidInputError("mixing elements of different fields")
            return other.value
        return other

    def __add__(self, other):
        return Fp(self.field, self.value + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Fp(self.field, self.value - self._other(other))

    def __rsub__(self, other):
        return Fp(self.field, self._other(other) - self.value)

    def __mul__(self, other):
        return Fp(self.field, self.value * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(self.field, -self.value)

    def inverse(self) -> "Fp":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fp(self.field, pow(self.value, -1, self.p))

    def __truediv__(self, other):
        return self * Fp(self.field, self._other(other)).inverse()

    def __pow__(self, e: int):
        return Fp(self.field, pow(self.value, e, self.p))

    def __int__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.value))

    def is_one(self) -> bool:
        return self.value == 1

    def one(self) -> "Fp":
        return Fp(self.field, 1)

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def _trim(coeffs) -> tuple[int, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _mul_raw(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _reduce_raw(rem, mod, inv, p):
    """Remainder of a coefficient list modulo ``mod`` (lc inverse ``inv``), reduced mod p."""
    db = len(mod) - 1
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k] * inv % p
        if c:
            base = k - db
            for j, bj in enumerate(mod):
                rem[base + j] -= c * bj
    rem = [c % p for c in rem[:db]]
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


def _powmod_raw(base, e, mod, p):
    inv = pow(mod[-1], -1, p)
    result = _reduce_raw([1], mod, inv, p)
    base = _reduce_raw(base, mod, inv, p)
    while e:
        if e & 1:
            result = _reduce_raw(_mul_raw(result, base), mod, inv, p)
        e >>= 1
        if e:
            base = _reduce_raw(_mul_raw(base, base), mod, inv, p)
    return result


def _coprime_raw(a, b, p) -> bool:
    """gcd(a, b) is a nonzero constant."""
    while b:
        a, b = b, _reduce_raw(list(a), b, pow(b[-1], -1, p), p)
    return len(a) == 1


class FpPoly:
    """Polynomial over a prime field, coefficients lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: PrimeField | int, coeffs=()):
        if isinstance(field, int):
            field = GF(field)
        self.field = field
        p = field.p
        self.coeffs = _trim(int(c) % p for c in coeffs)

    @property
    def p(self) -> int:
        return self.field.p

    @classmethod
    def x(cls, field) -> "FpPoly":
        return cls(field, (0, 1))

    @classmethod
    def constant(cls, field, c: int) -> "FpPoly":
        return cls(field, (c,))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lc == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        if not isinstance(other, FpPoly):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def _coerce(self, other) -> "FpPoly":
        if isinstance(other, FpPoly):
            if other.p != self.p:
                raise InvalidInputError("mixing polynomials over different fields")
            return other
        if isinstance(other, (int, Fp)):
            return FpPoly(self.field, (int(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return FpPoly(self.field, (self[i] + other[i] for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return FpPoly(self.field, (-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return FpPoly(self.field)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return FpPoly(self.field, out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        db = other.degree
        inv = pow(other.lc, -1, p)
        quot = [0] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k] * inv % p
            if c:
                quot[k - db] = c
                for j, bj in enumerate(other.coeffs):
                    rem[k - db + j] = (rem[k - db + j] - c * bj) % p
        return FpPoly(self.field, quot), FpPoly(self.field, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "FpPoly":
        if self.is_zero():
            raise InvalidInputError("zero polynomial has no monic associate")
        inv = pow(self.lc, -1, self.p)
        return FpPoly(self.field, (c * inv for c in self.coeffs))

    def __call__(self, x: int) -> int:
        """Evaluate at a field element (Horner)."""
        p = self.p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * int(x) + c) % p
        return acc

    def powmod(self, e: int, modulus: "FpPoly") -> "FpPoly":
        modulus = self._coerce(modulus)
        if modulus.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        return FpPoly(self.field, _powmod_raw(list(self.coeffs), e, modulus.coeffs, self.p))

    def scale_variable(self, lam: int) -> "FpPoly":
        """Monic rescaling ``lam^m * f(x / lam)`` of a degree-m polynomial."""
        p = self.p
        lam %= p
        if lam == 0:
            raise InvalidInputError("scaling factor must be nonzero")
        m = self.degree
        return FpPoly(self.field, (c * pow(lam, m - i, p) for i, c in enumerate(self.coeffs)))

    def __repr__(self):
        return f"FpPoly({self.p}, {list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)

    def to_csv(self) -> str:
        return ",".join(str(c) for c in self.coeffs)


def poly_gcd(a: FpPoly, b: FpPoly) -> FpPoly:
    """Monic gcd (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


_TERM = re.compile(r"([+-]?)([^+-]+)")
_MONO = re.compile(r"^(?:(\d+)\*?)?(?:x(?:\^(\d+))?)?$")


def parse_poly(text: str, field: PrimeField | int) -> FpPoly:
    """Parse ``"3,3,0,1"`` (ascending coefficients) or ``"x^3+3*x+3"``."""
    if isinstance(field, int):
        field = GF(field)
    s = text.replace(" ", "")
    if not s:
        raise InvalidInputError("empty polynomial")
    if "x" not in s:
        try:
            return FpPoly(field, (int(c) for c in s.split(",")))
        except ValueError as exc:
            raise InvalidInputError(f"bad coefficient list {text!r}") from exc
    coeffs: dict[int, int] = {}
    pos = 0
    for m in _TERM.finditer(s):
        if m.start() != pos:
            raise InvalidInputError(f"cannot parse polynomial {text!r}")
        pos = m.end()
        sign, body = m.groups()
        mono = _MONO.match(body)
        if not mono or body in ("", "*"):
            raise InvalidInputError(f"cannot parse term {body!r} in {text!r}")
        c_txt, e_txt = mono.groups()
        has_x = "x" in body
        c = int(c_txt) if c_txt else 1
        e = int(e_txt) if e_txt else (1 if has_x else 0)
        coeffs[e] = coeffs.get(e, 0) + (-c if sign == "-" else c)
    if pos != len(s):
        raise InvalidInputError(f"cannot parse polynomial {text!r}")
    top = max(coeffs)
    return FpPoly(field, (coeffs.get(i, 0) for i in range(top + 1)))


class QuotientElement:
    """Residue class in F_p[x]/(modulus) for a monic modulus of degree >= 1."""

    __slots__ = ("modulus", "residue")

    def __init__(self, modulus: FpPoly, residue: FpPoly):
        if modulus.degree < 1 or not modulus.is_monic():
            raise InvalidInputError("modulus must be monic of degree >= 1")
        self.modulus = modulus
        self.residue = residue % modulus

    @classmethod
    def x(cls, modulus: FpPoly) -> "QuotientElement":
        return cls(modulus, FpPoly.x(modulus.field))

    def one(self) -> "QuotientElement":
        return QuotientElement(self.modulus, FpPoly(self.modulus.field, (1,)))

    def is_one(self) -> bool:
        return self.residue.coeffs == (1,)

    def is_zero(self) -> bool:
        return self.residue.is_zero()

    def __mul__(self, other: "QuotientElement") -> "QuotientElement":
        if other.modulus != self.modulus:
            raise InvalidInputError("mixing different quotient rings")
        return QuotientElement(self.modulus, self.residue * other.residue)

    def __pow__(self, e: int) -> "QuotientElement":
        return QuotientElement(self.modulus, self.residue.powmod(e, self.modulus))

    def __eq__(self, other):
        if not isinstance(other, QuotientElement):
            return NotImplemented
        return self.modulus == other.modulus and self.residue == other.residue

    def __hash__(self):
        return hash((self.modulus, self.residue))

    def __repr__(self):
        return f"[{self.residue}] mod ({self.modulus})"


def element_order(g, group_order: FactoredInteger) -> int:
    """Exact multiplicative order of ``g`` given a factored multiple of it.

    ``g`` is an :class:`Fp` or a :class:`QuotientElement`.
    """
    if not group_order.complete:
        raise IncompleteFactorizationError(
            f"factorization of {group_order.value} is incomplete"
        )
    if (isinstance(g, Fp) and g.value == 0) or (
        isinstance(g, QuotientElement) and g.is_zero()
    ):
        raise NotAUnitError("zero has no multiplicative order")
    order = group_order.value
    if not (g**order).is_one():
        raise NotAUnitError(f"element does not satisfy g^{order} = 1")
    for r, e in group_order.factors:
        for _ in range(e):
            if (g ** (order // r)).is_one():
                order //= r
            else:
                break
    return order


def _require_nonconstant(f: FpPoly):
    if f.degree < 1:
        raise InvalidInputError("polynomial must have degree >= 1")


def _prime_divisors(m: int) -> list[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def is_irreducible(f: FpPoly) -> bool:
    """Rabin's test: x^(p^m) = x mod f, and gcd(x^(p^(m/r)) - x, f) = 1 for primes r | m."""
    _require_nonconstant(f)
    f = f.monic()
    m = f.degree
    if m == 1:
        return True
    p = f.p
    mod = list(f.coeffs)
    x = _reduce_raw([0, 1], mod, 1, p)

    def minus_x(a):
        a = a + [0] * (2 - len(a))
        a[1] = (a[1] - 1) % p
        while a and a[-1] == 0:
            a.pop()
        return a

    # frob[k] = x^(p^k) mod f
    frob = [x]
    for _ in range(m):
        frob.append(_powmod_raw(frob[-1], p, mod, p))
        if len(frob) == 2 and not _coprime_raw(mod, minus_x(frob[1]), p):
            return False  # linear factor; cheap early exit
    if frob[m] != x:
        return False
    for r in _prime_divisors(m):
        if not _coprime_raw(mod, minus_x(frob[m // r]), p):
            return False
    return True


def projective_group_order(p: int, m: int) -> int:
    """Order (p^m - 1)/(p - 1) of F_{p^m}^* / F_p^*."""
    return (p**m - 1) // (p - 1)


def _resolve_hint(value: int, hint: FactoredInteger | None) -> FactoredInteger:
    if hint is None:
        fac = _factor_cached(value)
    else:
        if hint.value != value:
            raise InvalidInputError(f"hint factors {hint.value}, expected {value}")
        fac = hint
    if not fac.complete:
        raise IncompleteFactorizationError(
            f"could not fully factor {value}; supply a factorization hint"
        )
    return fac


def is_projectively_primitive(f: FpPoly, hint: FactoredInteger | None = None) -> bool:
    """True iff ``f`` is irreducible and x^(p-1) has order (p^m-1)/(p-1) mod f.

    ``hint`` may carry a certified factorization of (p^m-1)/(p-1).
    """
    _require_nonconstant(f)
    if not f.is_monic():
        raise InvalidInputError("polynomial must be monic")
    if f[0] == 0:
        # x | f: either reducible or f = x, whose root is not a unit
        return False
    if not is_irreducible(f):
        return False
    N = projective_group_order(f.p, f.degree)
    fac = _resolve_hint(N, hint)
    g = QuotientElement.x(f) ** (f.p - 1)
    return element_order(g, fac) == N


def root_norm(f: FpPoly) -> int:
    """Norm of a root of the monic polynomial f: (-1)^m * f(0)."""
    return (-1) ** f.degree * f[0] % f.p


def make_primitive(
    f: FpPoly, hint: FactoredInteger | None = None, check: bool = True
) -> tuple[Fp, FpPoly]:
    """Rescale a projectively primitive ``f`` into a primitive polynomial.

    Scans lambda = 1, 2, ..., p-1 and returns the first one for which
    lambda^m * N(alpha) generates F_p^*, together with g(x) = lambda^m f(x/lambda).
    """
    _require_nonconstant(f)
    if not f.is_monic():
        raise InvalidInputError("polynomial must be monic")
    if check and not is_projectively_primitive(f, hint):
        raise InvalidInputError(f"{f} is not projectively primitive")
    p, m = f.p, f.degree
    beta = root_norm(f)
    units = _factor_cached(p - 1)
    for lam in range(1, p):
        beta_lam = Fp(f.field, pow(lam, m, p) * beta)
        if element_order(beta_lam, units) == p - 1:
            return Fp(f.field, lam), f.scale_variable(lam)
    raise InternalContradictionError(f"no rescaling of {f} is primitive")


def _monic_from_index(field: PrimeField, m: int, k: int) -> FpPoly:
    p = field.p
    coeffs = []
    for _ in range(m):
        k, c = divmod(k, p)
        coeffs.append(c)
    return FpPoly(field, coeffs + [1])


def _candidates(field: PrimeField, m: int, strategy: str, seed, max_tries: int):
    p = field.p
    if strategy == "exhaustive-lex":
        for k in range(p**m):
            yield _monic_from_index(field, m, k)
    elif strategy == "small-coefficients-first":
        small = sorted({0, 1, p - 1})
        seen = set()
        for combo in itertools.product(small, repeat=m):
            coeffs = tuple(reversed(combo))  # most significant coefficient varies slowest
            seen.add(coeffs)
            yield FpPoly(field, coeffs + (1,))
        for k in range(p**m):
            f = _monic_from_index(field, m, k)
            padded = tuple(f[i] for i in range(m))
            if padded not in seen:
                yield f
    elif strategy == "seeded-random":
        rng = random.Random(seed)
        for _ in range(max_tries):
            yield FpPoly(field, [rng.randrange(p) for _ in range(m)] + [1])
    else:
        raise InvalidInputError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def iter_projectively_primitive(p: int, m: int, strategy: str = "exhaustive-lex", seed=None,
                                max_tries: int = 100_000, hint: FactoredInteger | None = None):
    """Yield the monic degree-m projectively primitive polynomials the strategy visits."""
    if m < 1:
        raise InvalidInputError("degree must be >= 1")
    field = GF(p)
    fac = _resolve_hint(projective_group_order(p, m), hint)
    for f in _candidates(field, m, strategy, seed, max_tries):
        if is_projectively_primitive(f, fac):
            yield f


def search_projectively_primitive(p: int, m: int, strategy: str = "exhaustive-lex", seed=None,
                                  max_tries: int = 100_000,
                                  hint: FactoredInteger | None = None) -> FpPoly:
    """Return the first projectively primitive monic polynomial found by ``strategy``."""
    for f in iter_projectively_primitive(p, m, strategy, seed, max_tries, hint):
        return f
    raise NotFoundError(f"no projectively primitive polynomial of degree {m} over F_{p} found")
