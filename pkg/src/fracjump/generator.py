"""Evaluation of compiled fractional jumps and the generators built on them.

Includes the CRT compound generator over Z/NZ, the two hardened wrappers
(secret prime with rejection, forced double jumps) and an inversive
congruential generator used as a performance baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arith import crt_coefficients, is_prime
from .compiler import FJProgram
from .errors import CorruptProgramError, InvalidInputError


@dataclass
class EvalStats:
    """Instrumentation counters filled in by :func:`evaluate` and :func:`icg_next`."""

    evaluations: int = 0
    inversions: int = 0
    branch_hits: list[int] = field(default_factory=list)

    def hit(self, branch: int):
        if len(self.branch_hits) <= branch:
            self.branch_hits.extend([0] * (branch + 1 - len(self.branch_hits)))
        self.branch_hits[branch] += 1


def evaluate(program: FJProgram, x, stats: EvalStats | None = None) -> tuple[int, ...]:
    """psi(x): first branch whose denominator is nonzero at x, one inversion."""
    p = program.p
    for i, (b_coeffs, b_const, numerators) in enumerate(program._rows):
        d = b_const
        for c, xi in zip(b_coeffs, x):
            d += c * xi
        d %= p
        if d:
            inv = pow(d, -1, p)
            if stats is not None:
                stats.evaluations += 1
                stats.inversions += 1
                stats.hit(i)
            out = []
            for coeffs, const in numerators:
                v = const
                for c, xi in zip(coeffs, x):
                    v += c * xi
                out.append(v * inv % p)
            return tuple(out)
    raise CorruptProgramError("every denominator vanishes; program is corrupt")


def branch_index(program: FJProgram, x) -> int:
    """0-based branch used by :func:`evaluate` at x."""
    p = program.p
    for i, (b_coeffs, b_const, _) in enumerate(program._rows):
        if (b_const + sum(c * xi for c, xi in zip(b_coeffs, x))) % p:
            return i
    raise CorruptProgramError("every denominator vanishes; program is corrupt")


def _check_point(x, modulus: int, n: int) -> tuple[int, ...]:
    x = tuple(int(c) for c in x)
    if len(x) != n:
        raise InvalidInputError(f"expected {n} coordinates, got {len(x)}")
    if any(not 0 <= c < modulus for c in x):
        raise InvalidInputError(f"coordinates must lie in [0, {modulus})")
    return x


class FJState:
    """Mutable cursor over the sequence x, psi(x), psi(psi(x)), ..."""

    def __init__(self, program: FJProgram, start=None, stats: EvalStats | None = None):
        self.program = program
        self.current = _check_point(start if start is not None else (0,) * program.n,
                                    program.p, program.n)
        self.stats = stats

    def step(self) -> tuple[int, ...]:
        self.current = evaluate(self.program, self.current, self.stats)
        return self.current

    def next(self, count: int) -> list[tuple[int, ...]]:
        if count < 1:
            raise InvalidInputError("count must be >= 1")
        return [self.step() for _ in range(count)]


class CompoundGenerator:
    """x -> sum_i u_i * L_i(psi_i(x mod p_i)) mod N over distinct primes p_i."""

    def __init__(self, programs, start=None):
        programs = list(programs)
        if not programs:
            raise InvalidInputError("need at least one program")
        dims = {prog.n for prog in programs}
        if len(dims) != 1:
            raise InvalidInputError(f"programs disagree on dimension: {sorted(dims)}")
        self.programs = programs
        self.n = programs[0].n
        self.moduli = [prog.p for prog in programs]
        self.N, self.u = crt_coefficients(self.moduli)
        self.current = _check_point(start if start is not None else (0,) * self.n,
                                    self.N, self.n)

    def __call__(self, x) -> tuple[int, ...]:
        return compound_eval(self, x)

    def step(self) -> tuple[int, ...]:
        self.current = compound_eval(self, self.current)
        return self.current

    def next(self, count: int) -> list[tuple[int, ...]]:
        if count < 1:
            raise InvalidInputError("count must be >= 1")
        return [self.step() for _ in range(count)]


def compound_eval(G: CompoundGenerator, x) -> tuple[int, ...]:
    N = G.N
    acc = [0] * G.n
    for prog, u in zip(G.programs, G.u):
        p = prog.p
        y = evaluate(prog, tuple(c % p for c in x))
        for h, yh in enumerate(y):
            acc[h] += u * yh
    return tuple(v % N for v in acc)


class SecretPrimeConfig:
    """Reduce a full-orbit sequence over F_q modulo a smaller prime p with q = k p + 2.

    States with any coordinate in {q-2, q-1} are skipped so the output is
    exactly uniform per coordinate over a full period.
    """

    def __init__(self, inner, out_modulus: int):
        q = inner.program.p
        p = int(out_modulus)
        if not is_prime(p):
            raise InvalidInputError(f"output modulus {p} is not prime")
        if not p < q:
            raise InvalidInputError(f"need p < q, got p={p}, q={q}")
        if (q - 2) % p:
            raise InvalidInputError(f"q - 2 = {q - 2} is not a multiple of p = {p}")
        self.inner = inner
        self.q = q
        self.out_modulus = p
        self.k = (q - 2) // p

    def accepts(self, v) -> bool:
        return all(c < self.q - 2 for c in v)

    def next(self) -> tuple[int, ...]:
        return secret_prime_next(self)


def secret_prime_next(c: SecretPrimeConfig) -> tuple[int, ...]:
    while True:
        v = c.inner.step()
        if c.accepts(v):
            return tuple(x % c.out_modulus for x in v)


def rank(x, q: int) -> int:
    """Sum of x_i * q^(i-1): x_1 is the least significant digit."""
    r = 0
    for c in reversed(tuple(x)):
        r = r * q + c
    return r


class ForcedJumpConfig:
    """phi(x) = psi(x) on T = {rank(x) < threshold}, psi(psi(x)) elsewhere."""

    def __init__(self, program: FJProgram, threshold: int | None = None):
        size = program.p ** program.n
        if threshold is None:
            threshold = (size - 1) // 2
        if not 0 < threshold < size:
            raise InvalidInputError(f"threshold must lie in (0, {size})")
        self.program = program
        self.threshold = threshold

    def in_T(self, x) -> bool:
        return rank(x, self.program.p) < self.threshold

    def __call__(self, x) -> tuple[int, ...]:
        return forced_jump_eval(self, x)


def forced_jump_eval(c: ForcedJumpConfig, x) -> tuple[int, ...]:
    y = evaluate(c.program, x)
    return y if c.in_T(x) else evaluate(c.program, y)


class ForcedJumpState:
    def __init__(self, config: ForcedJumpConfig, start=None):
        prog = config.program
        self.config = config
        self.current = _check_point(start if start is not None else (0,) * prog.n, prog.p, prog.n)

    def step(self) -> tuple[int, ...]:
        self.current = forced_jump_eval(self.config, self.current)
        return self.current

    def next(self, count: int) -> list[tuple[int, ...]]:
        if count < 1:
            raise InvalidInputError("count must be >= 1")
        return [self.step() for _ in range(count)]


@dataclass
class ICGState:
    """Inversive congruential generator x -> a / x + b (0 -> b)."""

    p: int
    a: int
    b: int
    current: int = 0
    stats: EvalStats | None = None

    def __post_init__(self):
        self.a %= self.p
        self.b %= self.p
        self.current %= self.p
        if self.a == 0:
            raise InvalidInputError("ICG multiplier must be nonzero")

    def step(self) -> int:
        return icg_next(self)


def icg_next(s: ICGState) -> int:
    p = s.p
    # the inversion map sends 0 to 0, so every step costs one inversion
    inv = pow(s.current, -1, p) if s.current else 0
    s.current = (s.a * inv + s.b) % p
    if s.stats is not None:
        s.stats.evaluations += 1
        s.stats.inversions += 1
    return s.current


def coordinate_width(modulus: int) -> int:
    """Bytes per coordinate in the raw stream format."""
    return max(1, math.ceil(modulus.bit_length() / 8))


def encode_stream(points, modulus: int, fmt: str = "dec") -> bytes:
    """``dec``: one vector per line; ``raw``: little-endian fixed-width coordinates."""
    if fmt == "dec":
        return "".join(" ".join(str(c) for c in v) + "\n" for v in points).encode()
    if fmt == "raw":
        w = coordinate_width(modulus)
        return b"".join(c.to_bytes(w, "little") for v in points for c in v)
    raise InvalidInputError(f"unknown stream format {fmt!r}")


def decode_raw(data: bytes, modulus: int, n: int) -> list[tuple[int, ...]]:
    w = coordinate_width(modulus)
    if len(data) % (w * n):
        raise InvalidInputError("raw stream length is not a whole number of vectors")
    vals = [int.from_bytes(data[i:i + w], "little") for i in range(0, len(data), w)]
    return [tuple(vals[i:i + n]) for i in range(0, len(vals), n)]
