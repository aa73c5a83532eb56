"""Compile a transitive projective map into its (n+1)-branch program.

Branch i holds DeHom(M^i) reduced modulo the vanishing of the earlier
denominators b^(1)..b^(i-1). The reduction is row-echelon substitution with
the leftmost nonzero variable of each reduced denominator as its pivot, so
branch i has zero coefficients exactly at the pivots of branches 1..i-1.
That is what lets :func:`serialize` skip those columns and hit the
ceil(log2 p) * (n+1)^2 (n+2) / 2 bit payload.

Binary layout (all integers big-endian)::

    b"FJMP" | version 0x01 | n (1 byte) | len(p) (2 bytes) | p
    | pivots (n bytes, 0-based) | packed payload
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .arith import FactoredInteger
from .errors import (
    CorruptProgramError,
    FormatError,
    InternalContradictionError,
    InvalidModulusError,
    RangeError,
    TransitivityError,
    TruncationError,
)
from .field import GF
from .projective import LinearForm, ProjMatrix, dehom, is_transitive

MAGIC = b"FJMP"
FORMAT_VERSION = 1

__all__ = [
    "EchelonBasis",
    "FJProgram",
    "LinearForm",
    "compile_program",
    "deserialize",
    "payload_bits",
    "reduce_form",
    "serialize",
]


class EchelonBasis:
    """Reduced row-echelon rows (pivot, form): 1 at the own pivot, 0 at the others."""

    def __init__(self, rows=()):
        self.rows: list[tuple[int, LinearForm]] = list(rows)

    @property
    def pivots(self) -> list[int]:
        return [piv for piv, _ in self.rows]

    def add(self, form: LinearForm) -> int:
        """Insert an already-reduced form; returns its pivot (0-based variable index)."""
        piv = form.leftmost_variable()
        if piv is None:
            raise InternalContradictionError("cannot pivot on a constant form")
        row = form.scaled(pow(form.var_coeffs[piv], -1, form.p))
        # back-substitute so earlier rows are zero at the new pivot
        self.rows = [
            (q, old - row.scaled(old.var_coeffs[piv])) if old.var_coeffs[piv] else (q, old)
            for q, old in self.rows
        ]
        self.rows.append((piv, row))
        return piv

    def is_valid(self) -> bool:
        pivots = self.pivots
        if len(set(pivots)) != len(pivots):
            return False
        for piv, form in self.rows:
            for other in pivots:
                if form.var_coeffs[other] != (1 if other == piv else 0):
                    return False
        return True


def reduce_form(f: LinearForm, basis: EchelonBasis) -> LinearForm:
    """Substitute the relations basis == 0 into f, zeroing every pivot column."""
    for piv, row in basis.rows:
        c = f.var_coeffs[piv]
        if c:
            f = f - row.scaled(c)
    return f


@dataclass(frozen=True)
class Branch:
    a: tuple[LinearForm, ...]
    b: LinearForm


class FJProgram:
    """Compiled fractional jump: n+1 branches plus the pivot of each b^(i), i <= n."""

    __slots__ = ("field", "n", "branches", "pivots", "_rows")

    def __init__(self, p: int, n: int, branches, pivots):
        self.field = GF(p)
        self.n = n
        self.branches = tuple(Branch(tuple(a), b) for a, b in branches)
        self.pivots = tuple(pivots)
        self._validate()
        # flat integer rows for the evaluator: (b coeffs + const, [a_h coeffs + const])
        self._rows = tuple(
            (br.b.var_coeffs, br.b.constant, tuple((f.var_coeffs, f.constant) for f in br.a))
            for br in self.branches
        )

    @property
    def p(self) -> int:
        return self.field.p

    def _validate(self):
        n, p = self.n, self.p
        if len(self.branches) != n + 1 or len(self.pivots) != n:
            raise CorruptProgramError("wrong number of branches or pivots")
        if len(set(self.pivots)) != n or any(not 0 <= v < n for v in self.pivots):
            raise CorruptProgramError(f"bad pivot list {self.pivots}")
        for i, br in enumerate(self.branches):
            if len(br.a) != n:
                raise CorruptProgramError(f"branch {i + 1} has {len(br.a)} numerators")
            for form in br.a + (br.b,):
                if form.p != p or form.n != n:
                    raise CorruptProgramError("form over the wrong field or dimension")
                if any(form.var_coeffs[v] for v in self.pivots[:i]):
                    raise CorruptProgramError(f"branch {i + 1} not reduced at earlier pivots")
            if i < n and br.b.leftmost_variable() != self.pivots[i]:
                raise CorruptProgramError(f"denominator {i + 1} does not pivot at {self.pivots[i]}")
        last = self.branches[n].b
        if not last.is_constant() or last.constant == 0:
            raise CorruptProgramError("last denominator must be a nonzero constant")

    def __eq__(self, other):
        if not isinstance(other, FJProgram):
            return NotImplemented
        return (self.p, self.n, self.branches, self.pivots) == (
            other.p, other.n, other.branches, other.pivots)

    def __hash__(self):
        return hash((self.p, self.n, self.branches, self.pivots))

    def __repr__(self):
        return f"FJProgram(p={self.p}, n={self.n}, pivots={self.pivots})"

    def describe(self) -> str:
        """Human-readable branch listing."""
        lines = []
        for i, br in enumerate(self.branches, 1):
            nums = ", ".join(f"({a})" for a in br.a)
            lines.append(f"branch {i}: ({nums}) / ({br.b})")
        return "\n".join(lines)


def compile_program(M: ProjMatrix, assume_transitive: bool = False,
                    hint: FactoredInteger | None = None) -> FJProgram:
    """Build the branch program of [M].

    Transitivity is verified first unless the caller certifies it with
    ``assume_transitive``; ``hint`` is a factorization of (p^(n+1)-1)/(p-1).
    """
    if not assume_transitive and not is_transitive(M, hint):
        raise TransitivityError("matrix does not act transitively on projective space")
    p, n = M.p, M.n
    basis = EchelonBasis()
    branches, pivots = [], []
    power = M
    for i in range(1, n + 2):
        if i > 1:
            power = power @ M
        raw = dehom(power)
        a = [reduce_form(f, basis) for f in raw.numerators]
        b = reduce_form(raw.denominator, basis)
        if i <= n:
            if b.is_constant():
                raise InternalContradictionError(
                    f"denominator {i} is constant modulo the earlier ones"
                )
            pivots.append(basis.add(b))
        elif b.is_zero():
            raise InternalContradictionError("last denominator reduces to zero")
        branches.append((a, b))
    return FJProgram(p, n, branches, pivots)


def coeff_width(p: int) -> int:
    """ceil(log2 p) for prime p."""
    return (p - 1).bit_length()


def payload_bits(p: int, n: int) -> int:
    return coeff_width(p) * (n + 1) ** 2 * (n + 2) // 2


@functools.lru_cache(maxsize=256)
def _payload_layout(n: int, pivots: tuple[int, ...]) -> tuple[tuple[int, int, int], ...]:
    """(branch, form, column) in storage order; form n is b, column n is the constant."""
    out = []
    for i in range(n + 1):
        skip = set(pivots[:i])
        cols = [c for c in range(n) if c not in skip] + [n]
        for form in range(n + 1):
            for col in cols:
                out.append((i, form, col))
    return tuple(out)


def serialize(program: FJProgram) -> bytes:
    p, n = program.p, program.n
    w = coeff_width(p)
    # coefficient rows per branch: a_1..a_n then b, each as (x_1..x_n, constant)
    table = [[f.var_coeffs + (f.constant,) for f in br.a + (br.b,)] for br in program.branches]
    bits = "".join(
        format(table[i][form][col], f"0{w}b") for i, form, col in _payload_layout(n, program.pivots)
    )
    nbits = payload_bits(p, n)
    nbytes = -(-nbits // 8)
    payload = int(bits.ljust(8 * nbytes, "0"), 2).to_bytes(nbytes, "big")
    p_bytes = p.to_bytes(-(-p.bit_length() // 8), "big")
    header = (
        MAGIC
        + bytes([FORMAT_VERSION, n])
        + len(p_bytes).to_bytes(2, "big")
        + p_bytes
        + bytes(program.pivots)
    )
    return header + payload


def deserialize(data: bytes) -> FJProgram:
    if len(data) < 8 or data[:4] != MAGIC:
        raise FormatError("missing FJMP magic")
    if data[4] != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {data[4]}")
    n = data[5]
    if n < 1:
        raise FormatError("dimension must be >= 1")
    plen = int.from_bytes(data[6:8], "big")
    pos = 8
    if len(data) < pos + plen + n:
        raise TruncationError("header truncated")
    p = int.from_bytes(data[pos:pos + plen], "big")
    pos += plen
    pivots = list(data[pos:pos + n])
    pos += n
    if len(set(pivots)) != n or any(v >= n for v in pivots):
        raise CorruptProgramError(f"bad pivot list {pivots}")
    try:
        GF(p)
    except InvalidModulusError as exc:
        raise FormatError(f"modulus {p} is not prime") from exc

    w = coeff_width(p)
    nbits = payload_bits(p, n)
    nbytes = -(-nbits // 8)
    payload = data[pos:]
    if len(payload) != nbytes:
        raise TruncationError(f"payload has {len(payload)} bytes, expected {nbytes}")
    bits = format(int.from_bytes(payload, "big"), f"0{8 * nbytes}b")
    if "1" in bits[nbits:]:
        raise CorruptProgramError("nonzero padding bits")

    coeffs = [[[0] * (n + 1) for _ in range(n + 1)] for _ in range(n + 1)]
    for k, (i, form, col) in enumerate(_payload_layout(n, tuple(pivots))):
        c = int(bits[k * w:(k + 1) * w], 2)
        if c >= p:
            raise RangeError(f"coefficient {c} >= p in branch {i + 1}")
        coeffs[i][form][col] = c
    branches = []
    for i in range(n + 1):
        forms = [LinearForm(p, row[:n], row[n]) for row in coeffs[i]]
        branches.append((forms[:n], forms[n]))
    return FJProgram(p, n, branches, pivots)
