"""Brute-force verifiers and the benchmark harness.

Everything here is deliberately naive: orbits are walked point by point,
orders are found by repeated multiplication, and irreducibility by trial
division. These routines are the independent check on the fast paths in
``field``, ``compiler`` and ``generator``, so they must not call them for
the property being checked.
"""

from __future__ import annotations

import itertools
import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .compiler import FJProgram
from .errors import CapacityError, InvalidInputError
from .field import FpPoly
from .generator import EvalStats, ICGState, evaluate, icg_next, rank
from .projective import ProjMatrix, ProjPoint, jump_index, psi_reference

ORBIT_CAP = 1 << 24
JUMP_INDEX_CAP = 1 << 20
EQUIVALENCE_CAP = 1 << 14
PRIMITIVE_CAP = 1 << 20


@dataclass
class OrbitReport:
    orbit_length: int
    is_full_cycle: bool
    branch_histogram: list[int] = field(default_factory=list)

    def branch1_fraction(self) -> Fraction:
        return Fraction(self.branch_histogram[0], self.orbit_length)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_text(self) -> str:
        return format_report(self.to_dict())


def format_report(d: dict) -> str:
    """``key: value`` lines; lists are space-separated, booleans lowercase."""
    lines = []
    for k, v in d.items():
        if isinstance(v, bool):
            v = str(v).lower()
        elif isinstance(v, (list, tuple)):
            v = " ".join(str(x) for x in v)
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def verify_full_orbit(step, start, expected_size: int, index=None, branch_of=None) -> OrbitReport:
    """Walk ``step`` from ``start`` until a point repeats.

    ``index`` maps points into range(expected_size) for the visited bitmap;
    it defaults to the identity (integer points). ``branch_of`` (optional)
    labels each step for the histogram.
    """
    if expected_size > ORBIT_CAP:
        raise CapacityError(f"orbit size {expected_size} exceeds cap {ORBIT_CAP}")
    if index is None:
        index = int
    seen = bytearray((expected_size + 7) // 8)
    hist: dict[int, int] = {}

    def mark(pt) -> bool:
        i = index(pt)
        if not 0 <= i < expected_size:
            raise InvalidInputError(f"point {pt} indexes outside the state space")
        byte, bit = divmod(i, 8)
        if seen[byte] >> bit & 1:
            return False
        seen[byte] |= 1 << bit
        return True

    x = start
    mark(x)
    length = 0
    while True:
        if branch_of is not None:
            b = branch_of(x)
            hist[b] = hist.get(b, 0) + 1
        x = step(x)
        length += 1
        if not mark(x):
            break
    full = x == start and length == expected_size
    histogram = [hist.get(i, 0) for i in range(max(hist) + 1)] if hist else []
    return OrbitReport(length, full, histogram)


def program_orbit(program: FJProgram, start=None) -> OrbitReport:
    """Full-orbit check of a compiled program with a per-branch histogram."""
    p, n = program.p, program.n
    start = tuple(start) if start is not None else (0,) * n
    stats = EvalStats(branch_hits=[0] * (n + 1))
    report = verify_full_orbit(
        lambda x: evaluate(program, x, stats), start, p**n, index=lambda x: rank(x, p)
    )
    report.branch_histogram = list(stats.branch_hits)
    return report


def forward_orbit_length(step, start, cap: int = ORBIT_CAP) -> int:
    """Number of distinct points visited from ``start`` before the first repeat."""
    seen = {start}
    x = start
    while True:
        x = step(x)
        if x in seen:
            return len(seen)
        seen.add(x)
        if len(seen) > cap:
            raise CapacityError("forward orbit exceeds cap")


def affine_points(p: int, n: int):
    return itertools.product(range(p), repeat=n)


def absolute_jump_index(M: ProjMatrix) -> int:
    """max over the affine chart of the jump index, by direct iteration."""
    p, n = M.p, M.n
    if p**n > JUMP_INDEX_CAP:
        raise CapacityError(f"p^n = {p ** n} exceeds cap {JUMP_INDEX_CAP}")
    return max(
        jump_index(M, ProjPoint.lift(x, p), transitive=False) for x in affine_points(p, n)
    )


def equivalence_check(program: FJProgram, M: ProjMatrix) -> bool:
    """True iff the compiled program agrees with direct iteration at every point."""
    p, n = M.p, M.n
    if program.p != p or program.n != n:
        return False
    if p**n > EQUIVALENCE_CAP:
        raise CapacityError(f"p^n = {p ** n} exceeds cap {EQUIVALENCE_CAP}")
    return all(evaluate(program, x) == psi_reference(M, x) for x in affine_points(p, n))


def brute_force_irreducible(f: FpPoly) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(f)//2."""
    m = f.degree
    if m < 1:
        raise InvalidInputError("constant polynomial")
    p = f.p
    for d in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if (f % FpPoly(f.field, low + (1,))).is_zero():
                return False
    return True


def _x_power_orbit(f: FpPoly, projective: bool) -> int:
    """Multiply by x modulo monic f until the residue is 1 (or any constant); return the exponent."""
    p, m = f.p, f.degree
    neg = [(-c) % p for c in f.coeffs[:m]]
    if m == 1:
        return 1 if projective or neg[0] == 1 else _scalar_order(neg[0], p)
    r = [0] * m
    r[1] = 1
    k = 1
    bound = p**m
    rng = range(m - 1, 0, -1)
    while True:
        if (projective or r[0] == 1) and not any(r[1:]):
            return k
        top = r[-1]
        if top:
            for i in rng:
                r[i] = (r[i - 1] + top * neg[i]) % p
            r[0] = top * neg[0] % p
        else:
            r.pop()
            r.insert(0, 0)
        k += 1
        if k > bound:
            raise InvalidInputError("x is not a unit modulo f")


def _scalar_order(a: int, p: int) -> int:
    k, v = 1, a
    while v != 1:
        v = v * a % p
        k += 1
    return k


def _check_oracle_input(f: FpPoly):
    if not f.is_monic():
        raise InvalidInputError("polynomial must be monic")
    if f.p**f.degree > PRIMITIVE_CAP:
        raise CapacityError(f"p^m = {f.p ** f.degree} exceeds cap {PRIMITIVE_CAP}")
    if not brute_force_irreducible(f) or f[0] == 0:
        raise InvalidInputError(f"{f} is reducible")


def brute_force_root_order(f: FpPoly) -> int:
    """Multiplicative order of x in F_p[x]/(f) by repeated multiplication."""
    _check_oracle_input(f)
    return _x_power_orbit(f, projective=False)


def brute_force_projective_order(f: FpPoly) -> int:
    """Smallest k with x^k in F_p^* modulo f, the order of [x] in F_{p^m}^*/F_p^*."""
    _check_oracle_input(f)
    return _x_power_orbit(f, projective=True)


def brute_force_primitive(f: FpPoly) -> bool:
    return brute_force_root_order(f) == f.p**f.degree - 1


def brute_force_projectively_primitive(f: FpPoly) -> bool:
    if f.degree < 1 or not brute_force_irreducible(f) or f[0] == 0:
        return False
    p, m = f.p, f.degree
    return brute_force_projective_order(f) == (p**m - 1) // (p - 1)


@dataclass
class BenchReport:
    p: int
    n: int
    iterations: int
    runs: int
    fj_ns_per_vector: float
    fj_ns_per_coordinate: float
    icg_ns_per_element: float
    fj_inversions: int
    fj_coordinates: int
    icg_inversions: int
    icg_elements: int
    branch1_fraction: float

    @property
    def fj_inversions_per_coordinate(self) -> Fraction:
        return Fraction(self.fj_inversions, self.fj_coordinates)

    @property
    def icg_inversions_per_element(self) -> Fraction:
        return Fraction(self.icg_inversions, self.icg_elements)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fj_inversions_per_coordinate"] = str(self.fj_inversions_per_coordinate)
        d["icg_inversions_per_element"] = str(self.icg_inversions_per_element)
        return d

    def to_text(self) -> str:
        return format_report(self.to_dict())

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _median_ns(fn, runs: int, iterations: int) -> float:
    samples = []
    for _ in range(runs):
        t0 = time.perf_counter_ns()
        fn()
        samples.append((time.perf_counter_ns() - t0) / iterations)
    return statistics.median(samples)


def bench(program: FJProgram, icg_params=(1, 1), iterations: int = 10_000, runs: int = 5,
          start=None) -> BenchReport:
    """Time FJ against an ICG over the same prime; counters come from a separate pass."""
    if iterations < 10_000:
        raise InvalidInputError("bench needs at least 10^4 iterations")
    p, n = program.p, program.n
    a, b = icg_params
    start = tuple(start) if start is not None else (1,) * n

    def fj_run():
        x = start
        for _ in range(iterations):
            x = evaluate(program, x)

    icg = ICGState(p, a, b, 1)

    def icg_run():
        for _ in range(iterations):
            icg_next(icg)

    fj_run()  # warmup
    icg_run()
    fj_ns = _median_ns(fj_run, runs, iterations)
    icg_ns = _median_ns(icg_run, runs, iterations)

    fj_stats = EvalStats(branch_hits=[0] * (n + 1))
    x = start
    for _ in range(iterations):
        x = evaluate(program, x, fj_stats)
    icg_stats = EvalStats()
    counted = ICGState(p, a, b, 1, stats=icg_stats)
    for _ in range(iterations):
        icg_next(counted)

    return BenchReport(
        p=p,
        n=n,
        iterations=iterations,
        runs=runs,
        fj_ns_per_vector=fj_ns,
        fj_ns_per_coordinate=fj_ns / n,
        icg_ns_per_element=icg_ns,
        fj_inversions=fj_stats.inversions,
        fj_coordinates=iterations * n,
        icg_inversions=icg_stats.inversions,
        icg_elements=icg_stats.evaluations,
        branch1_fraction=fj_stats.branch_hits[0] / iterations,
    )
