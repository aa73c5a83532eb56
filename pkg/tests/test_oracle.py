import itertools
import json
from fractions import Fraction

import pytest

from fracjump.compiler import compile_program
from fracjump.errors import CapacityError, InvalidInputError
from fracjump.field import FpPoly, is_irreducible, is_projectively_primitive, parse_poly
from fracjump.oracle import (
    OrbitReport,
    absolute_jump_index,
    bench,
    brute_force_irreducible,
    brute_force_primitive,
    brute_force_projective_order,
    brute_force_projectively_primitive,
    brute_force_root_order,
    equivalence_check,
    format_report,
    forward_orbit_length,
    program_orbit,
    verify_full_orbit,
)
from fracjump.plotting import plot_bench, plot_branch_histogram
from fracjump.projective import ProjMatrix

from conftest import transitive_companions


def monic_polys(p, m):
    for low in itertools.product(range(p), repeat=m):
        yield FpPoly(p, low + (1,))


# -- orbit walking --------------------------------------------------------------

def test_verify_full_orbit_on_integers():
    r = verify_full_orbit(lambda x: (x + 3) % 10, 0, 10)
    assert (r.orbit_length, r.is_full_cycle) == (10, True)
    r = verify_full_orbit(lambda x: (x + 2) % 10, 0, 10)
    assert (r.orbit_length, r.is_full_cycle) == (5, False)


def test_verify_full_orbit_rho_shape():
    # 0 -> 1 -> 2 -> 1: never returns to the start
    r = verify_full_orbit(lambda x: 1 if x != 1 else 2, 0, 3)
    assert not r.is_full_cycle


def test_verify_full_orbit_errors():
    with pytest.raises(InvalidInputError):
        verify_full_orbit(lambda x: x + 1, 0, 4)
    with pytest.raises(CapacityError):
        verify_full_orbit(lambda x: x, 0, (1 << 24) + 1)


def test_program_orbit_golden(f5_program, f3_program):
    r = program_orbit(f5_program)
    assert (r.orbit_length, r.is_full_cycle, r.branch_histogram) == (25, True, [20, 4, 1])
    assert r.branch1_fraction() == Fraction(4, 5)
    r = program_orbit(f3_program, (1, 2))
    assert (r.orbit_length, r.is_full_cycle, r.branch_histogram) == (9, True, [6, 2, 1])


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_branch_histogram_sizes(p, n):
    expected = [p ** (n - i + 1) - p ** (n - i) for i in range(1, n + 1)] + [1]
    for M in transitive_companions(p, n):
        r = program_orbit(compile_program(M))
        assert r.is_full_cycle and r.branch_histogram == expected
        assert r.branch1_fraction() == 1 - Fraction(1, p)


def test_forward_orbit_length():
    assert forward_orbit_length(lambda x: (x + 1) % 7, 0) == 7
    assert forward_orbit_length(lambda x: min(x + 1, 4), 0) == 5
    with pytest.raises(CapacityError):
        forward_orbit_length(lambda x: x + 1, 0, cap=10)


def test_report_formatting():
    r = OrbitReport(25, True, [20, 4, 1])
    assert r.to_text() == "orbit_length: 25\nis_full_cycle: true\nbranch_histogram: 20 4 1\n"
    assert format_report({"a": False, "b": (1, 2)}) == "a: false\nb: 1 2\n"


# -- jump index and equivalence -------------------------------------------------

def test_absolute_jump_index(f5_matrix):
    assert absolute_jump_index(f5_matrix) == 3
    assert absolute_jump_index(ProjMatrix(5, [[1, 1], [0, 1]])) == 1


def test_equivalence_check(f5_matrix, f5_program, f3_program):
    assert equivalence_check(f5_program, f5_matrix)
    assert not equivalence_check(f3_program, f5_matrix)
    other = transitive_companions(5, 2)[1]
    assert not equivalence_check(compile_program(other), f5_matrix)


# -- polynomial oracles -----------------------------------------------------------

@pytest.mark.parametrize("p,m", [(2, 4), (3, 3), (5, 3), (7, 2)])
def test_brute_force_irreducible_agrees(p, m):
    for f in monic_polys(p, m):
        assert brute_force_irreducible(f) == is_irreducible(f)


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (3, 4),
                                 (5, 2), (5, 3), (7, 2), (7, 3), (11, 2)])
def test_brute_force_projectively_primitive_agrees(p, m):
    for f in monic_polys(p, m):
        assert brute_force_projectively_primitive(f) == is_projectively_primitive(f), str(f)


def test_root_orders():
    f = parse_poly("x^3+3*x+3", 5)
    assert brute_force_projective_order(f) == 31
    assert brute_force_root_order(f) in (31, 62, 124)
    assert brute_force_primitive(parse_poly("x^3+x+1", 2))
    assert not brute_force_primitive(parse_poly("x^2+1", 3))
    # degree 1: x is the root -a of x + a
    assert brute_force_root_order(parse_poly("x+4", 5)) == 1
    assert brute_force_root_order(parse_poly("x+3", 5)) == 4
    assert brute_force_root_order(parse_poly("x+1", 5)) == 2


def test_oracle_input_checks():
    with pytest.raises(InvalidInputError):
        brute_force_root_order(FpPoly(5, (3, 3, 0, 2)))
    with pytest.raises(InvalidInputError):
        brute_force_root_order(parse_poly("x^2+4", 5))
    with pytest.raises(CapacityError):
        brute_force_root_order(parse_poly("x^3+x+1", 1009))
    assert not brute_force_projectively_primitive(parse_poly("x^2", 5))


# -- bench ------------------------------------------------------------------------

def test_bench_counters(f5_program):
    rep = bench(f5_program, iterations=10_000, runs=1)
    assert rep.fj_inversions == 10_000 and rep.fj_coordinates == 20_000
    assert rep.fj_inversions_per_coordinate == Fraction(1, 2)
    assert rep.icg_inversions_per_element == 1
    assert rep.fj_ns_per_vector > 0 and rep.icg_ns_per_element > 0
    d = json.loads(rep.to_json())
    assert d["fj_inversions_per_coordinate"] == "1/2"
    assert "icg_ns_per_element: " in rep.to_text()
    with pytest.raises(InvalidInputError):
        bench(f5_program, iterations=100)


def test_bench_branch_fraction_over_whole_periods(f5_program):
    rep = bench(f5_program, iterations=25 * 400, runs=1)
    assert rep.branch1_fraction == 0.8


# -- figures ------------------------------------------------------------------------

def test_plots_written(tmp_path, f5_program):
    out = plot_branch_histogram(program_orbit(f5_program), tmp_path / "h.png", 5, 2)
    assert out.stat().st_size > 1000
    out = plot_bench(bench(f5_program, runs=1), tmp_path / "b.png")
    assert out.stat().st_size > 1000
