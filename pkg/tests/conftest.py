import pytest

from fracjump.compiler import compile_program
from fracjump.field import GF, iter_projectively_primitive, parse_poly
from fracjump.projective import companion_matrix, parse_matrix

# matrices as printed in the worked example (negated companion convention)
PRINTED_F5_MATRIX = "0,0,3;-1,0,3;0,-1,0"
PRINTED_F3_MATRIX = "0,0,1;-1,0,2;0,-1,0"
BIG_P = 38685626227668133590597803

# PASS/FAIL lines appended by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def inv(v, p):
    return pow(v % p, -1, p)


def psi1(x):
    """Printed fractional jump over F_5."""
    x1, x2 = x
    if x2 % 5:
        return (2 * inv(x2, 5) % 5, (x1 - 3) * inv(x2, 5) % 5)
    if x1 != 3:
        return (0, 2 * inv(x1 + 2, 5) % 5)
    return (0, 0)


def psi2(x):
    """Printed fractional jump over F_3."""
    x1, x2 = x
    if x2 % 3:
        return (-inv(x2, 3) % 3, (x1 - 2) * inv(x2, 3) % 3)
    if x1 != 2:
        return (0, -inv(x1 + 1, 3) % 3)
    return (0, 0)


@pytest.fixture(scope="session")
def f5_poly():
    return parse_poly("x^3+3*x+3", 5)


@pytest.fixture(scope="session")
def f3_poly():
    return parse_poly("x^3+2*x+1", 3)


@pytest.fixture(scope="session")
def f5_matrix():
    return parse_matrix(PRINTED_F5_MATRIX, GF(5))


@pytest.fixture(scope="session")
def f3_matrix():
    return parse_matrix(PRINTED_F3_MATRIX, GF(3))


@pytest.fixture(scope="session")
def f5_program(f5_poly):
    return compile_program(companion_matrix(f5_poly))


@pytest.fixture(scope="session")
def f3_program(f3_poly):
    return compile_program(companion_matrix(f3_poly))


def transitive_companions(p, n):
    """Companion matrices of every projectively primitive polynomial of degree n+1."""
    return [companion_matrix(f) for f in iter_projectively_primitive(p, n + 1)]
