"""Invertible matrices over F_p acting on projective space P^n.

Points are canonicalized so the last nonzero coordinate is 1; the affine
chart U is then "last coordinate == 1" and the hyperplane H at infinity is
"last coordinate == 0". Coordinates are numbered 1..n+1 in docstrings and
0..n in code.
"""

from __future__ import annotations

from dataclasses import dataclass
from operator import mul

from .arith import FactoredInteger
from .errors import InternalContradictionError, InvalidInputError
from .field import GF, FpPoly, PrimeField, is_projectively_primitive


def canonical(coords, p: int) -> tuple[int, ...]:
    """Scale a nonzero vector so its last nonzero entry is 1."""
    coords = [c % p for c in coords]
    for c in reversed(coords):
        if c:
            inv = pow(c, -1, p)
            return tuple(x * inv % p for x in coords)
    raise InvalidInputError("the zero vector is not a projective point")


@dataclass(frozen=True)
class ProjPoint:
    p: int
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", canonical(self.coords, self.p))

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def in_affine_chart(self) -> bool:
        return self.coords[-1] == 1

    @classmethod
    def lift(cls, x, p: int) -> "ProjPoint":
        """pi: affine point (x_1..x_n) -> [x_1 : ... : x_n : 1]."""
        return cls(p, tuple(x) + (1,))

    def dehomogenize(self) -> tuple[int, ...]:
        if not self.in_affine_chart():
            raise InvalidInputError(f"{self.coords} lies on the hyperplane at infinity")
        return self.coords[:-1]


def _det_mod(rows, p: int) -> int:
    a = [list(r) for r in rows]
    size = len(a)
    det = 1
    for col in range(size):
        piv = next((r for r in range(col, size) if a[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col] % p
        inv = pow(a[col][col], -1, p)
        for r in range(col + 1, size):
            t = a[r][col] * inv % p
            if t:
                a[r] = [(x - t * y) % p for x, y in zip(a[r], a[col])]
    return det % p


class ProjMatrix:
    """(n+1)x(n+1) invertible matrix over F_p, standing for its class in PGL."""

    __slots__ = ("field", "n", "rows")

    def __init__(self, field: PrimeField | int, rows, check: bool = True):
        if isinstance(field, int):
            field = GF(field)
        p = field.p
        rows = tuple(tuple(int(v) % p for v in row) for row in rows)
        size = len(rows)
        if size < 2 or any(len(r) != size for r in rows):
            raise InvalidInputError("need a square matrix of size >= 2")
        if check and _det_mod(rows, p) == 0:
            raise InvalidInputError("matrix is singular")
        self.field = field
        self.n = size - 1
        self.rows = rows

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def size(self) -> int:
        return self.n + 1

    @classmethod
    def identity(cls, field, n: int) -> "ProjMatrix":
        size = n + 1
        return cls(field, [[int(i == j) for j in range(size)] for i in range(size)], check=False)

    def __eq__(self, other):
        if not isinstance(other, ProjMatrix):
            return NotImplemented
        return self.p == other.p and self.rows == other.rows

    def __hash__(self):
        return hash((self.p, self.rows))

    def __matmul__(self, other: "ProjMatrix") -> "ProjMatrix":
        p = self.p
        cols = list(zip(*other.rows))
        rows = [[sum(a * b for a, b in zip(r, c)) % p for c in cols] for r in self.rows]
        return ProjMatrix(self.field, rows, check=False)

    def __pow__(self, k: int) -> "ProjMatrix":
        if k < 0:
            raise InvalidInputError("negative matrix power")
        result = ProjMatrix.identity(self.field, self.n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def scale(self, c: int) -> "ProjMatrix":
        if c % self.p == 0:
            raise InvalidInputError("scale must be nonzero")
        return ProjMatrix(self.field, [[c * v for v in r] for r in self.rows], check=False)

    def det(self) -> int:
        return _det_mod(self.rows, self.p)

    def mul_vec(self, v) -> tuple[int, ...]:
        p = self.field.p
        return tuple(sum(map(mul, r, v)) % p for r in self.rows)

    def projectively_equal(self, other: "ProjMatrix") -> bool:
        """[self] == [other] in PGL, i.e. other = c * self for a nonzero c."""
        if self.p != other.p or self.n != other.n:
            return False
        flat_a = [v for r in self.rows for v in r]
        flat_b = [v for r in other.rows for v in r]
        k = next(i for i, v in enumerate(flat_a) if v)
        if not flat_b[k]:
            return False
        c = flat_b[k] * pow(flat_a[k], -1, self.p) % self.p
        return all(c * a % self.p == b for a, b in zip(flat_a, flat_b))

    def to_text(self) -> str:
        return ";".join(",".join(str(v) for v in r) for r in self.rows)

    def __repr__(self):
        return f"ProjMatrix({self.p}, {[list(r) for r in self.rows]})"


def parse_matrix(text: str, field: PrimeField | int) -> ProjMatrix:
    """Parse ``"0,0,3;4,0,3;0,4,0"`` (rows separated by semicolons)."""
    try:
        rows = [[int(v) for v in row.split(",")] for row in text.replace(" ", "").split(";")]
    except ValueError as exc:
        raise InvalidInputError(f"bad matrix text {text!r}") from exc
    return ProjMatrix(field, rows)


def companion_matrix(f: FpPoly) -> ProjMatrix:
    """Companion matrix: ones on the subdiagonal, last column -c_0..-c_n."""
    if not f.is_monic():
        raise InvalidInputError("companion matrix needs a monic polynomial")
    size = f.degree
    if size < 2:
        raise InvalidInputError("companion matrix needs degree >= 2")
    rows = [[0] * size for _ in range(size)]
    for i in range(1, size):
        rows[i][i - 1] = 1
    for i in range(size):
        rows[i][size - 1] = -f[i]
    return ProjMatrix(f.field, rows)


def char_poly(M: ProjMatrix) -> FpPoly:
    """det(xI - M) via similarity reduction to upper Hessenberg form."""
    p = M.p
    size = M.size
    h = [list(r) for r in M.rows]
    for j in range(size - 2):
        piv = next((i for i in range(j + 1, size) if h[i][j]), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for row in h:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        inv = pow(h[j + 1][j], -1, p)
        for k in range(j + 2, size):
            t = h[k][j] * inv % p
            if not t:
                continue
            h[k] = [(a - t * b) % p for a, b in zip(h[k], h[j + 1])]
            for row in h:
                row[j + 1] = (row[j + 1] + t * row[k]) % p

    x = FpPoly.x(M.field)
    polys = [FpPoly(M.field, (1,))]
    for k in range(1, size + 1):
        pk = (x - h[k - 1][k - 1]) * polys[k - 1]
        t = 1
        for i in range(k - 1, 0, -1):
            t = t * h[i][i - 1] % p
            pk = pk - polys[i - 1] * (t * h[i - 1][k - 1])
        polys.append(pk)
    return polys[size]


def is_transitive(M: ProjMatrix, hint: FactoredInteger | None = None) -> bool:
    """[M] acts transitively on P^n iff its characteristic polynomial is projectively primitive."""
    return is_projectively_primitive(char_poly(M), hint)


def apply_map(M: ProjMatrix, P: ProjPoint) -> ProjPoint:
    return ProjPoint(M.p, M.mul_vec(P.coords))


class LinearForm:
    """c_1 x_1 + ... + c_n x_n + constant over F_p."""

    __slots__ = ("p", "var_coeffs", "constant")

    def __init__(self, p: int, var_coeffs, constant: int = 0):
        self.p = p
        self.var_coeffs = tuple(int(c) % p for c in var_coeffs)
        self.constant = int(constant) % p

    @property
    def n(self) -> int:
        return len(self.var_coeffs)

    def __call__(self, x) -> int:
        acc = self.constant
        for c, xi in zip(self.var_coeffs, x):
            acc += c * xi
        return acc % self.p

    def is_zero(self) -> bool:
        return self.constant == 0 and not any(self.var_coeffs)

    def is_constant(self) -> bool:
        return not any(self.var_coeffs)

    def leftmost_variable(self) -> int | None:
        """0-based index of the first nonzero variable coefficient."""
        return next((i for i, c in enumerate(self.var_coeffs) if c), None)

    def scaled(self, c: int) -> "LinearForm":
        return LinearForm(self.p, (c * v for v in self.var_coeffs), c * self.constant)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(
            self.p,
            (a - b for a, b in zip(self.var_coeffs, other.var_coeffs)),
            self.constant - other.constant,
        )

    def coefficients(self) -> tuple[int, ...]:
        return self.var_coeffs + (self.constant,)

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.p == other.p and self.coefficients() == other.coefficients()

    def __hash__(self):
        return hash((self.p, self.coefficients()))

    def __repr__(self):
        terms = [f"{c}*x{i + 1}" for i, c in enumerate(self.var_coeffs) if c]
        if self.constant or not terms:
            terms.append(str(self.constant))
        return " + ".join(terms)

    @classmethod
    def from_row(cls, p: int, row) -> "LinearForm":
        """Row (m_1, ..., m_n, m_{n+1}) -> m_1 x_1 + ... + m_n x_n + m_{n+1}."""
        return cls(p, row[:-1], row[-1])


@dataclass(frozen=True)
class RationalTuple:
    """n numerators sharing one denominator, all linear forms."""

    numerators: tuple[LinearForm, ...]
    denominator: LinearForm

    def __call__(self, x) -> tuple[int, ...] | None:
        """Evaluate at an affine point; None where the denominator vanishes."""
        d = self.denominator(x)
        if d == 0:
            return None
        p = self.denominator.p
        inv = pow(d, -1, p)
        return tuple(a(x) * inv % p for a in self.numerators)


def dehom(M: ProjMatrix) -> RationalTuple:
    """Read rows 1..n as numerators and row n+1 as the common denominator."""
    p = M.p
    forms = [LinearForm.from_row(p, row) for row in M.rows]
    return RationalTuple(tuple(forms[:-1]), forms[-1])


def jump_index(M: ProjMatrix, P: ProjPoint, transitive: bool = True) -> int:
    """Smallest k >= 1 with M^k P back in the affine chart.

    With ``transitive=True`` the caller vouches for transitivity and a
    result above n+1 raises InternalContradictionError.
    """
    if not P.in_affine_chart():
        raise InvalidInputError(f"{P.coords} is not in the affine chart")
    p = M.p
    v = P.coords
    k = 0
    while True:
        v = M.mul_vec(v)
        k += 1
        if v[-1] % p:
            break
        if transitive and k > M.n:
            raise InternalContradictionError(
                f"jump index exceeds n+1 = {M.n + 1} at {P.coords}"
            )
    return k


def psi_reference(M: ProjMatrix, x) -> tuple[int, ...]:
    """Fractional jump by direct iteration: lift, apply M until back in U, dehomogenize."""
    p = M.p
    v = tuple(c % p for c in x) + (1,)
    while True:
        v = M.mul_vec(v)
        if v[-1]:
            inv = pow(v[-1], -1, p)
            return tuple(c * inv % p for c in v[:-1])
