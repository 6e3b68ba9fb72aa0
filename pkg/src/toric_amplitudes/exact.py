"""Exact rational scalars and dense linear algebra.

Everything here works over ``fractions.Fraction``; floats never enter.
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, List, Optional, Sequence, Tuple

from .errors import DimensionError, ParseError

Rat = Fraction
Vector = List[Fraction]

RAT_RE = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


def parse_rat(value: Any) -> Fraction:
    "Accepts ints and 'p' / 'p/q' strings; floats are rejected"
    if isinstance(value, bool):
        raise ParseError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str) and RAT_RE.match(value):
        num, _, den = value.replace(" ", "").partition("/")
        if den and int(den) == 0:
            raise ParseError(f"zero denominator in {value!r}")
        return Fraction(int(num), int(den) if den else 1)
    raise ParseError(f"not a rational number: {value!r}")


def format_rat(r: Fraction) -> str:
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


@dataclass(frozen=True)
class Mat:
    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Any]], cols: Optional[int] = None) -> "Mat":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise DimensionError(f"row of length {len(row)}, expected {cols}")
        return Mat(len(rows), cols, tuple(Fraction(x) for row in rows for x in row))

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij: Tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "Mat":
        return Mat.from_rows([list(self.column(j)) for j in range(self.cols)], self.rows)

    def submatrix(
        self, row_indices: Sequence[int], col_indices: Optional[Sequence[int]] = None
    ) -> "Mat":
        if col_indices is None:
            col_indices = range(self.cols)
        cols = list(col_indices)
        return Mat.from_rows([[self[i, j] for j in cols] for i in row_indices], len(cols))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise DimensionError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        columns = [other.column(j) for j in range(other.cols)]
        return Mat.from_rows(
            [[dot(self.row(i), c) for c in columns] for i in range(self.rows)],
            other.cols,
        )

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for {self.cols} columns")
        return [dot(self.row(i), v) for i in range(self.rows)]

    def __str__(self) -> str:
        return "\n".join(
            "[" + ", ".join(format_rat(x) for x in self.row(i)) + "]"
            for i in range(self.rows)
        )


def det(m: Mat) -> Fraction:
    "Bareiss fraction-free elimination"
    if not m.is_square:
        raise DimensionError(f"determinant of a {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    a = m.to_rows()
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(m: Mat) -> int:
    a = m.to_rows()
    r = 0
    prev = Fraction(1)
    for c in range(m.cols):
        pivot = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for i in range(r + 1, m.rows):
            for j in range(c + 1, m.cols):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev
            a[i][c] = Fraction(0)
        prev = a[r][c]
        r += 1
        if r == m.rows:
            break
    return r


def rref(m: Mat) -> Tuple[List[List[Fraction]], List[int]]:
    "Reduced row echelon form; returns the nonzero rows and their pivot columns"
    a = m.to_rows()
    pivots: List[int] = []
    r = 0
    for c in range(m.cols):
        pivot = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return a[:r], pivots


def kernel_basis(m: Mat) -> List[Vector]:
    reduced, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    vectors = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        vectors.append(v)
    if not vectors:
        return []
    # normal form: the reduced echelon basis of the same space
    basis, _ = rref(Mat.from_rows(vectors, m.cols))
    return basis


def solve(m: Mat, b: Sequence[Fraction]) -> Optional[Vector]:
    if len(b) != m.rows:
        raise DimensionError(f"right-hand side of length {len(b)} for {m.rows} rows")
    augmented = Mat.from_rows(
        [list(m.row(i)) + [b[i]] for i in range(m.rows)], m.cols + 1
    )
    reduced, pivots = rref(augmented)
    if m.cols in pivots:
        return None
    x = [Fraction(0)] * m.cols
    for row, p in zip(reduced, pivots):
        x[p] = row[m.cols]
    return x


def inverse(m: Mat) -> Mat:
    if not m.is_square:
        raise DimensionError(f"inverse of a {m.rows}x{m.cols} matrix")
    n = m.rows
    augmented = Mat.from_rows(
        [list(m.row(i)) + [int(i == j) for j in range(n)] for i in range(n)], 2 * n
    )
    reduced, pivots = rref(augmented)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise DimensionError("matrix is singular")
    return Mat.from_rows([row[n:] for row in reduced], n)


def span_coordinates(
    vectors: Sequence[Sequence[Fraction]],
) -> Tuple[List[List[Fraction]], List[Vector]]:
    """Basis of the span of ``vectors`` and each vector's coordinates in it."""
    dim = len(vectors[0])
    basis, _ = rref(Mat.from_rows([list(v) for v in vectors], dim))
    if not basis:
        return [], [[] for _ in vectors]
    transposed = Mat.from_rows(basis, dim).transpose()
    return basis, [solve(transposed, list(v)) for v in vectors]  # type: ignore


def in_cone(target: Sequence[Fraction], generators: Sequence[Sequence[Fraction]]) -> bool:
    """Whether ``target`` is a nonnegative combination of ``generators``.

    Exact Caratheodory search: a cone point is a nonnegative combination of
    linearly independent generators, so it is enough to try every independent
    subset of the span's dimension or less.
    """
    if all(t == 0 for t in target):
        return True
    gens = [list(g) for g in generators if any(x != 0 for x in g)]
    if not gens:
        return False
    coords = span_coordinates(gens + [list(target)])[1]
    t = coords[-1]
    if t is None:
        return False
    g = coords[:-1]
    r = len(t)
    for k in range(1, r + 1):
        for subset in combinations(range(len(g)), k):
            cols = Mat.from_rows([g[i] for i in subset], r).transpose()
            if rank(cols) < k:
                continue
            lam = solve(cols, t)
            if lam is not None and all(x >= 0 for x in lam):
                return True
    return False


def has_nonneg_dependency(vectors: Sequence[Sequence[Fraction]]) -> bool:
    "Whether some nonzero lambda >= 0 has sum(lambda_i * v_i) = 0"
    for i, v in enumerate(vectors):
        if all(x == 0 for x in v):
            return True
        others = [w for j, w in enumerate(vectors) if j != i]
        if others and in_cone([-x for x in v], others):
            return True
    return False


def positively_spans(vectors: Sequence[Sequence[Fraction]], dim: int) -> bool:
    for j in range(dim):
        for s in (1, -1):
            e = [Fraction(s if i == j else 0) for i in range(dim)]
            if not in_cone(e, vectors):
                return False
    return True


def integer_kernel_basis(m: Mat) -> List[List[int]]:
    """Z-basis of the integer kernel lattice {v : m v = 0} of an integer matrix.

    Unimodular row operations on [m^T | I]; rows whose left block vanishes
    carry the lattice basis in their right block.
    """
    if any(x.denominator != 1 for x in m.entries):
        raise DimensionError("integer kernel of a non-integer matrix")
    k = m.cols
    rows = [
        [int(x) for x in m.column(i)] + [int(i == j) for j in range(k)]
        for i in range(k)
    ]
    lead = 0
    for col in range(m.rows):
        while True:
            nonzero = [i for i in range(lead, k) if rows[i][col] != 0]
            if not nonzero:
                break
            piv = min(nonzero, key=lambda i: abs(rows[i][col]))
            rows[lead], rows[piv] = rows[piv], rows[lead]
            reduced = True
            for i in range(lead + 1, k):
                if rows[i][col] != 0:
                    q = rows[i][col] // rows[lead][col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[lead])]
                    if rows[i][col] != 0:
                        reduced = False
            if reduced:
                lead += 1
                break
        if lead == k:
            break
    return [row[m.rows:] for row in rows[lead:]]
