from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .errors import PolynomialError
from .exact import Mat, dot, kernel_basis, rank, rref
from .poly import SparsePoly, VarSet, substitute


class LinearVariety:
    """A linear subspace of P^{n-1} cut out by linear forms.

    The forms are kept as the rows of their reduced echelon form, so two
    varieties are equal iff their rows are.
    """

    def __init__(self, variables: VarSet, rows: Iterable[Sequence[Fraction]] = ()):
        n = len(variables)
        rows = [list(r) for r in rows]
        reduced = rref(Mat.from_rows(rows, n))[0] if rows else []
        self.vars = variables
        self.rows: Tuple[Tuple[Fraction, ...], ...] = tuple(tuple(r) for r in reduced)

    @staticmethod
    def from_forms(forms: Iterable[SparsePoly], variables: VarSet = None) -> "LinearVariety":
        forms = list(forms)
        if variables is None:
            variables = forms[0].vars
        rows = []
        for form in forms:
            if form.vars != variables:
                raise PolynomialError("forms over different variable sets")
            if form.total_degree() > 1 or form.constant_term() != 0:
                raise PolynomialError(f"not a homogeneous linear form: {form}")
            coefs = form.linear_coefficients()
            rows.append([coefs.get(label, Fraction(0)) for label in variables])
        return LinearVariety(variables, rows)

    @staticmethod
    def coordinate(variables: VarSet, labels: Iterable[str]) -> "LinearVariety":
        "Lambda_J = V(x_rho : rho in J)"
        rows = []
        for label in labels:
            row = [Fraction(0)] * len(variables)
            row[variables.index(label)] = Fraction(1)
            rows.append(row)
        return LinearVariety(variables, rows)

    @property
    def forms(self) -> List[SparsePoly]:
        return [
            SparsePoly.linear(self.vars, {label: c for label, c in zip(self.vars, row)})
            for row in self.rows
        ]

    @property
    def dimension(self) -> int:
        "Projective dimension; -1 when empty"
        return len(self.vars) - 1 - len(self.rows)

    def is_empty(self) -> bool:
        return self.dimension < 0

    def sort_key(self) -> Tuple[int, Tuple[Tuple[Fraction, ...], ...]]:
        return (self.dimension, self.rows)

    def intersect(self, other: "LinearVariety") -> "LinearVariety":
        return LinearVariety(self.vars, self.rows + other.rows)

    def with_forms(self, forms: Iterable[SparsePoly]) -> "LinearVariety":
        return self.intersect(LinearVariety.from_forms(forms, self.vars))

    def is_subspace_of(self, other: "LinearVariety") -> bool:
        "self is contained in other"
        if other.vars != self.vars:
            return False
        if not other.rows:
            return True
        if not self.rows:
            return False
        base = rank(Mat.from_rows(self.rows, len(self.vars)))
        return all(
            rank(Mat.from_rows(self.rows + (row,), len(self.vars))) == base
            for row in other.rows
        )

    def basis(self) -> List[List[Fraction]]:
        "Vectors spanning the affine cone over the variety"
        n = len(self.vars)
        if not self.rows:
            return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        return kernel_basis(Mat.from_rows(self.rows, n))

    def contains_point(self, point: Sequence[Fraction]) -> bool:
        return all(dot(row, point) == 0 for row in self.rows)

    def parametrize(self) -> Tuple[VarSet, dict]:
        "x_j -> sum_i basis_i[j] t_i"
        basis = self.basis()
        ts = VarSet.numbered("t", len(basis))
        images = {}
        for j, label in enumerate(self.vars):
            images[label] = SparsePoly.linear(ts, {ts[i]: b[j] for i, b in enumerate(basis)})
        return ts, images

    def vanishes(self, p: SparsePoly) -> bool:
        "Whether p restricts to zero on the variety"
        if self.is_empty():
            return True
        ts, images = self.parametrize()
        return substitute(p, images, ts).is_zero()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LinearVariety)
            and self.vars == other.vars
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.vars, self.rows))

    def __str__(self) -> str:
        return "V(" + ", ".join(str(f) for f in self.forms) + ")"

    def __repr__(self) -> str:
        return f"LinearVariety(dim={self.dimension}, {self})"
