"""Deformations of a simple polytope inside its deformation cone.

Each positive-dimensional simplex face Delta carries a wall form W_Delta:
the determinant of [U_rho | x_rho] over the rays nb(Delta) and the facets
containing Delta. Def(Sigma) is cut out by the signed edge walls.
"""
import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .amplitude import WarrenPoly, adjoint, warren_adjoint, y_variables
from .errors import ConsistencyError, DimensionError, NotASimplexError, WallNotActiveError
from .exact import Mat, det, in_cone, kernel_basis, solve
from .linear_variety import LinearVariety
from .poly import LinForm, SparsePoly, VarSet, divide_linear, substitute
from .polytope import (
    FaceRef,
    HPolytope,
    faces,
    facets_of,
    is_bounded,
    is_simplex_face,
    normal_fan,
    require_irredundant,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WallForm:
    face: FaceRef
    sigma: Tuple[int, ...]
    nb: Tuple[int, ...]
    form: LinForm
    sign: int
    kset: Tuple[int, ...]

    def signed(self) -> LinForm:
        return self.form * self.sign

    def value(self, x: Sequence[Fraction]) -> Fraction:
        "sign * W(x); nonnegative on Def(Sigma)"
        return self.sign * self.form.evaluate(x)

    def __str__(self) -> str:
        return f"{self.face}: {self.signed()} >= 0"


class Status(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class ConeMembership:
    status: Status
    walls: Tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.status is Status.INTERIOR:
            return self.status.value
        listed = ", ".join(str(i + 1) for i in self.walls)
        label = "active" if self.status is Status.BOUNDARY else "violated"
        return f"{self.status.value} ({label} walls: {listed})"


@dataclass(frozen=True)
class LinearSplit:
    facet: int
    factor: LinForm
    quotient: SparsePoly


@dataclass(frozen=True)
class DegenerationReport:
    face: FaceRef
    z0: Tuple[Fraction, ...]
    degenerate: bool
    adjoint: Optional[WarrenPoly] = None
    lost_facets: Tuple[int, ...] = ()
    splits: Tuple[LinearSplit, ...] = ()
    vertex: Optional[Tuple[Fraction, ...]] = None

    def __str__(self) -> str:
        if not self.degenerate:
            return "no degeneration"
        lines = [f"adjoint: {self.adjoint}"]
        if self.lost_facets:
            lines.append("lost facets: " + ", ".join(str(q + 1) for q in self.lost_facets))
            for s in self.splits:
                lines.append(f"  facet {s.facet + 1}: ({s.factor}) * ({s.quotient})")
        if self.vertex is not None:
            coords = ", ".join(str(c) for c in self.vertex)
            lines.append(f"vanishes at v = ({coords})")
        return "\n".join(lines)


def _simplex_face(p: HPolytope, face: FaceRef) -> None:
    if face.dim <= 0:
        raise NotASimplexError(f"face {face} is a vertex; walls need a positive-dimensional face")
    if not is_simplex_face(p, face):
        raise NotASimplexError(f"face {face} is not a simplex")


def wall_form(p: HPolytope, face: FaceRef) -> WallForm:
    require_irredundant(p)
    _simplex_face(p, face)
    fan = normal_fan(p)
    sigma = tuple(sorted(face.facets))
    nb = tuple(fan.neighbours(sigma))
    rows = list(nb) + list(sigma)
    d = p.d
    if len(rows) != d + 1:
        raise ConsistencyError(f"face {face} has {len(nb)} neighbours, expected {face.dim + 1}")
    coefs = {}
    for i, r in enumerate(rows):
        minor = Mat.from_rows([list(p.U.row(q)) for j, q in enumerate(rows) if j != i], d)
        coefs[fan.labels[r]] = (-1) ** (i + d) * det(minor)
    signs = {c > 0 for label, c in coefs.items() if label in fan.label_set(nb)}
    if len(signs) != 1 or any(coefs[fan.labels[r]] == 0 for r in nb):
        raise ConsistencyError(f"neighbour coefficients of W at {face} do not share a sign")
    sign = 1 if signs.pop() else -1
    kset = tuple(r for r in range(fan.n) if r not in rows)
    form = SparsePoly.linear(fan.variables, coefs)
    return WallForm(face, sigma, nb, form, sign, kset)


def deformation_cone(p: HPolytope) -> List[WallForm]:
    "One signed wall per edge"
    walls = [wall_form(p, edge) for edge in faces(p, 1)]
    logger.info("%d edge walls", len(walls))
    return walls


def membership(walls: Sequence[WallForm], x: Sequence[Fraction]) -> ConeMembership:
    values = [w.value(x) for w in walls]
    violated = tuple(i for i, v in enumerate(values) if v < 0)
    if violated:
        return ConeMembership(Status.OUTSIDE, violated)
    active = tuple(i for i, v in enumerate(values) if v == 0)
    if active:
        return ConeMembership(Status.BOUNDARY, active)
    return ConeMembership(Status.INTERIOR)


def _coefficients(w: WallForm) -> List[Fraction]:
    coefs = w.signed().linear_coefficients()
    return [coefs.get(label, Fraction(0)) for label in w.form.vars]


def _positive_multiple(a: Sequence[Fraction], b: Sequence[Fraction]) -> bool:
    ratio = None
    for x, y in zip(a, b):
        if (x == 0) != (y == 0):
            return False
        if x != 0:
            r = x / y
            if r <= 0 or (ratio is not None and r != ratio):
                return False
            ratio = r
    return True


def facet_defining(walls: Sequence[WallForm]) -> List[bool]:
    """Which walls cut out facets of Def(Sigma).

    A wall is redundant iff its signed form is a nonnegative combination of
    the other walls, parallel copies excluded.
    """
    vectors = [_coefficients(w) for w in walls]
    result = []
    for i, v in enumerate(vectors):
        others = [u for j, u in enumerate(vectors) if j != i and not _positive_multiple(u, v)]
        result.append(not in_cone(v, others))
    return result


def chamber_space(p: HPolytope, face: FaceRef) -> LinearVariety:
    "V(W_Delta, x_rho for rho in sigma_Delta)"
    wall = wall_form(p, face)
    fan = normal_fan(p)
    space = LinearVariety.coordinate(fan.variables, fan.label_set(wall.sigma)).with_forms([wall.form])
    if not space.vanishes(adjoint(fan)):
        raise ConsistencyError(f"adjoint does not vanish on the chamber space of {face}")
    return space


def chamber_spaces(p: HPolytope) -> List[Tuple[FaceRef, LinearVariety]]:
    found = []
    for k in range(1, p.d + 1):
        for face in faces(p, k):
            if is_simplex_face(p, face):
                found.append((face, chamber_space(p, face)))
    return found


def shrink_vertex(p: HPolytope, face: FaceRef, x: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    "The point where all facets of nb(Delta) and sigma_Delta meet once W_Delta(x) = 0"
    if len(x) != p.n:
        raise DimensionError(f"x has length {len(x)}, expected {p.n}")
    x = [Fraction(v) for v in x]
    wall = wall_form(p, face)
    if wall.form.evaluate(x) != 0:
        raise WallNotActiveError(f"W at face {face} is {wall.form.evaluate(x)}, not 0")
    rows = list(wall.nb) + list(wall.sigma)
    v = solve(p.U.submatrix(rows), [-x[r] for r in rows])
    if v is None:
        raise ConsistencyError(f"facets around {face} do not meet in a point")
    return tuple(v)


def _affine_vanishes(poly: SparsePoly, p: HPolytope, rows: Sequence[int], point: Sequence[Fraction]) -> bool:
    "poly vanishes on {U_rows y + z_rows = 0}, given a point of it"
    ys = y_variables(p.d)
    directions = kernel_basis(p.U.submatrix(rows)) if rows else [
        [Fraction(int(i == j)) for j in range(p.d)] for i in range(p.d)
    ]
    if not directions:
        return poly.evaluate(point) == 0
    ts = VarSet.numbered("t", len(directions))
    images = {
        ys[j]: SparsePoly.linear(ts, {ts[i]: k[j] for i, k in enumerate(directions)}, point[j])
        for j in range(p.d)
    }
    return substitute(poly, images, ts).is_zero()


def degeneration_check(p: HPolytope, face: FaceRef, z0: Sequence[Fraction]) -> DegenerationReport:
    """What the adjoint does when z0 sits on the wall of ``face``.

    Lost facets split off their linear forms; otherwise the adjoint vanishes
    at the shrunk vertex and on the affine span of the facets through it.
    """
    if len(z0) != p.n:
        raise DimensionError(f"z0 has length {len(z0)}, expected {p.n}")
    z0 = tuple(Fraction(v) for v in z0)
    wall = wall_form(p, face)
    status = membership(deformation_cone(p), z0)
    if status.status is Status.OUTSIDE:
        raise WallNotActiveError(f"z0 lies outside the deformation cone: {status}")
    if wall.form.evaluate(z0) != 0:
        return DegenerationReport(face, z0, False)

    fan = normal_fan(p)
    warren = warren_adjoint(fan, z0)
    degenerate = p.with_z(z0)
    if not is_bounded(degenerate):
        raise ConsistencyError("degenerate polytope is unbounded")
    kept = facets_of(degenerate)
    lost = tuple(r for r in range(p.n) if r not in kept)
    logger.info("face %s: lost facets %s", face, [r + 1 for r in lost])

    if lost:
        ys = y_variables(p.d)
        splits = []
        for r in lost:
            ell = SparsePoly.linear(ys, {ys[j]: p.U[r, j] for j in range(p.d)}, z0[r])
            quotient = divide_linear(warren.poly, ell)
            if quotient is None:
                raise ConsistencyError(f"adjoint at z0 is not divisible by the form of facet {r + 1}")
            splits.append(LinearSplit(r, ell, quotient))
        return DegenerationReport(face, z0, True, warren, lost, tuple(splits))

    v = shrink_vertex(p, face, z0)
    if warren.poly.evaluate(v) != 0:
        raise ConsistencyError(f"adjoint at z0 does not vanish at the shrunk vertex {v}")
    if not _affine_vanishes(warren.poly, p, wall.sigma, v):
        raise ConsistencyError(f"adjoint at z0 does not vanish on the span of face {face}")
    return DegenerationReport(face, z0, True, warren, (), (), v)
