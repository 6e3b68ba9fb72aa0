import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    DimensionError,
    EmptyPolytopeError,
    NotSimpleError,
    PreconditionError,
    UnboundedError,
)
from .exact import Mat, det, dot, kernel_basis, positively_spans, rank, solve
from .fan import SimplicialFan
from .poly import VarSet

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, ...]


@dataclass(frozen=True)
class VertexData:
    point: Point
    active: Tuple[int, ...]


@dataclass(frozen=True, order=True)
class FaceRef:
    facets: Tuple[int, ...]
    dim: int

    def __str__(self) -> str:
        return "{" + ",".join(str(i + 1) for i in self.facets) + "}"


class HPolytope:
    "{y : U y + z >= 0}"

    def __init__(self, U: Mat, z: Sequence, labels: Optional[Sequence[str]] = None):
        if len(z) != U.rows:
            raise DimensionError(f"z has length {len(z)}, U has {U.rows} rows")
        self.U = U
        self.z: Tuple[Fraction, ...] = tuple(Fraction(x) for x in z)
        if labels is None:
            labels = [f"x{i + 1}" for i in range(U.rows)]
        self.variables = VarSet(labels)

    @property
    def n(self) -> int:
        return self.U.rows

    @property
    def d(self) -> int:
        return self.U.cols

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.variables.labels

    def with_z(self, z: Sequence) -> "HPolytope":
        return HPolytope(self.U, z, self.labels)

    def slacks(self, y: Sequence[Fraction]) -> List[Fraction]:
        return [dot(self.U.row(i), y) + self.z[i] for i in range(self.n)]

    @cached_property
    def vertex_points(self) -> List[VertexData]:
        "All vertices with their full active sets; no simpleness check"
        found: Dict[Point, Tuple[int, ...]] = {}
        for rows in combinations(range(self.n), self.d):
            sub = self.U.submatrix(rows)
            if det(sub) == 0:
                continue
            y = solve(sub, [-self.z[i] for i in rows])
            point = tuple(y)  # type: ignore
            if point in found:
                continue
            s = self.slacks(point)
            if all(v >= 0 for v in s):
                found[point] = tuple(i for i, v in enumerate(s) if v == 0)
        return sorted(
            (VertexData(pt, active) for pt, active in found.items()),
            key=lambda v: (v.active, v.point),
        )

    @cached_property
    def vertices(self) -> List[VertexData]:
        for v in self.vertex_points:
            if len(v.active) > self.d:
                raise NotSimpleError(v.point, v.active)
        return self.vertex_points

    def __repr__(self) -> str:
        return f"HPolytope(n={self.n}, d={self.d}, z={[str(x) for x in self.z]})"


def vertices(p: HPolytope) -> List[VertexData]:
    result = p.vertices
    logger.debug("%d vertices", len(result))
    return result


def is_bounded(p: HPolytope) -> bool:
    "The recession cone {U y >= 0} is zero iff the rows positively span"
    return rank(p.U) == p.d and positively_spans([p.U.row(i) for i in range(p.n)], p.d)


def active_rows(p: HPolytope) -> List[int]:
    return sorted({i for v in vertices(p) for i in v.active})


def normal_fan(p: HPolytope) -> SimplicialFan:
    verts = vertices(p)
    if not verts:
        raise EmptyPolytopeError("polyhedron has no vertex")
    rows = active_rows(p)
    dropped = [i for i in range(p.n) if i not in rows]
    if dropped:
        logger.info("rows %s are redundant", [i + 1 for i in dropped])
    position = {r: i for i, r in enumerate(rows)}
    return SimplicialFan(
        p.d,
        p.U.submatrix(rows),
        [[position[i] for i in v.active] for v in verts],
        labels=[p.labels[i] for i in rows],
    )


def require_irredundant(p: HPolytope) -> None:
    dropped = [i + 1 for i in range(p.n) if i not in active_rows(p)]
    if dropped:
        raise PreconditionError(f"facet inequalities {dropped} are redundant")


def faces(p: HPolytope, k: int) -> List[FaceRef]:
    "k-dimensional faces as the sets of facets containing them"
    if not 0 <= k <= p.d:
        return []
    found = set()
    for v in vertices(p):
        for sub in combinations(v.active, p.d - k):
            found.add(sub)
    return [FaceRef(s, k) for s in sorted(found)]


def face_vertices(p: HPolytope, face: FaceRef) -> List[VertexData]:
    return [v for v in vertices(p) if set(face.facets) <= set(v.active)]


def is_simplex_face(p: HPolytope, face: FaceRef) -> bool:
    return len(face_vertices(p, face)) == face.dim + 1


def facets_of(p: HPolytope) -> List[int]:
    """Rows defining facets of a bounded, possibly non-simple polytope.

    A row is a facet iff the vertices on it span a (d-1)-dimensional affine
    space.
    """
    points = p.vertex_points
    if not points:
        raise EmptyPolytopeError("polytope has no vertex")
    result = []
    for i in range(p.n):
        on = [v.point for v in points if i in v.active]
        if len(on) < p.d:
            continue
        base = on[0]
        diffs = [[a - b for a, b in zip(q, base)] for q in on[1:]]
        affine = rank(Mat.from_rows(diffs, p.d)) if diffs else 0
        if affine == p.d - 1:
            result.append(i)
    return result


def _hyperplane(
    points: Sequence[Point], verts: Sequence[int], inside: Point
) -> Tuple[List[Fraction], Fraction]:
    "h, c with h.x = c through ``verts`` and h.inside < c"
    d = len(inside)
    rows = [list(points[i]) + [Fraction(-1)] for i in verts]
    (normal,) = kernel_basis(Mat.from_rows(rows, d + 1))
    h, c = normal[:d], normal[d]
    if dot(h, inside) - c > 0:
        h, c = [-x for x in h], -c
    return h, c


def _simplex_volume(points: Sequence[Point], verts: Sequence[int], apex: Point) -> Fraction:
    d = len(apex)
    rows = [[a - b for a, b in zip(points[i], apex)] for i in verts]
    return abs(det(Mat.from_rows(rows, d)))


def placing_volume(points: Sequence[Point]) -> Fraction:
    """Normalized volume (d! times Euclidean) of the convex hull.

    Builds a placing triangulation in the given point order and sums the
    simplex volumes.
    """
    d = len(points[0])
    simplex = [0]
    for i in range(1, len(points)):
        if len(simplex) == d + 1:
            break
        diffs = [[a - b for a, b in zip(points[j], points[0])] for j in simplex[1:] + [i]]
        if rank(Mat.from_rows(diffs, d)) == len(simplex):
            simplex.append(i)
    if len(simplex) < d + 1:
        return Fraction(0)
    total = _simplex_volume(points, simplex[1:], points[simplex[0]])
    facets = []
    for j in simplex:
        verts = tuple(v for v in simplex if v != j)
        facets.append((verts,) + _hyperplane(points, verts, points[j]))
    for i, q in enumerate(points):
        if i in simplex:
            continue
        visible = [f for f in facets if dot(f[1], q) - f[2] > 0]
        if not visible:
            continue
        ridges: Dict[Tuple[int, ...], int] = {}
        for verts, _, _ in visible:
            total += _simplex_volume(points, verts, q)
            for ridge in combinations(verts, d - 1):
                ridges[ridge] = ridges.get(ridge, 0) + 1
        added = []
        for verts, _, _ in visible:
            for ridge in combinations(verts, d - 1):
                if ridges[ridge] != 1:
                    continue
                (opposite,) = [v for v in verts if v not in ridge]
                new = tuple(sorted(ridge + (i,)))
                added.append((new,) + _hyperplane(points, new, points[opposite]))
        facets = [f for f in facets if f not in visible] + added
    return total


def dual_volume_oracle(p: HPolytope, x: Sequence[Fraction]) -> Fraction:
    "Normalized volume of the polar dual of {U y + x >= 0}"
    if len(x) != p.n:
        raise DimensionError(f"x has length {len(x)}, expected {p.n}")
    if any(Fraction(v) <= 0 for v in x):
        raise PreconditionError("dual volume needs a strictly positive x")
    if not is_bounded(p):
        raise UnboundedError("P_x is unbounded")
    duals = sorted(
        {tuple(c / Fraction(x[i]) for c in p.U.row(i)) for i in range(p.n)}
    )
    origin = tuple(Fraction(0) for _ in range(p.d))
    return placing_volume([origin] + duals)
