"""Combinatorics of the fan that the adjoint hypersurface remembers.

The coordinate subspaces over primitive collections and the edge planes
Lambda_e & H_e lie on the adjoint hypersurface. The edge planes alone
determine the adjoint up to scale.
"""
import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .amplitude import adjoint, restrict_adjoint
from .errors import ConsistencyError, NonlinearFactorError, NotBarFanError, PreconditionError
from .fan import SimplicialFan, bar_fan, star_fan
from .linear_variety import LinearVariety
from .poly import LinForm, SparsePoly, VarSet, restrict_zero, substitute
from .polytope import FaceRef, HPolytope, face_vertices, faces, normal_fan, require_irredundant, vertices

logger = logging.getLogger(__name__)


def _fmt(indices: Tuple[int, ...]) -> str:
    return "{" + ",".join(str(i + 1) for i in indices) + "}"


@dataclass(frozen=True)
class MonomialIdealGens:
    generators: Tuple[Tuple[int, ...], ...]
    labels: Tuple[str, ...]

    def monomials(self, variables: VarSet) -> List[SparsePoly]:
        return [SparsePoly.monomial(variables, [self.labels[i] for i in g]) for g in self.generators]

    def __str__(self) -> str:
        return "<" + ", ".join("*".join(self.labels[i] for i in g) for g in self.generators) + ">"


@dataclass(frozen=True, order=True)
class PrimitiveCollection:
    rays: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.rays)

    def __str__(self) -> str:
        return _fmt(self.rays)


@dataclass(frozen=True)
class EdgeHyperplane:
    """H_e = {u_{v1} x_{Q2} + u_{v2} x_{Q1} = 0}

    v1, v2 are the endpoints of the edge and Q1, Q2 the facets through
    v1 resp. v2 that miss the edge.
    """

    edge: FaceRef
    outer_facets: Tuple[int, int]
    coefs: Tuple[Fraction, Fraction]
    endpoints: Tuple[Tuple[int, ...], Tuple[int, ...]]

    def form(self, variables: VarSet) -> LinForm:
        q1, q2 = self.outer_facets
        u1, u2 = self.coefs
        return SparsePoly.linear(variables, {variables[q2]: u1, variables[q1]: u2})

    def space(self, variables: VarSet) -> LinearVariety:
        "Lambda_e & H_e"
        return LinearVariety.coordinate(variables, [variables[q] for q in self.edge.facets]).with_forms(
            [self.form(variables)]
        )


@dataclass(frozen=True)
class SplitRestriction:
    "Adj restricted to Lambda_Delta = prefactor * prod(factors)"

    prefactor: SparsePoly
    factors: Tuple[LinForm, ...]

    def expand(self) -> SparsePoly:
        result = self.prefactor
        for f in self.factors:
            result = result * f
        return result

    def __str__(self) -> str:
        parts = [str(self.prefactor)] if self.prefactor != 1 or not self.factors else []
        parts += [f"({f})" if len(f) > 1 else str(f) for f in self.factors]
        return "*".join(parts)


def irrelevant_generators(fan: SimplicialFan) -> MonomialIdealGens:
    "Minimal generators x^sigma-hat of B(Sigma)"
    complements = sorted(
        {tuple(r for r in range(fan.n) if r not in cone) for cone in fan.max_cones},
        key=lambda g: (len(g), g),
    )
    minimal: List[Tuple[int, ...]] = []
    for g in complements:
        if not any(set(h) <= set(g) for h in minimal):
            minimal.append(g)
    return MonomialIdealGens(tuple(minimal), fan.labels)


def primitive_collections(fan: SimplicialFan) -> List[PrimitiveCollection]:
    """Minimal non-faces, by size.

    Every proper subset of a primitive collection is a face, so a candidate
    of size k extends a face of size k - 1 and its size is at most d + 1.
    """
    found = [(r,) for r in range(fan.n) if not fan.is_cone([r])]
    for k in range(2, fan.dim + 2):
        for face in fan.cones_of_dim(k - 1):
            for r in range(face[-1] + 1, fan.n):
                candidate = face + (r,)
                if fan.is_cone(candidate):
                    continue
                if all(fan.is_cone(sub) for sub in combinations(candidate, k - 1)):
                    found.append(candidate)
    logger.debug("%d primitive collections", len(found))
    return [PrimitiveCollection(c) for c in sorted(found, key=lambda c: (len(c), c))]


def adj_in_irrelevant(fan: SimplicialFan, poly: Optional[SparsePoly] = None) -> bool:
    "Every monomial of the adjoint (or ``poly``) is divisible by a generator of B(Sigma)"
    if poly is None:
        poly = adjoint(fan)
    gens = [set(g) for g in irrelevant_generators(fan).generators]
    for e in poly.terms:
        support = {i for i, k in enumerate(e) if k}
        if not any(g <= support for g in gens):
            return False
    return True


def coordinate_components(fan: SimplicialFan) -> List[LinearVariety]:
    "Lambda_J for the primitive collections J, certified inside the adjoint hypersurface"
    adj = adjoint(fan)
    spaces = []
    for pc in primitive_collections(fan):
        labels = fan.label_set(pc.rays)
        if not restrict_zero(adj, labels).is_zero():
            raise ConsistencyError(f"adjoint does not vanish on the coordinate space of {pc}")
        spaces.append(LinearVariety.coordinate(fan.variables, labels))
    return spaces


def bar_fan_components(fan: SimplicialFan) -> List[LinearVariety]:
    """Lambda_rho for rays outside every full cone, then Lambda_J for the
    primitive collections J of the full-dimensional part"""
    bar = bar_fan(fan)
    if not bar.fan.max_cones:
        raise NotBarFanError("fan has no full-dimensional cone")
    adj = adjoint(fan)
    sets = [(r,) for r in bar.dropped]
    sets += [tuple(bar.ray_map[i] for i in pc.rays) for pc in primitive_collections(bar.fan)]
    spaces = []
    for rays in sets:
        labels = fan.label_set(rays)
        if not restrict_zero(adj, labels).is_zero():
            raise ConsistencyError(f"adjoint does not vanish on the coordinate space of {_fmt(rays)}")
        spaces.append(LinearVariety.coordinate(fan.variables, labels))
    return spaces


def edge_hyperplanes(p: HPolytope) -> List[EdgeHyperplane]:
    require_irredundant(p)
    fan = normal_fan(p)
    records = []
    for edge in faces(p, 1):
        ends = face_vertices(p, edge)
        if len(ends) != 2:
            raise PreconditionError(f"edge {edge} has {len(ends)} endpoints; P must be bounded")
        v1, v2 = ends
        (q1,) = [q for q in v1.active if q not in edge.facets]
        (q2,) = [q for q in v2.active if q not in edge.facets]
        records.append(
            EdgeHyperplane(
                edge,
                (q1, q2),
                (fan.det_abs(v1.active), fan.det_abs(v2.active)),
                (v1.active, v2.active),
            )
        )
    return records


def interpolate_adjoint(p: HPolytope) -> SparsePoly:
    """The unique degree n - d hypersurface through all edge planes.

    Its monomials are x^sigma-hat over the vertex cones. Containing
    Lambda_e & H_e fixes the ratio of the coefficients at the endpoints of
    e; the ratios are propagated along a spanning tree of the edge graph and
    checked on the remaining edges.
    """
    edges = edge_hyperplanes(p)
    cones = sorted(v.active for v in vertices(p))
    graph: Dict[Tuple[int, ...], List[Tuple[Tuple[int, ...], Fraction]]] = {c: [] for c in cones}
    for e in edges:
        a, b = e.endpoints
        ratio = e.coefs[0] / e.coefs[1]
        graph[a].append((b, 1 / ratio))
        graph[b].append((a, ratio))

    root = cones[0]
    value = {root: Fraction(1)}
    queue = deque([root])
    while queue:
        a = queue.popleft()
        for b, factor in graph[a]:
            if b not in value:
                value[b] = value[a] * factor
                queue.append(b)
    if len(value) != len(cones):
        raise ConsistencyError("edge graph is disconnected")
    for e in edges:
        a, b = e.endpoints
        if value[a] * e.coefs[1] != value[b] * e.coefs[0]:
            raise ConsistencyError(f"coefficient ratios disagree around edge {e.edge}")

    fan = normal_fan(p)
    scale = fan.det_abs(root)
    terms = {}
    for cone in cones:
        terms[tuple(0 if r in cone else 1 for r in range(p.n))] = value[cone] * scale
    poly = SparsePoly(fan.variables, terms)
    for e in edges:
        if not e.space(fan.variables).vanishes(poly):
            raise ConsistencyError(f"interpolant misses the plane of edge {e.edge}")
    return poly


def split_restriction(p: HPolytope, face: FaceRef) -> Optional[SplitRestriction]:
    """Complete linear factorization of Adj on Lambda_face, when the face is
    a product of simplices.

    The face's normal fan is a product of simplex fans iff its primitive
    collections partition its rays; each collection then contributes the
    linear adjoint of one simplex factor.
    """
    require_irredundant(p)
    fan = normal_fan(p)
    restriction = restrict_adjoint(fan, face.facets)
    star = restriction.star
    collections = primitive_collections(star.base)
    covered = sorted(r for pc in collections for r in pc.rays)
    if covered != list(range(star.base.n)):
        logger.info("face %s is not a product of simplices", face)
        return None

    star_adj = restriction.star_adjoint
    one = SparsePoly.constant(fan.variables, 1)
    factors = []
    for pc in collections:
        inside = {star.base.labels[i] for i in pc.rays}
        images = {
            label: SparsePoly.variable(fan.variables, label) if label in inside else one
            for label in fan.labels
        }
        g = substitute(star_adj, images, fan.variables)
        if g.total_degree() != 1 or g.constant_term() != 0:
            raise NonlinearFactorError([star.ray_map[i] for i in pc.rays], str(g))
        factors.append(g / g.items()[0][1])

    product = SparsePoly.constant(fan.variables, 1)
    for f in factors:
        product = product * f
    ones = [1] * fan.n
    kappa = star_adj.evaluate(ones) / product.evaluate(ones)
    if product * kappa != star_adj:
        raise ConsistencyError(f"restriction to face {face} does not split along its primitive collections")
    prefactor = restriction.prefactor * (kappa / restriction.c_tau)
    return SplitRestriction(prefactor, tuple(factors))


def lift_face_space(p: HPolytope, face: FaceRef, space: LinearVariety) -> LinearVariety:
    """Image of a linear space on the face's adjoint hypersurface in the
    adjoint hypersurface of P.

    ``space`` lives over the variables of the facets that cut facets of the
    face, i.e. the rays of its star fan.
    """
    require_irredundant(p)
    fan = normal_fan(p)
    star = star_fan(fan, face.facets)
    if space.vars != star.base.variables:
        raise PreconditionError(
            f"space is over {list(space.vars)}, face {face} needs {list(star.base.variables)}"
        )
    if not space.vanishes(adjoint(star.base)):
        raise PreconditionError(f"the adjoint of face {face} does not vanish on {space}")
    forms = [f.rename(fan.variables) for f in space.forms]
    lifted = LinearVariety.coordinate(fan.variables, fan.label_set(star.tau)).with_forms(forms)
    if not lifted.vanishes(adjoint(fan)):
        raise ConsistencyError(f"lift of {space} leaves the adjoint hypersurface")
    return lifted
