"""Singular locus of the adjoint hypersurface.

On the coordinate space of a primitive collection J the Jacobian system
collapses to one equation per ray of J, each a monomial times the adjoint of
a star fan. Outside Z(Sigma) singular points map into ker M on the toric
variety Y_Sigma.
"""
import enum
import hashlib
import itertools
import logging
import random
from dataclasses import dataclass, field
from functools import cmp_to_key
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .amplitude import adjoint, restrict_adjoint, warren_adjoint
from .combinat import PrimitiveCollection, primitive_collections
from .config.manager import ConfigManager, resolve
from .errors import (
    ConsistencyError,
    DimensionError,
    NonlinearFactorError,
    NotAPolygonError,
    NotBarFanError,
    NotPrimitiveError,
    PreconditionError,
)
from .exact import Mat, format_rat, integer_kernel_basis, kernel_basis, rank
from .fan import SimplicialFan, StarFanData, bar_fan, is_complete
from .linear_variety import LinearVariety
from .poly import (
    LinForm,
    SparsePoly,
    VarSet,
    factor_list,
    linear_factors,
    poly_gcd,
    rational_roots,
    restrict_zero,
    resultant_bivar,
    substitute,
    univariate_gcd,
)
from .polytope import HPolytope, normal_fan

logger = logging.getLogger(__name__)


def partials(fan: SimplicialFan) -> List[SparsePoly]:
    adj = adjoint(fan)
    return [adj.partial(label) for label in fan.labels]


def hessian_rank(fan: SimplicialFan, point: Sequence[Fraction]) -> int:
    if len(point) != fan.n:
        raise DimensionError(f"point has length {len(point)}, expected {fan.n}")
    firsts = partials(fan)
    rows = [[f.partial(label).evaluate(point) for label in fan.labels] for f in firsts]
    return rank(Mat.from_rows(rows, fan.n))


# structured systems on primitive collections


@dataclass(frozen=True)
class SingEquation:
    "prefactor * sub_adjoint = 0, the x_ray derivative on Lambda_J"

    ray: int
    prefactor: SparsePoly
    sub_adjoint: SparsePoly
    star: StarFanData

    def expand(self) -> SparsePoly:
        return self.prefactor * self.sub_adjoint

    def __str__(self) -> str:
        if self.sub_adjoint.is_zero():
            return "0"
        parts = [] if self.prefactor == 1 else [str(self.prefactor)]
        if self.sub_adjoint != 1 or not parts:
            text = str(self.sub_adjoint)
            parts.append(f"({text})" if len(self.sub_adjoint) > 1 and parts else text)
        return "*".join(parts)


@dataclass(frozen=True)
class SingSystem:
    collection: PrimitiveCollection
    zero_vars: Tuple[str, ...]
    equations: Tuple[SingEquation, ...]

    def __str__(self) -> str:
        return " = ".join(list(self.zero_vars) + [str(e) for e in self.equations]) + " = 0"


def sing_system(fan: SimplicialFan, collection: PrimitiveCollection) -> SingSystem:
    rays = tuple(sorted(collection.rays))
    if fan.is_cone(rays) or not all(fan.is_cone(sub) for sub in itertools.combinations(rays, len(rays) - 1)):
        raise NotPrimitiveError(rays)
    zero = fan.label_set(rays)
    derivatives = partials(fan)
    equations = []
    for rho in rays:
        tau = [r for r in rays if r != rho]
        restriction = restrict_adjoint(fan, tau)
        prefactor = SparsePoly.monomial(
            fan.variables,
            [label for label in restriction.prefactor.support() if label != fan.labels[rho]],
        )
        sub = restriction.star_adjoint / restriction.c_tau
        eq = SingEquation(rho, prefactor, sub, restriction.star)
        if eq.expand() != restrict_zero(derivatives[rho], zero):
            raise ConsistencyError(
                f"equation for x{rho + 1} on the coordinate space of {collection} "
                "differs from the restricted partial"
            )
        equations.append(eq)
    return SingSystem(PrimitiveCollection(rays), tuple(zero), tuple(equations))


def sing_systems(fan: SimplicialFan) -> List[SingSystem]:
    return [sing_system(fan, pc) for pc in primitive_collections(fan)]


@dataclass(frozen=True)
class SingComponent:
    space: LinearVariety
    provenance: Tuple[PrimitiveCollection, ...]

    @property
    def dimension(self) -> int:
        return self.space.dimension

    def __str__(self) -> str:
        sources = " ".join(str(pc) for pc in self.provenance)
        return f"dim {self.dimension}: {self.space}  [{sources}]"


def _factor_choices(system: SingSystem) -> Optional[List[List[LinForm]]]:
    """Per equation, the linear forms one of which must vanish.

    None when some equation has no zero at all; an empty list for an
    identically vanishing equation.
    """
    variables = system.equations[0].prefactor.vars if system.equations else None
    choices = []
    for eq in system.equations:
        if eq.sub_adjoint.is_zero():
            continue
        options = [SparsePoly.variable(variables, label) for label in eq.prefactor.support()]
        if not eq.sub_adjoint.is_constant():
            split = linear_factors(eq.sub_adjoint)
            if split is None:
                bad = next(f for f, _ in factor_list(eq.sub_adjoint)[1] if f.total_degree() > 1)
                raise NonlinearFactorError(system.collection.rays, str(bad))
            options += [f for f, _ in split[1]]
        if not options:
            return None
        choices.append(options)
    return choices


def decompose_linear(fan: SimplicialFan, systems: Optional[Sequence[SingSystem]] = None) -> List[SingComponent]:
    """Maximal linear spaces covering Sing(A) & Z(Sigma).

    Every choice of one vanishing factor per equation gives a linear space;
    spaces contained in others are pruned.
    """
    if systems is None:
        systems = sing_systems(fan)
    found: Dict[LinearVariety, List[PrimitiveCollection]] = {}
    for system in systems:
        base = LinearVariety.coordinate(fan.variables, system.zero_vars)
        choices = _factor_choices(system)
        if choices is None:
            continue
        for pick in itertools.product(*choices):
            space = base.with_forms(pick) if pick else base
            if space.is_empty():
                continue
            sources = found.setdefault(space, [])
            if system.collection not in sources:
                sources.append(system.collection)
    spaces = list(found)
    maximal = [
        s for s in spaces
        if not any(t != s and s.is_subspace_of(t) for t in spaces)
    ]
    maximal.sort(key=LinearVariety.sort_key)
    logger.info("%d linear spaces, %d maximal", len(spaces), len(maximal))
    return [SingComponent(s, tuple(sorted(found[s]))) for s in maximal]


def summarize_components(components: Sequence[SingComponent]) -> str:
    counts: Dict[int, int] = {}
    for c in components:
        counts[c.dimension] = counts.get(c.dimension, 0) + 1
    return ", ".join(f"{k} components of dim {dim}" for dim, k in sorted(counts.items()))


@dataclass(frozen=True)
class FactoredEquation:
    ray: int
    prefactor: SparsePoly
    constant: Fraction
    factors: Tuple[Tuple[SparsePoly, int], ...]
    star_labels: Tuple[str, ...]

    @property
    def vanishes_identically(self) -> bool:
        return self.constant == 0

    def __str__(self) -> str:
        if self.vanishes_identically:
            return "0"
        parts = []
        if self.constant != 1:
            parts.append(format_rat(self.constant))
        if self.prefactor != 1:
            parts.append(str(self.prefactor))
        for f, k in self.factors:
            text = f"({f})" if len(f) > 1 else str(f)
            parts.append(text if k == 1 else f"{text}^{k}")
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class FactoredSystem:
    collection: PrimitiveCollection
    zero_vars: Tuple[str, ...]
    equations: Tuple[FactoredEquation, ...]

    def __str__(self) -> str:
        lines = [f"J = {self.collection}: " + " = ".join(self.zero_vars) + " = 0"]
        for eq in self.equations:
            lines.append(f"  x{eq.ray + 1}: {eq} = 0  (star fan on {', '.join(eq.star_labels)})")
        return "\n".join(lines)


def factored_cover(systems: Sequence[SingSystem]) -> List[FactoredSystem]:
    "The systems with every sub-adjoint fully factored; no decomposition is attempted"
    result = []
    for system in systems:
        equations = []
        for eq in system.equations:
            labels = eq.star.base.labels
            if eq.sub_adjoint.is_zero():
                equations.append(FactoredEquation(eq.ray, eq.prefactor, Fraction(0), (), labels))
                continue
            const, factors = factor_list(eq.sub_adjoint)
            factors = [(f, k) for f, k in factors if not f.is_constant()]
            equations.append(FactoredEquation(eq.ray, eq.prefactor, const, tuple(factors), labels))
        result.append(FactoredSystem(system.collection, system.zero_vars, tuple(equations)))
    return result


# the M-matrix criterion


@dataclass(frozen=True)
class SingMatrixData:
    M: Mat
    exponents: Mat
    kernel: List[List[Fraction]]
    cones: Tuple[Tuple[int, ...], ...]


def build_M(fan: SimplicialFan) -> SingMatrixData:
    bar = bar_fan(fan)
    if bar.dropped or len(fan.full_cones) != len(fan.max_cones):
        raise NotBarFanError("the M-matrix criterion needs every maximal cone to be full-dimensional")
    cones = tuple(fan.full_cones)
    m = [[fan.det_abs(c) if r not in c else 0 for c in cones] for r in range(fan.n)]
    e = [[0 if r in c else 1 for c in cones] for r in range(fan.n)]
    M = Mat.from_rows(m, len(cones))
    return SingMatrixData(M, Mat.from_rows(e, len(cones)), kernel_basis(M), cones)


def monomial_vector(fan: SimplicialFan, data: SingMatrixData, x: Sequence[Fraction]) -> List[Fraction]:
    "phi(x): the monomials x^sigma-hat"
    values = []
    for c in data.cones:
        v = Fraction(1)
        for r in range(fan.n):
            if r not in c:
                v *= Fraction(x[r])
        values.append(v)
    return values


def lattice_binomials(data: SingMatrixData) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Exponent pairs (v+, v-) of the binomials of a lattice basis of Y_Sigma,
    followed by pairwise sums and differences"""
    basis = integer_kernel_basis(data.exponents)
    vectors = [tuple(v) for v in basis]
    for a, b in itertools.combinations(basis, 2):
        vectors.append(tuple(x + y for x, y in zip(a, b)))
        vectors.append(tuple(x - y for x, y in zip(a, b)))
    return [
        (tuple(max(x, 0) for x in v), tuple(max(-x, 0) for x in v))
        for v in vectors
        if any(v)
    ]


class Verdict(enum.Enum):
    GUARANTEED = "guaranteed"
    INCONCLUSIVE = "inconclusive"
    TORUS_WITNESS = "torus-witness"


@dataclass(frozen=True)
class SingVerdict:
    status: Verdict
    reason: str = ""
    witness: Optional[Tuple[Fraction, ...]] = None

    def __str__(self) -> str:
        text = self.status.value
        if self.witness is not None:
            text += " (" + ", ".join(format_rat(c) for c in self.witness) + ")"
        if self.reason:
            text += f": {self.reason}"
        return text


def _monomial_value(point: Sequence[Fraction], exponents: Sequence[int]) -> Fraction:
    value = Fraction(1)
    for c, k in zip(point, exponents):
        if k:
            value *= c ** k
    return value


def sing_in_Z_check(fan: SimplicialFan) -> SingVerdict:
    """Whether Sing(A) lies inside Z(Sigma): no point of Y_Sigma is in ker M."""
    data = build_M(fan)
    kernel = data.kernel
    logger.info("ker M has dimension %d", len(kernel))
    if not kernel:
        return SingVerdict(Verdict.GUARANTEED, "M is injective")
    binomials = lattice_binomials(data)
    if len(kernel) == 1:
        (k,) = kernel
        if any(c == 0 for c in k):
            return SingVerdict(Verdict.INCONCLUSIVE, "kernel vector meets coordinate hyperplanes")
        if all(_monomial_value(k, plus) == _monomial_value(k, minus) for plus, minus in binomials):
            return SingVerdict(Verdict.TORUS_WITNESS, "kernel vector lies on the torus of Y", tuple(k))
        return SingVerdict(Verdict.GUARANTEED, "kernel vector violates a lattice binomial")
    if len(kernel) == 2:
        st = VarSet(["s", "t"])
        a, b = kernel
        coords = [SparsePoly.linear(st, {"s": x, "t": y}) for x, y in zip(a, b)]
        g = SparsePoly.zero(st)
        for plus, minus in binomials:
            form = SparsePoly.constant(st, 1)
            other = SparsePoly.constant(st, 1)
            for c, kp, km in zip(coords, plus, minus):
                form = form * c ** kp
                other = other * c ** km
            g = poly_gcd(g, form - other)
        if not g.is_zero() and g.is_constant():
            return SingVerdict(Verdict.GUARANTEED, "the kernel line misses Y")
        return SingVerdict(Verdict.INCONCLUSIVE, f"binomials on the kernel line share the factor {g}")
    return SingVerdict(Verdict.INCONCLUSIVE, f"kernel of dimension {len(kernel)}")


# polygons


def _cross(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def polygon_cycle(fan: SimplicialFan) -> List[int]:
    "Rays of a complete 2-dimensional fan in counterclockwise order, starting at ray 1"
    if fan.dim != 2 or not is_complete(fan) or fan.n < 3:
        raise NotAPolygonError("not the normal fan of a polygon")
    cycle = [0]
    while True:
        current = cycle[-1]
        nxt = [
            r for r in fan.neighbours([current])
            if _cross(fan.ray(current), fan.ray(r)) > 0
        ]
        if len(nxt) != 1:
            raise NotAPolygonError(f"ray {current + 1} has no unique counterclockwise neighbour")
        if nxt[0] == 0:
            break
        if nxt[0] in cycle:
            raise NotAPolygonError("rays do not close up into one cycle")
        cycle.append(nxt[0])
    if len(cycle) != fan.n:
        raise NotAPolygonError("rays do not close up into one cycle")
    return cycle


def polygon_fan(U: Mat, labels: Optional[Sequence[str]] = None) -> SimplicialFan:
    """The complete fan with cones between angularly consecutive rays"""
    if U.cols != 2 or U.rows < 3:
        raise NotAPolygonError("polygon fans need at least three rays in the plane")
    rays = [U.row(i) for i in range(U.rows)]

    def half(v: Sequence[Fraction]) -> int:
        return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1

    def compare(i: int, j: int) -> int:
        hi, hj = half(rays[i]), half(rays[j])
        if hi != hj:
            return hi - hj
        c = _cross(rays[i], rays[j])
        return -1 if c > 0 else (1 if c < 0 else 0)

    order = sorted(range(U.rows), key=cmp_to_key(compare))
    cones = []
    for a, b in zip(order, order[1:] + order[:1]):
        if _cross(rays[a], rays[b]) <= 0:
            raise NotAPolygonError(f"rays {a + 1} and {b + 1} do not bound a pointed cone")
        cones.append([a, b])
    return SimplicialFan(2, U, cones, labels)


def polygon_products(fan: SimplicialFan) -> Tuple[Fraction, Fraction]:
    "u12*u34*... and u23*u45*...*u_n1 along the cycle"
    cycle = polygon_cycle(fan)
    n = len(cycle)
    edges = [fan.det_abs([cycle[i], cycle[(i + 1) % n]]) for i in range(n)]
    first = Fraction(1)
    second = Fraction(1)
    for i, u in enumerate(edges):
        if i % 2 == 0:
            first *= u
        else:
            second *= u
    return first, second


def ngon_generic_check(fan: SimplicialFan) -> bool:
    n = len(polygon_cycle(fan))
    if n % 4 != 0:
        return True
    first, second = polygon_products(fan)
    return first != second


# pentagon nodes and planes


class _Pentagon:
    "Cyclic index arithmetic around a pentagon fan"

    def __init__(self, fan: SimplicialFan):
        self.cycle = polygon_cycle(fan)
        if len(self.cycle) != 5:
            raise NotAPolygonError(f"{len(self.cycle)} rays, a pentagon needs 5")
        self.fan = fan
        self.x = fan.variables

    def label(self, i: int, k: int = 0) -> str:
        return self.x[self.cycle[(i + k) % 5]]

    def u(self, i: int, a: int, b: int) -> Fraction:
        "u between cycle positions i + a and i + b, which must be adjacent"
        return self.fan.det_abs([self.cycle[(i + a) % 5], self.cycle[(i + b) % 5]])

    def coordinate(self, i: int, k: int = 0) -> SparsePoly:
        return SparsePoly.variable(self.x, self.label(i, k))

    def edge_form(self, i: int) -> LinForm:
        "u_{i-1,i} x_{i+1} + u_{i,i+1} x_{i-1}"
        return SparsePoly.linear(self.x, {self.label(i, 1): self.u(i, -1, 0), self.label(i, -1): self.u(i, 0, 1)})


def _pair_name(prefix: str, i: int, j: int) -> str:
    a, b = sorted((i % 5 + 1, j % 5 + 1))
    return f"{prefix}{a}{b}"


def pentagon_nodes(fan: SimplicialFan) -> List[Tuple[str, List[Fraction]]]:
    "The ten nodes e_i and q_{i,i+2} of the adjoint cubic"
    pent = _Pentagon(fan)
    nodes = []
    for i in range(5):
        point = [Fraction(0)] * 5
        point[pent.cycle[i]] = Fraction(1)
        nodes.append((f"e{i + 1}", point))
    for i in range(5):
        forms = [
            pent.coordinate(i),
            pent.coordinate(i, 2),
            SparsePoly.linear(pent.x, {pent.label(i, -2): pent.u(i, 1, 2), pent.label(i, 1): pent.u(i, 2, 3)}),
            pent.edge_form(i),
        ]
        (point,) = LinearVariety.from_forms(forms, pent.x).basis()
        nodes.append((_pair_name("q", i, i + 2), point))
    return nodes


def pentagon_planes(fan: SimplicialFan) -> List[Tuple[str, LinearVariety]]:
    """The fifteen planes on the adjoint cubic of a pentagon: coordinate
    planes of non-adjacent pairs, the edge planes H_i, and the planes L_i"""
    pent = _Pentagon(fan)
    x = pent.x
    planes = []
    for i in range(5):
        planes.append(
            (_pair_name("Lambda", i, i + 2), LinearVariety.coordinate(x, [pent.label(i), pent.label(i, 2)]))
        )
    for i in range(5):
        planes.append((f"H{i + 1}", LinearVariety.from_forms([pent.coordinate(i), pent.edge_form(i)], x)))
    for i in range(5):
        second = SparsePoly.linear(
            x,
            {
                pent.label(i, 1): pent.u(i, -1, 0) * pent.u(i, 2, 3),
                pent.label(i, 2): -pent.u(i, 0, 1) * pent.u(i, 3, 4),
                pent.label(i, 3): pent.u(i, -1, 0) * pent.u(i, 1, 2),
            },
        )
        planes.append((f"L{i + 1}", LinearVariety.from_forms([pent.edge_form(i), second], x)))
    adj = adjoint(fan)
    for name, plane in planes:
        if not plane.vanishes(adj):
            raise ConsistencyError(f"plane {name} is not on the adjoint cubic")
    return planes


def incidence_table(
    spaces: Sequence[Tuple[str, LinearVariety]], points: Sequence[Tuple[str, Sequence[Fraction]]]
) -> List[List[bool]]:
    return [[space.contains_point(pt) for _, pt in points] for _, space in spaces]


# smoothness of Warren adjoint curves


class Smoothness(enum.Enum):
    SMOOTH = "smooth"
    SINGULAR = "singular"
    RETRY_EXHAUSTED = "retry-exhausted"


@dataclass(frozen=True)
class SmoothnessVerdict:
    status: Smoothness
    point: Optional[Tuple[Fraction, ...]] = None
    attempts: int = 0
    gcds: Tuple[str, ...] = field(default_factory=tuple)

    def __str__(self) -> str:
        if self.status is Smoothness.SINGULAR:
            return "singular at (" + ", ".join(format_rat(c) for c in self.point) + ")"
        if self.status is Smoothness.RETRY_EXHAUSTED:
            return f"undecided after {self.attempts} shears; gcds: " + "; ".join(self.gcds)
        return "smooth"


def _shear_rng(p: HPolytope, z: Sequence[Fraction]) -> random.Random:
    text = repr(([[str(c) for c in p.U.row(i)] for i in range(p.n)], [str(c) for c in z]))
    return random.Random(int(hashlib.sha256(text.encode()).hexdigest()[:16], 16))


def _draw(rng: random.Random, bound: int) -> int:
    return rng.choice([k for k in range(-bound, bound + 1) if k != 0])


def _jacobian_gcd(g: SparsePoly, keep: int) -> Optional[SparsePoly]:
    """gcd of the resultants of g with its partials, eliminating the other
    variable; None when g is not monic in that variable"""
    ys = g.vars
    eliminate = ys[1 - keep]
    if g.degree_in(eliminate) != g.total_degree():
        return None
    result = SparsePoly.zero(VarSet([ys[keep]]))
    for label in ys:
        h = g.partial(label)
        if h.is_zero():
            continue
        result = univariate_gcd(result, resultant_bivar(g, h, eliminate))
    return result


def _point_on(g: SparsePoly, keep: int, value: Fraction) -> Optional[Fraction]:
    "A rational value of the other variable making g and its partials vanish"
    ys = g.vars
    other = VarSet([ys[1 - keep]])
    images = {
        ys[keep]: SparsePoly.constant(other, value),
        ys[1 - keep]: SparsePoly.variable(other, other[0]),
    }
    common = SparsePoly.zero(other)
    for f in [g] + [g.partial(label) for label in ys]:
        common = univariate_gcd(common, substitute(f, images, other))
    if common.is_zero():
        return Fraction(0)
    roots = rational_roots(common)
    return roots[0] if roots else None


def warren_smoothness_d2(
    p: HPolytope, z: Sequence[Fraction], conf: Optional[ConfigManager] = None
) -> SmoothnessVerdict:
    """Whether the affine Warren adjoint curve {adj(y) = 0} is smooth.

    After a unimodular shear, the resultants of adj with its partials are
    taken eliminating each variable in turn. SMOOTH needs a nonzero constant
    gcd in both directions; a shear that leaves adj non-monic in either
    variable is retried. Rational common roots give a singular point.
    """
    if p.d != 2:
        raise DimensionError(f"smoothness check is for polygons, got d = {p.d}")
    conf = resolve(conf)
    z = [Fraction(v) for v in z]
    f = warren_adjoint(normal_fan(p), z).poly
    if f.total_degree() <= 1:
        if f.is_zero():
            raise PreconditionError("the Warren adjoint vanishes identically")
        return SmoothnessVerdict(Smoothness.SMOOTH)

    ys = f.vars
    derivatives = [f.partial(label) for label in ys]
    rng = _shear_rng(p, z)
    bound = conf["smoothness.shear_bound"]
    gcds: List[str] = []
    attempts = conf["smoothness.max_retries"]
    for attempt in range(1, attempts + 1):
        a, b = _draw(rng, bound), _draw(rng, bound)
        shear = Mat.from_rows([[1 + a * b, a], [b, 1]], 2)
        images = {
            ys[i]: SparsePoly.linear(ys, {ys[0]: shear[i, 0], ys[1]: shear[i, 1]})
            for i in range(2)
        }
        g = substitute(f, images, ys)
        logger.debug("shear %d: a=%d b=%d", attempt, a, b)
        constant: List[bool] = []
        for keep in (0, 1):
            common = _jacobian_gcd(g, keep)
            if common is None:
                constant.append(False)
                continue
            gcds.append(f"{ys[keep]}: {common}")
            constant.append(not common.is_zero() and common.is_constant())
            if constant[-1]:
                continue
            candidates = rational_roots(common) if not common.is_zero() else [Fraction(0)]
            for value in candidates:
                other = _point_on(g, keep, value)
                if other is None:
                    continue
                w = [Fraction(0), Fraction(0)]
                w[keep], w[1 - keep] = value, other
                y = tuple(shear.apply(w))
                if f.evaluate(y) == 0 and all(h.evaluate(y) == 0 for h in derivatives):
                    return SmoothnessVerdict(Smoothness.SINGULAR, y, attempt, tuple(gcds))
        if all(constant):
            return SmoothnessVerdict(Smoothness.SMOOTH, None, attempt, tuple(gcds))
    return SmoothnessVerdict(Smoothness.RETRY_EXHAUSTED, None, attempts, tuple(gcds))
