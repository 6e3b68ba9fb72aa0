import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .errors import ConsistencyError, DimensionError, PoleError
from .exact import format_rat
from .fan import Cone, SimplicialFan, StarFanData, is_complete, star_fan
from .poly import SparsePoly, VarSet, restrict_zero, substitute
from .polytope import FaceRef, HPolytope, face_vertices, normal_fan, require_irredundant

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AmplitudeExpansion:
    fan: SimplicialFan
    terms: Tuple[Tuple[Fraction, Cone], ...]

    def evaluate(self, x: Sequence[Fraction]) -> Fraction:
        return evaluate_amplitude(self.fan, x)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for coef, cone in self.terms:
            den = "*".join(self.fan.labels[r] for r in cone) or "1"
            parts.append(f"{format_rat(coef)}/({den})")
        return " + ".join(parts)


@dataclass(frozen=True)
class WarrenPoly:
    poly: SparsePoly
    z: Tuple[Fraction, ...]
    fan: SimplicialFan

    @property
    def degree(self) -> int:
        return self.poly.total_degree()

    def __str__(self) -> str:
        return str(self.poly)


@dataclass(frozen=True)
class Restriction:
    """(Adj restricted to Lambda_tau) = c^-1 * prefactor * star_adjoint"""

    prefactor: SparsePoly
    star_adjoint: SparsePoly
    c_tau: Fraction
    star: StarFanData

    def expand(self) -> SparsePoly:
        return self.prefactor * self.star_adjoint / self.c_tau


@dataclass(frozen=True)
class Residue:
    c_inv: Fraction
    amplitude: AmplitudeExpansion


def y_variables(d: int) -> VarSet:
    return VarSet.numbered("y", d)


def amplitude(fan: SimplicialFan) -> AmplitudeExpansion:
    return AmplitudeExpansion(
        fan, tuple((fan.det_abs(c), c) for c in fan.full_cones)
    )


def adjoint(fan: SimplicialFan) -> SparsePoly:
    terms: Dict[Tuple[int, ...], Fraction] = {}
    for cone in fan.full_cones:
        e = tuple(0 if r in cone else 1 for r in range(fan.n))
        terms[e] = fan.det_abs(cone)
    return SparsePoly(fan.variables, terms)


def evaluate_amplitude(fan: SimplicialFan, x: Sequence[Fraction]) -> Fraction:
    if len(x) != fan.n:
        raise DimensionError(f"x has length {len(x)}, expected {fan.n}")
    total = Fraction(0)
    for cone in fan.full_cones:
        den = Fraction(1)
        for r in cone:
            den *= Fraction(x[r])
        if den == 0:
            raise PoleError(cone)
        total += fan.det_abs(cone) / den
    return total


def restrict_adjoint(fan: SimplicialFan, tau: Iterable[int]) -> Restriction:
    star = star_fan(fan, tau)
    star_adj = adjoint(star.base).rename(fan.variables)
    outside = [
        fan.labels[r]
        for r in range(fan.n)
        if r not in star.ray_map and r not in star.tau
    ]
    prefactor = SparsePoly.monomial(fan.variables, outside)
    result = Restriction(prefactor, star_adj, star.c_tau, star)
    brute = restrict_zero(adjoint(fan), fan.label_set(star.tau))
    if brute != result.expand():
        raise ConsistencyError(
            f"restriction to {fan.label_set(star.tau)} is {brute}, "
            f"star fan gives {result.expand()}"
        )
    return result


def residue(fan: SimplicialFan, tau: Iterable[int]) -> Residue:
    star = star_fan(fan, tau)
    star_amp = amplitude(star.base)
    c_inv = 1 / star.c_tau
    position = {r: i for i, r in enumerate(star.ray_map)}
    expected = {
        tuple(sorted(position[r] for r in c if r not in star.tau)): fan.det_abs(c)
        for c in fan.full_cones
        if set(star.tau) <= set(c)
    }
    found = {cone: c_inv * coef for coef, cone in star_amp.terms}
    if expected != found:
        raise ConsistencyError(f"residue at {fan.label_set(star.tau)} does not match the star fan")
    return Residue(c_inv, star_amp)


def face_restrict(p: HPolytope, face: FaceRef) -> Restriction:
    require_irredundant(p)
    fan = normal_fan(p)
    result = restrict_adjoint(fan, face.facets)
    touching = {q for v in face_vertices(p, face) for q in v.active}
    disjoint = [fan.labels[q] for q in range(p.n) if q not in touching]
    if result.prefactor != SparsePoly.monomial(fan.variables, disjoint):
        raise ConsistencyError(
            f"prefactor {result.prefactor} differs from the facets missing face {face}"
        )
    return result


def linear_images(
    fan: SimplicialFan, z: Optional[Sequence[Fraction]] = None
) -> Dict[str, SparsePoly]:
    "x_rho -> u_rho . y (+ z_rho)"
    ys = y_variables(fan.dim)
    images = {}
    for r, label in enumerate(fan.labels):
        coefs = {ys[j]: fan.rays[r, j] for j in range(fan.dim)}
        images[label] = SparsePoly.linear(ys, coefs, z[r] if z is not None else 0)
    return images


def vanishes_on_imU(fan: SimplicialFan) -> bool:
    image = substitute(adjoint(fan), linear_images(fan), y_variables(fan.dim))
    return image.is_zero()


def warren_adjoint(fan: SimplicialFan, z: Sequence[Fraction]) -> WarrenPoly:
    if len(z) != fan.n:
        raise DimensionError(f"z has length {len(z)}, expected {fan.n}")
    z = tuple(Fraction(v) for v in z)
    poly = substitute(adjoint(fan), linear_images(fan, z), y_variables(fan.dim))
    bound = fan.n - fan.dim - 1
    if poly.total_degree() > bound and is_complete(fan):
        raise ConsistencyError(
            f"adjoint of a complete fan has degree {poly.total_degree()} > {bound}"
        )
    return WarrenPoly(poly, z, fan)


def euler_check(fan: SimplicialFan) -> bool:
    "sum_rho x_rho * dAdj/dx_rho = (n - d) * Adj"
    adj = adjoint(fan)
    total = SparsePoly.zero(fan.variables)
    for label in fan.labels:
        total = total + SparsePoly.variable(fan.variables, label) * adj.partial(label)
    return total == adj * (fan.n - fan.dim)


def scaled_terms(fan: SimplicialFan, ray: int, c: Fraction) -> SparsePoly:
    "The adjoint after u_ray -> c * u_ray, predicted term by term"
    terms = {}
    for e, coef in adjoint(fan).terms.items():
        terms[e] = coef * c if e[ray] == 0 else coef
    return SparsePoly(fan.variables, terms)

