"""Named end-to-end checks over the shipped fixtures.

``checks`` maps a check name to its description and function. Each function
returns a one-line detail on success and raises ``ConsistencyError`` when
an expected value is not reproduced.
"""
import logging
import random
import time
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from .amplitude import adjoint, evaluate_amplitude, vanishes_on_imU, warren_adjoint, y_variables
from .combinat import PrimitiveCollection, interpolate_adjoint, primitive_collections, split_restriction
from .config.manager import ConfigManager, resolve
from .deform import (
    Status,
    chamber_spaces,
    degeneration_check,
    deformation_cone,
    facet_defining,
    membership,
)
from .errors import ConsistencyError, ToricError
from .exact import rank
from .fan import SimplicialFan, product_fan
from .fixture_data import load_fixture, random_polygon_fan, random_simple_polytope
from .linear_variety import LinearVariety
from .poly import SparsePoly
from .polytope import FaceRef, HPolytope, dual_volume_oracle, faces, normal_fan, vertices
from .santalo import UniversalBarrier, santalo_point
from .singular import (
    Smoothness,
    Verdict,
    build_M,
    decompose_linear,
    factored_cover,
    hessian_rank,
    incidence_table,
    ngon_generic_check,
    partials,
    pentagon_nodes,
    pentagon_planes,
    polygon_cycle,
    sing_in_Z_check,
    sing_system,
    summarize_components,
    warren_smoothness_d2,
)

logger = logging.getLogger(__name__)

Check = Callable[[ConfigManager], str]

checks: Dict[str, Dict[str, Any]] = OrderedDict()


def check(name: str, text: str) -> Callable[[Check], Check]:
    def register(fn: Check) -> Check:
        checks[name] = {"text": text, "run": fn}
        return fn

    return register


@dataclass(frozen=True)
class CheckResult:
    name: str
    text: str
    passed: bool
    detail: str
    seconds: float


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConsistencyError(message)


def proportional(a: SparsePoly, b: SparsePoly) -> bool:
    "a = c * b for a nonzero constant c"
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    e, c = a.items()[0]
    ratio = c / b.coefficient(e)
    return ratio != 0 and a == b * ratio


def _product(variables: Any, texts: Sequence[str]) -> SparsePoly:
    result = SparsePoly.constant(variables, 1)
    for t in texts:
        result = result * SparsePoly.parse(t, variables)
    return result


def _fan(name: str) -> SimplicialFan:
    obj = load_fixture(name)
    return normal_fan(obj) if isinstance(obj, HPolytope) else obj


def _polytope(name: str) -> HPolytope:
    obj = load_fixture(name)
    _require(isinstance(obj, HPolytope), f"{name} is not a polytope")
    return obj  # type: ignore


def _rng(conf: ConfigManager, salt: str) -> random.Random:
    return random.Random(f"{conf['verify.seed']}:{salt}")


@check("pentagon", "Pentagon adjoint, ten nodes and fifteen planes")
def check_pentagon(conf: ConfigManager) -> str:
    fan = _fan("pentagon.fan")
    expected = SparsePoly.parse("x3*x4*x5 + x1*x4*x5 + x1*x2*x5 + x1*x2*x3 + x2*x3*x4", fan.variables)
    _require(adjoint(fan) == expected, f"adjoint is {adjoint(fan)}")
    for name in ("pentagon.fan", "pentagon_skew.fan"):
        f = _fan(name)
        derivatives = partials(f)
        for node, point in pentagon_nodes(f):
            _require(all(g.evaluate(point) == 0 for g in derivatives), f"{name}: {node} is not singular")
            _require(hessian_rank(f, point) == 4, f"{name}: Hessian at {node} has rank {hessian_rank(f, point)}")
    planes = pentagon_planes(fan)
    table = incidence_table(planes, pentagon_nodes(fan))
    _require(len(planes) == 15, f"{len(planes)} planes")
    _require(all(sum(row) == 4 for row in table), "some plane does not hold four nodes")
    _require(all(sum(col) == 6 for col in zip(*table)), "some node is not on six planes")
    return "10 nodes of Hessian rank 4, 15 planes, configuration (15_4, 10_6)"


ABHY_PRIMITIVE = [
    ("x46", "x35"), ("x46", "x25"), ("x46", "x15"), ("x36", "x25"), ("x36", "x24"),
    ("x36", "x15"), ("x36", "x14"), ("x35", "x24"), ("x35", "x14"), ("x26", "x15"),
    ("x26", "x14"), ("x26", "x13"), ("x25", "x14"), ("x25", "x13"), ("x24", "x13"),
]

ABHY_SPLIT_PLANES = [
    ("x14", "x13 + x24"), ("x14", "x15 + x46"), ("x25", "x24 + x36"),
    ("x25", "x26 + x15"), ("x36", "x35 + x46"), ("x36", "x13 + x26"),
]


@check("abhy", "Three-dimensional ABHY associahedron")
def check_abhy(conf: ConfigManager) -> str:
    p = _polytope("abhy3.poly")
    fan = normal_fan(p)
    x = fan.variables
    counts = (len(vertices(p)), len(faces(p, 1)), len(faces(p, 2)))
    _require(counts == (14, 21, 9), f"f-vector {counts}")
    adj = adjoint(fan)
    _require(len(adj) == 14, f"adjoint has {len(adj)} terms")
    _require(all(sum(e) == 6 and max(e) == 1 for e in adj.terms), "adjoint is not squarefree of degree 6")

    found = {frozenset(fan.label_set(pc.rays)) for pc in primitive_collections(fan)}
    _require(found == {frozenset(pair) for pair in ABHY_PRIMITIVE}, "primitive collections differ")

    planes = set()
    for label in ("x14", "x25", "x36"):
        face = FaceRef((x.index(label),), 2)
        split = split_restriction(p, face)
        _require(split is not None, f"facet {label} does not split")
        for factor in split.factors:  # type: ignore
            planes.add(LinearVariety.from_forms([SparsePoly.variable(x, label), factor], x))
    expected = {
        LinearVariety.from_forms([SparsePoly.parse(a, x), SparsePoly.parse(b, x)], x)
        for a, b in ABHY_SPLIT_PLANES
    }
    _require(planes == expected, "split planes differ")

    system = sing_system(fan, PrimitiveCollection((x.index("x15"), x.index("x36"))))
    by_ray = {fan.labels[eq.ray]: eq.expand() for eq in system.equations}
    quadric = _product(x, ["x14", "x25", "x24", "x35 + x46", "x13 + x26"])
    cubic = _product(
        x,
        ["x46", "x26", "x13*x14*x24 + x13*x14*x35 + x13*x25*x35 + x14*x24*x25 + x24*x25*x35"],
    )
    _require(proportional(by_ray["x15"], quadric), f"x15 equation is {by_ray['x15']}")
    _require(proportional(by_ray["x36"], cubic), f"x36 equation is {by_ray['x36']}")
    (cover,) = factored_cover([system])
    degrees = sorted(sorted(f.total_degree() for f, _ in eq.factors) for eq in cover.equations)
    _require(degrees == [[1, 1], [3]], f"factor degrees {degrees}")
    return "14 vertices, 21 edges, 9 facets; 15 primitive pairs; 6 split planes"


@check("hexagon", "Hexagon singular locus inside Z(Sigma)")
def check_hexagon(conf: ConfigManager) -> str:
    fan = _fan("hexagon.fan")
    components = decompose_linear(fan)
    derivatives = partials(fan)
    for c in components:
        _require(all(c.space.vanishes(g) for g in derivatives), f"{c.space} is not singular")
    summary = summarize_components(components)
    _require(summary == "30 components of dim 1, 2 components of dim 2", summary)
    return summary


OCTAGON_LINE = ["x6 + x8", "x5 + x7", "x4 - x8", "x3 - x7", "x2 + x8", "x1 + x7"]


@check("octagon", "Octagon genericity and torus witness")
def check_octagon(conf: ConfigManager) -> str:
    generic = _fan("octagon_a2.fan")
    _require(ngon_generic_check(generic), "alpha = 2 is reported special")
    summary = summarize_components(decompose_linear(generic))
    _require(summary == "40 components of dim 3, 16 components of dim 4", summary)

    special = _fan("octagon_a1.fan")
    _require(not ngon_generic_check(special), "alpha = 1 is reported generic")
    verdict = sing_in_Z_check(special)
    _require(verdict.status is Verdict.TORUS_WITNESS, f"verdict {verdict}")
    x = special.variables
    line = LinearVariety.from_forms([SparsePoly.parse(f, x) for f in OCTAGON_LINE], x)
    _require(line.dimension == 1, f"{line} is not a line")
    _require(all(line.vanishes(g) for g in partials(special)), f"{line} is not singular")
    return f"alpha = 2: {summary}; alpha = 1: {verdict.status.value}"


def _cycle_sign_vector(fan: SimplicialFan, cones: Sequence[Sequence[int]]) -> List[Fraction]:
    "(u12^-1, -u23^-1, u34^-1, ...) in the column order of ``cones``"
    cycle = polygon_cycle(fan)
    n = len(cycle)
    position = {}
    for k in range(n):
        position[tuple(sorted((cycle[k], cycle[(k + 1) % n])))] = k
    return [Fraction((-1) ** position[tuple(c)]) / fan.det_abs(c) for c in cones]


@check("m-matrix", "Rank and kernel of M for polygons")
def check_m_matrix(conf: ConfigManager) -> str:
    for name in ("pentagon.fan", "hexagon.fan"):
        fan = _fan(name)
        data = build_M(fan)
        for r in range(fan.n):
            for j, cone in enumerate(data.cones):
                expected = 0 if r in cone else fan.det_abs(cone)
                _require(data.M[r, j] == expected, f"{name}: M[{r + 1}, {j + 1}] = {data.M[r, j]}")
    hexagon = _fan("hexagon.fan")
    data = build_M(hexagon)
    (kernel,) = data.kernel
    target = _cycle_sign_vector(hexagon, data.cones)
    ratio = kernel[0] / target[0]
    _require(all(k == ratio * t for k, t in zip(kernel, target)), f"hexagon kernel {kernel}")

    rng = _rng(conf, "m-matrix")
    for n in range(3, 13):
        fan = random_polygon_fan(rng, n)
        r = rank(build_M(fan).M)
        _require(r == (n if n % 2 else n - 1), f"{n}-gon: rank M = {r}")
    return "pentagon and hexagon entries; ranks for n = 3..12"


@check("image-of-U", "Adjoint vanishes on im(U) for complete fans")
def check_image_of_u(conf: ConfigManager) -> str:
    names = ["pentagon.fan", "square.fan", "cube.poly", "cuboid.poly", "hexagon.fan", "fulton.fan"]
    for name in names:
        _require(vanishes_on_imU(_fan(name)), f"{name}: adjoint does not vanish on im(U)")
    _require(not vanishes_on_imU(_fan("cone_over_square.fan")), "cone over a square vanishes on im(U)")
    return f"{len(names)} complete fans vanish, the cone over a square does not"


@check("warren", "Warren adjoints and their degree")
def check_warren(conf: ConfigManager) -> str:
    pentagon = _polytope("pentagon.poly")
    ys = y_variables(2)
    got = warren_adjoint(normal_fan(pentagon), pentagon.z).poly
    _require(got == SparsePoly.parse("5 - 3*y1 + 3*y2 - y1*y2", ys), f"pentagon: {got}")
    unbounded = _polytope("unbounded_pentagon.poly")
    got = warren_adjoint(normal_fan(unbounded), unbounded.z).poly
    expected = SparsePoly.parse("20*y1^3 + 224*y1^2 - 20*y1*y2^2 + 812*y1 - 90*y2^2 + 960", ys)
    _require(got == expected, f"unbounded pentagon: {got}")

    rng = _rng(conf, "warren")
    count = conf["verify.random_fans"]
    for _ in range(count):
        d = rng.choice([2, 3])
        p = random_simple_polytope(rng, d, rng.randint(d + 1, d + 4))
        w = warren_adjoint(normal_fan(p), p.z)
        _require(w.degree <= p.n - d - 1, f"{p!r}: degree {w.degree}")
    return f"two explicit adjoints; degree bound on {count} random fans"


def deformation_samples(p: HPolytope, rng: random.Random, count: int) -> List[List[Fraction]]:
    """Strictly positive x with the same normal fan as P.

    U y + z for a random interior y, nudged when the nudge stays inside the
    deformation cone.
    """
    walls = deformation_cone(p)
    points = [v.point for v in vertices(p)]
    samples = []
    for _ in range(count):
        weights = [Fraction(rng.randint(1, 9)) for _ in points]
        total = sum(weights)
        y = [sum(w * v[j] for w, v in zip(weights, points)) / total for j in range(p.d)]
        x = p.slacks(y)
        nudged = [c + Fraction(rng.randint(-5, 5), 50) for c in x]
        if all(c > 0 for c in nudged) and membership(walls, nudged).status is Status.INTERIOR:
            x = nudged
        samples.append(x)
    return samples


@check("dual-volume", "Amplitude equals the dual volume")
def check_dual_volume(conf: ConfigManager) -> str:
    rng = _rng(conf, "dual-volume")
    count = conf["verify.random_samples"]
    names = ["pentagon.poly", "hexagon.poly", "cube.poly", "cuboid.poly"]
    for name in names:
        p = _polytope(name)
        fan = normal_fan(p)
        for x in deformation_samples(p, rng, count):
            amp, vol = evaluate_amplitude(fan, x), dual_volume_oracle(p, x)
            _require(amp == vol, f"{name} at {x}: amplitude {amp}, dual volume {vol}")
    return f"{count} points on each of {len(names)} polytopes"


@check("interpolation", "Edge planes determine the adjoint")
def check_interpolation(conf: ConfigManager) -> str:
    names = ["pentagon.poly", "square.poly", "hexagon.poly", "cube.poly", "cuboid.poly", "abhy3.poly", "simplex2.poly"]
    polytopes = [(name, _polytope(name)) for name in names]
    rng = _rng(conf, "interpolation")
    for i in range(conf["verify.random_polytopes"]):
        d = rng.choice([2, 3])
        polytopes.append((f"random {i + 1}", random_simple_polytope(rng, d, rng.randint(d + 1, 8))))
    for name, p in polytopes:
        got, expected = interpolate_adjoint(p), adjoint(normal_fan(p))
        _require(proportional(got, expected), f"{name}: interpolant {got}")
    return f"{len(polytopes)} polytopes"


def _random_small_fan(rng: random.Random) -> SimplicialFan:
    d = rng.choice([1, 2])
    n = 2 if d == 1 else rng.randint(3, 6)
    return normal_fan(random_simple_polytope(rng, d, n))


@check("product", "Adjoint of a product fan")
def check_product(conf: ConfigManager) -> str:
    rng = _rng(conf, "product")
    count = conf["verify.random_polytopes"]
    for _ in range(count):
        f1, f2 = _random_small_fan(rng), _random_small_fan(rng)
        prod = product_fan(f1, f2)
        first = adjoint(f1).rename(prod.variables, dict(zip(f1.labels, prod.labels)))
        second = adjoint(f2).rename(prod.variables, dict(zip(f2.labels, prod.labels[f1.n:])))
        _require(adjoint(prod) == first * second, f"{f1!r} x {f2!r}")
    cube = _fan("cube.poly")
    expected = _product(cube.variables, ["x1 + x2", "x3 + x4", "x5 + x6"])
    _require(adjoint(cube) == expected, f"cube adjoint {adjoint(cube)}")
    return f"{count} random pairs and the cube"


CUBOID_ADJOINT = (
    "12*x1*x2*x5 + 48*x1*x3*x5 + 24*x1*x3*x6 + 36*x1*x4*x5"
    " + 28*x1*x4*x6 + 28*x2*x3*x6 + 40*x2*x4*x6 + 20*x2*x5*x6"
)
CUBOID_Z0 = [7, 0, 1, 0, 0, 2]
CUBOID_Z1 = [33, -26, 9, 0, 0, 0]
CUBOID_QUADRIC = "120*y1*y2 - 38*y1*y3 + 165*y2^2 + 79*y2*y3 - 495*y2 + 8*y3^2 - 72*y3"


@check("cuboid", "Deformations of a simple 3-polytope")
def check_cuboid(conf: ConfigManager) -> str:
    p = _polytope("cuboid.poly")
    fan = normal_fan(p)
    ys = y_variables(3)
    _require(adjoint(fan) == SparsePoly.parse(CUBOID_ADJOINT, fan.variables), f"adjoint {adjoint(fan)}")

    report = degeneration_check(p, FaceRef((0,), 2), [Fraction(v) for v in CUBOID_Z0])
    factor = SparsePoly.parse("-8*y1 - 11*y2 - 7*y3 + 7", ys)
    _require(report.lost_facets == (0,), f"lost facets {report.lost_facets}")
    _require(report.splits[0].factor == factor, f"split factor {report.splits[0].factor}")

    z1 = [Fraction(v) for v in CUBOID_Z1]
    quadric = warren_adjoint(fan, z1).poly
    _require(quadric == SparsePoly.parse(CUBOID_QUADRIC, ys) * -16, f"adjoint at z1 {quadric}")
    _require(quadric.evaluate([0, 3, 0]) == 0, "adjoint at z1 misses (0, 3, 0)")
    report = degeneration_check(p, FaceRef((2, 3), 1), z1)
    _require(report.vertex == (0, 3, 0), f"shrunk vertex {report.vertex}")

    walls = deformation_cone(p)
    defining = facet_defining(walls)
    (index,) = [i for i, w in enumerate(walls) if w.face.facets == (2, 4)]
    _require(not defining[index], "the wall of edge {3,5} defines a facet")
    spaces = chamber_spaces(p)
    _require(len(spaces) == 14, f"{len(spaces)} chamber spaces")
    return "adjoint, both degenerations, redundant wall {3,5}, 14 chamber spaces"


def grid_minimizer(p: HPolytope, levels: int = 6, points: int = 41) -> np.ndarray:
    "Minimizes log Amp(U y + z) by repeatedly refined grid search"
    barrier = UniversalBarrier(p)
    corners = np.array([[float(c) for c in v.point] for v in vertices(p)])
    lo, hi = corners.min(axis=0), corners.max(axis=0)
    best = (lo + hi) / 2
    for _ in range(levels):
        axes = [np.linspace(a, b, points) for a, b in zip(lo, hi)]
        grid = np.stack(np.meshgrid(*axes), axis=-1).reshape(-1, p.d)
        inside = grid[((grid @ barrier.U.T + barrier.z) > 0).all(axis=1)]
        values = [barrier.value(y) for y in inside]
        best = inside[int(np.argmin(values))]
        step = (hi - lo) / (points - 1)
        lo, hi = best - 2 * step, best + 2 * step
    return best


@check("santalo", "Santalo points")
def check_santalo(conf: ConfigManager) -> str:
    result = santalo_point(_polytope("square.poly"), conf=conf)
    error = float(np.max(np.abs(np.array(result.point) - 0.5)))
    _require(error < 1e-8 and result.grad_norm < 1e-8, f"unit square: {result}")
    for name in ("pentagon.poly", "simplex2.poly"):
        p = _polytope(name)
        point = np.array(santalo_point(p, conf=conf).point)
        oracle = grid_minimizer(p)
        _require(float(np.max(np.abs(point - oracle))) < 1e-4, f"{name}: {point} vs grid {oracle}")
    return "unit square centre; pentagon and triangle against grid search"


def interior_parameters(p: HPolytope, rng: random.Random, count: int) -> List[List[Fraction]]:
    "Integer z near 10 * z(P) strictly inside the deformation cone"
    walls = deformation_cone(p)
    found: List[List[Fraction]] = []
    while len(found) < count:
        z = [10 * c + rng.randint(-3, 3) for c in p.z]
        if membership(walls, z).status is Status.INTERIOR:
            found.append(z)
    return found


PENTAGON_BOUNDARY_Z = [1, 1, 1, 2, 1]


@check("smoothness", "Warren adjoint curves of polygons")
def check_smoothness(conf: ConfigManager) -> str:
    rng = _rng(conf, "smoothness")
    for name in ("pentagon.poly", "hexagon.poly"):
        p = _polytope(name)
        for z in interior_parameters(p, rng, 10):
            verdict = warren_smoothness_d2(p, z, conf)
            _require(verdict.status is Smoothness.SMOOTH, f"{name} at z = {z}: {verdict}")
    p = _polytope("pentagon.poly")
    verdict = warren_smoothness_d2(p, [Fraction(v) for v in PENTAGON_BOUNDARY_Z], conf)
    _require(verdict.status is Smoothness.SINGULAR, f"boundary pentagon: {verdict}")
    return f"10 generic z each for pentagon and hexagon; boundary pentagon {verdict}"


def run_checks(conf: Optional[ConfigManager] = None, names: Optional[Sequence[str]] = None) -> List[CheckResult]:
    conf = resolve(conf)
    selected = list(checks) if names is None else list(names)
    results = []
    for name in selected:
        entry = checks[name]
        start = time.perf_counter()
        try:
            detail = entry["run"](conf)
            passed = True
        except ToricError as e:
            detail = str(e)
            passed = False
        seconds = time.perf_counter() - start
        logger.info("%s: %s in %.2fs", name, "pass" if passed else "FAIL", seconds)
        results.append(CheckResult(name, entry["text"], passed, detail, seconds))
    return results


def format_table(results: Sequence[CheckResult]) -> str:
    width = max((len(r.name) for r in results), default=4)
    lines = []
    for i, r in enumerate(results, start=1):
        status = "pass" if r.passed else "FAIL"
        lines.append(f"{i:>2}  {r.name:<{width}}  {status}  {r.detail}")
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines)
