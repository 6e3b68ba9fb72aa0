import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import FanValidationError, NotAConeError
from .exact import Mat, det, has_nonneg_dependency, inverse, rank
from .poly import VarSet

logger = logging.getLogger(__name__)

Cone = Tuple[int, ...]


class SimplicialFan:
    """A simplicial fan given by its ray matrix and maximal cones.

    Rays keep their input order; it fixes the variable order of every
    polynomial built from the fan. Faces are derived on demand.
    """

    def __init__(
        self,
        dim: int,
        rays: Mat,
        max_cones: Iterable[Iterable[int]],
        labels: Optional[Sequence[str]] = None,
    ):
        self.dim = dim
        self.rays = rays
        self.max_cones: Tuple[Cone, ...] = tuple(
            sorted({tuple(sorted(set(c))) for c in max_cones})
        )
        if labels is None:
            labels = [f"x{i + 1}" for i in range(rays.rows)]
        self.variables = VarSet(labels)
        if len(self.variables) != rays.rows:
            raise FanValidationError(
                [f"{len(self.variables)} labels for {rays.rows} rays"]
            )

    @property
    def n(self) -> int:
        return self.rays.rows

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.variables.labels

    def ray(self, i: int) -> Tuple[Fraction, ...]:
        return self.rays.row(i)

    def label_set(self, indices: Iterable[int]) -> List[str]:
        return [self.labels[i] for i in sorted(indices)]

    @cached_property
    def faces(self) -> FrozenSet[FrozenSet[int]]:
        found: Set[FrozenSet[int]] = set()
        for cone in self.max_cones:
            for k in range(len(cone) + 1):
                for sub in combinations(cone, k):
                    found.add(frozenset(sub))
        return frozenset(found)

    def is_cone(self, rays: Iterable[int]) -> bool:
        return frozenset(rays) in self.faces

    def cones_of_dim(self, k: int) -> List[Cone]:
        return sorted(tuple(sorted(f)) for f in self.faces if len(f) == k)

    @cached_property
    def full_cones(self) -> List[Cone]:
        "Sigma(d), in sorted order"
        return [c for c in self.max_cones if len(c) == self.dim]

    def neighbours(self, tau: Iterable[int]) -> List[int]:
        "nb(tau): rays outside tau extending it to a larger cone"
        t = frozenset(tau)
        return [r for r in range(self.n) if r not in t and (t | {r}) in self.faces]

    def det_abs(self, cone: Sequence[int]) -> Fraction:
        return abs(self._dets[tuple(sorted(cone))])

    @cached_property
    def _dets(self) -> Dict[Cone, Fraction]:
        return {c: det(self.rays.submatrix(c)) for c in self.full_cones}

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SimplicialFan)
            and self.dim == other.dim
            and self.rays == other.rays
            and self.max_cones == other.max_cones
        )

    def __repr__(self) -> str:
        cones = " ".join("".join(str(i + 1) for i in c) for c in self.max_cones)
        return f"SimplicialFan(d={self.dim}, n={self.n}, cones={cones})"


@dataclass(frozen=True)
class StarFanData:
    base: SimplicialFan
    ray_map: Tuple[int, ...]
    c_tau: Fraction
    t_tau: Mat
    tau: Cone


@dataclass(frozen=True)
class BarFan:
    fan: SimplicialFan
    ray_map: Tuple[int, ...]
    dropped: Tuple[int, ...]


def _fmt(indices: Iterable[int]) -> str:
    return "{" + ",".join(str(i + 1) for i in sorted(indices)) + "}"


def validate(fan: SimplicialFan, strict: bool = False) -> None:
    problems: List[str] = []
    n, d = fan.n, fan.dim
    if fan.rays.cols != d:
        problems.append(f"rays have {fan.rays.cols} coordinates, expected {d}")
    elif rank(fan.rays) != d:
        problems.append(f"ray matrix has rank {rank(fan.rays)} < {d}")
    for i in range(n):
        if all(x == 0 for x in fan.ray(i)):
            problems.append(f"zero ray {i + 1}")
    for i, j in combinations(range(n), 2):
        pair = Mat.from_rows([fan.ray(i), fan.ray(j)], fan.rays.cols)
        if any(fan.ray(i)) and any(fan.ray(j)) and rank(pair) == 1:
            k = next(c for c in range(fan.rays.cols) if fan.ray(i)[c] != 0)
            if fan.ray(j)[k] / fan.ray(i)[k] > 0:
                problems.append(f"duplicate ray {i + 1},{j + 1}")
    for cone in fan.max_cones:
        if any(r < 0 or r >= n for r in cone):
            problems.append(f"cone {_fmt(cone)} has a ray index out of range")
            continue
        if len(cone) > d:
            problems.append(f"cone {_fmt(cone)} has more than {d} rays")
        elif rank(fan.rays.submatrix(cone)) != len(cone):
            problems.append(f"cone {_fmt(cone)} is not simplicial")
    for a, b in combinations(fan.max_cones, 2):
        if set(a) <= set(b) or set(b) <= set(a):
            problems.append(f"maximal cone {_fmt(a)} contains {_fmt(b)} or vice versa")
    used = {r for c in fan.max_cones for r in c}
    for r in range(n):
        if r not in used:
            problems.append(f"ray {r + 1} lies in no cone")
    if strict and not problems:
        problems.extend(_overlaps(fan))
    if problems:
        raise FanValidationError(problems)


def _overlaps(fan: SimplicialFan) -> List[str]:
    """Pairs of maximal cones meeting outside their common face.

    The pair meets properly iff no nonnegative combination of the
    non-shared generators of one cone and the negated non-shared generators
    of the other lies in the span of the shared rays.
    """
    problems = []
    for a, b in combinations(fan.max_cones, 2):
        shared = sorted(set(a) & set(b))
        own_a = [r for r in a if r not in shared]
        own_b = [r for r in b if r not in shared]
        vectors = [list(fan.ray(r)) for r in own_a] + [
            [-x for x in fan.ray(r)] for r in own_b
        ]
        if shared:
            vectors = _modulo_span(vectors, [list(fan.ray(r)) for r in shared])
        if has_nonneg_dependency(vectors):
            problems.append(f"cones {_fmt(a)} and {_fmt(b)} overlap beyond {_fmt(shared)}")
    return problems


def _modulo_span(vectors: List[List[Fraction]], span: List[List[Fraction]]) -> List[List[Fraction]]:
    "Coordinates of ``vectors`` in a complement of ``span``"
    d = len(span[0])
    basis = [list(v) for v in span]
    extra = []
    for j in range(d):
        e = [Fraction(int(i == j)) for i in range(d)]
        if rank(Mat.from_rows(basis + [e], d)) > len(basis):
            basis.append(e)
            extra.append(j)
    t = inverse(Mat.from_rows(basis, d))
    k = len(span)
    return [list((Mat.from_rows([v], d) @ t).row(0)[k:]) for v in vectors]


def transform_for(fan: SimplicialFan, tau: Sequence[int]) -> Mat:
    """T_tau: inverse of tau's rays completed greedily by standard basis vectors"""
    d = fan.dim
    basis = [list(fan.ray(r)) for r in tau]
    for j in range(d):
        if len(basis) == d:
            break
        e = [Fraction(int(i == j)) for i in range(d)]
        if rank(Mat.from_rows(basis + [e], d)) > len(basis):
            basis.append(e)
    return inverse(Mat.from_rows(basis, d))


def star_fan(fan: SimplicialFan, tau: Iterable[int]) -> StarFanData:
    t = tuple(sorted(set(tau)))
    if not fan.is_cone(t):
        raise NotAConeError(t)
    k = len(t)
    transform = transform_for(fan, t)
    moved = fan.rays @ transform
    nb = fan.neighbours(t)
    position = {r: i for i, r in enumerate(nb)}
    rows = [list(moved.row(r)[k:]) for r in nb]
    cones = []
    for cone in fan.max_cones:
        if set(t) <= set(cone):
            cones.append([position[r] for r in cone if r not in t])
    base = SimplicialFan(
        fan.dim - k,
        Mat.from_rows(rows, fan.dim - k),
        cones,
        labels=[fan.labels[r] for r in nb],
    )
    logger.debug("star fan at %s: %d rays, %d cones", _fmt(t), base.n, len(base.max_cones))
    return StarFanData(base, tuple(nb), abs(det(transform)), transform, t)


def product_fan(f1: SimplicialFan, f2: SimplicialFan) -> SimplicialFan:
    d = f1.dim + f2.dim
    rows = [list(f1.ray(i)) + [0] * f2.dim for i in range(f1.n)]
    rows += [[0] * f1.dim + list(f2.ray(i)) for i in range(f2.n)]
    cones = [
        list(a) + [f1.n + r for r in b] for a in f1.max_cones for b in f2.max_cones
    ]
    labels: Optional[List[str]] = list(f1.labels) + list(f2.labels)
    if len(set(labels)) != len(labels):
        labels = None
    return SimplicialFan(d, Mat.from_rows(rows, d), cones, labels)


def trivial_fan() -> SimplicialFan:
    "The fan of R^0: no rays, one trivial cone"
    return SimplicialFan(0, Mat(0, 0, ()), [()])


def is_complete(fan: SimplicialFan) -> bool:
    d = fan.dim
    if not fan.max_cones or any(len(c) != d for c in fan.max_cones):
        return False
    if d == 0:
        return True
    ridges: Dict[Cone, int] = {}
    for cone in fan.max_cones:
        for ridge in combinations(cone, d - 1):
            ridges[ridge] = ridges.get(ridge, 0) + 1
    return all(count == 2 for count in ridges.values())


def bar_fan(fan: SimplicialFan) -> BarFan:
    full = fan.full_cones
    kept = sorted({r for c in full for r in c})
    position = {r: i for i, r in enumerate(kept)}
    dropped = tuple(r for r in range(fan.n) if r not in position)
    base = SimplicialFan(
        fan.dim,
        Mat.from_rows([list(fan.ray(r)) for r in kept], fan.dim),
        [[position[r] for r in c] for c in full],
        labels=[fan.labels[r] for r in kept],
    )
    return BarFan(base, tuple(kept), dropped)
