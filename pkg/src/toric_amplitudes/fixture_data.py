import logging
import random
from math import gcd
from pathlib import Path
from typing import List

from .errors import NotAPolygonError, NotSimpleError, PreconditionError
from .exact import Mat
from .fan import SimplicialFan
from .formats import Loaded, load
from .polytope import HPolytope, active_rows, is_bounded, vertices
from .singular import polygon_fan

logger = logging.getLogger(__name__)

FIXTURES_DIR = Path(__file__).parent / "fixtures"


def fixture_names() -> List[str]:
    return sorted(p.name for p in FIXTURES_DIR.iterdir() if p.suffix in (".fan", ".poly"))


def fixture_path(name: str) -> Path:
    path = FIXTURES_DIR / name
    if not path.exists():
        raise PreconditionError(f"no fixture named {name}")
    return path


def load_fixture(name: str) -> Loaded:
    "``name`` includes the suffix, e.g. pentagon.fan"
    return load(fixture_path(name))


def random_simple_polytope(
    rng: random.Random, d: int, n: int, bound: int = 5, max_attempts: int = 2000
) -> HPolytope:
    """A bounded simple polytope with n irredundant facets in R^d.

    Rows of U are drawn from [-bound, bound]^d and z from [1, 3 * bound], so
    the origin is interior.
    """
    for attempt in range(max_attempts):
        rows = []
        while len(rows) < n:
            row = [rng.randint(-bound, bound) for _ in range(d)]
            if any(row):
                rows.append(row)
        z = [rng.randint(1, 3 * bound) for _ in range(n)]
        p = HPolytope(Mat.from_rows(rows, d), z)
        if not is_bounded(p):
            continue
        try:
            vertices(p)
        except NotSimpleError:
            continue
        if len(active_rows(p)) != n:
            continue
        logger.debug("random polytope after %d attempts: %r", attempt + 1, p)
        return p
    raise PreconditionError(f"no simple polytope with d={d}, n={n} after {max_attempts} attempts")


def random_polygon_fan(rng: random.Random, n: int, bound: int = 6, max_attempts: int = 2000) -> SimplicialFan:
    "The normal fan of a random n-gon; the u-values are arbitrary positive integers"
    for _ in range(max_attempts):
        rows = set()
        while len(rows) < n:
            a, b = rng.randint(-bound, bound), rng.randint(-bound, bound)
            if a or b:
                g = gcd(a, b)
                rows.add((a // g, b // g))
        try:
            return polygon_fan(Mat.from_rows(sorted(rows), 2))
        except NotAPolygonError:
            continue
    raise PreconditionError(f"no polygon fan with {n} rays after {max_attempts} attempts")
