"""Fan and polytope files.

Both are JSON objects. Rationals are integers or "p/q" strings; JSON floats
are rejected. Ray indices are 0-based unless the file sets
``"one_based": true`` or the caller asks for it.
"""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from .errors import ParseError
from .exact import Mat, format_rat, parse_rat
from .fan import SimplicialFan
from .polytope import HPolytope

logger = logging.getLogger(__name__)

Loaded = Union[SimplicialFan, HPolytope]


def _reject_float(text: str) -> Any:
    raise ParseError(f"floating point value {text} where a rational is expected")


def load_json(text: str, source: Optional[str] = None) -> Dict[str, Any]:
    try:
        data = json.loads(text, parse_float=_reject_float, parse_constant=_reject_float)
    except ParseError as e:
        raise ParseError(e.message, source)
    except json.JSONDecodeError as e:
        raise ParseError(str(e), source)
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", source)
    return data


def _field(data: Dict[str, Any], key: str, source: Optional[str]) -> Any:
    if key not in data:
        raise ParseError(f'missing field "{key}"', source)
    return data[key]


def _rat_vector(value: Any, what: str, source: Optional[str]) -> List[Fraction]:
    if not isinstance(value, list):
        raise ParseError(f"{what} must be a list", source)
    try:
        return [parse_rat(v) for v in value]
    except ParseError as e:
        raise ParseError(f"{what}: {e.message}", source)


def _matrix(value: Any, cols: Optional[int], what: str, source: Optional[str]) -> Mat:
    if not isinstance(value, list):
        raise ParseError(f"{what} must be a list of rows", source)
    rows = [_rat_vector(r, f"{what} row {i + 1}", source) for i, r in enumerate(value)]
    if cols is None:
        cols = len(rows[0]) if rows else 0
    for i, r in enumerate(rows):
        if len(r) != cols:
            raise ParseError(f"{what} row {i + 1} has {len(r)} entries, expected {cols}", source)
    return Mat.from_rows(rows, cols)


def _labels(data: Dict[str, Any], n: int, source: Optional[str]) -> Optional[List[str]]:
    labels = data.get("labels")
    if labels is None:
        return None
    if not isinstance(labels, list) or not all(isinstance(s, str) and s for s in labels):
        raise ParseError("labels must be a list of non-empty strings", source)
    if len(labels) != n or len(set(labels)) != n:
        raise ParseError(f"need {n} distinct labels, got {labels}", source)
    return labels


def parse_fan(data: Dict[str, Any], one_based: bool = False, source: Optional[str] = None) -> SimplicialFan:
    if data.get("kind") != "fan":
        raise ParseError('expected "kind": "fan"', source)
    d = _field(data, "d", source)
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise ParseError('"d" must be a non-negative integer', source)
    rays = _matrix(_field(data, "rays", source), d, "rays", source)
    offset = 1 if one_based or data.get("one_based") else 0
    cones = _field(data, "max_cones", source)
    if not isinstance(cones, list):
        raise ParseError("max_cones must be a list of index lists", source)
    parsed = []
    for cone in cones:
        if not isinstance(cone, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in cone):
            raise ParseError(f"cone {cone!r} is not a list of indices", source)
        indices = [i - offset for i in cone]
        if any(i < 0 or i >= rays.rows for i in indices):
            raise ParseError(f"cone {cone!r} has an index out of range", source)
        parsed.append(indices)
    return SimplicialFan(d, rays, parsed, _labels(data, rays.rows, source))


def parse_polytope(data: Dict[str, Any], source: Optional[str] = None) -> HPolytope:
    if data.get("kind") != "polytope":
        raise ParseError('expected "kind": "polytope"', source)
    raw = _field(data, "U", source)
    U = _matrix(raw, None, "U", source)
    z = _rat_vector(_field(data, "z", source), "z", source)
    if len(z) != U.rows:
        raise ParseError(f"z has {len(z)} entries, U has {U.rows} rows", source)
    return HPolytope(U, z, _labels(data, U.rows, source))


def load(path: Union[str, Path], one_based: bool = False) -> Loaded:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(e.strerror or str(e), str(path))
    data = load_json(text, str(path))
    kind = data.get("kind")
    if kind == "fan":
        result: Loaded = parse_fan(data, one_based, str(path))
    elif kind == "polytope":
        result = parse_polytope(data, str(path))
    else:
        raise ParseError(f'unknown kind {kind!r}; expected "fan" or "polytope"', str(path))
    logger.debug("loaded %r from %s", result, path)
    return result


def dump_fan(fan: SimplicialFan) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "kind": "fan",
        "d": fan.dim,
        "rays": [[jsonable(c) for c in fan.ray(i)] for i in range(fan.n)],
        "max_cones": [list(c) for c in fan.max_cones],
    }
    if list(fan.labels) != [f"x{i + 1}" for i in range(fan.n)]:
        data["labels"] = list(fan.labels)
    return data


def dump_polytope(p: HPolytope) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "kind": "polytope",
        "U": [[jsonable(c) for c in p.U.row(i)] for i in range(p.n)],
        "z": [jsonable(c) for c in p.z],
    }
    if list(p.labels) != [f"x{i + 1}" for i in range(p.n)]:
        data["labels"] = list(p.labels)
    return data


def jsonable(value: Any) -> Any:
    "Fractions become ints or 'p/q' strings; containers are converted recursively"
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else format_rat(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def parse_vector(text: str) -> List[Fraction]:
    "Comma-separated rationals, as given to --x and --z"
    if not text.strip():
        raise ParseError("empty vector")
    return [parse_rat(part.strip()) for part in text.split(",")]


def parse_indices(text: str, count: Optional[int] = None) -> List[int]:
    "Comma-separated 1-based indices, returned 0-based"
    try:
        indices = [int(part) - 1 for part in text.split(",") if part.strip()]
    except ValueError:
        raise ParseError(f"not a list of indices: {text!r}")
    if any(i < 0 for i in indices):
        raise ParseError(f"indices are 1-based: {text!r}")
    if count is not None and any(i >= count for i in indices):
        raise ParseError(f"index out of range 1..{count}: {text!r}")
    if len(set(indices)) != len(indices):
        raise ParseError(f"repeated index in {text!r}")
    return indices


def format_vector(values: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_rat(Fraction(v)) for v in values) + ")"
