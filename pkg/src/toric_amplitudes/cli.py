"""Command line entry point.

Every command reads one fan or polytope file and prints its result on
standard output, as text or (``--format structured``) as JSON. Indices on
the command line are 1-based.
"""
import argparse
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import IO, Any, Callable, Dict, List, Optional, Sequence

from .amplitude import (
    adjoint,
    amplitude,
    evaluate_amplitude,
    face_restrict,
    residue,
    restrict_adjoint,
    warren_adjoint,
)
from .combinat import (
    PrimitiveCollection,
    interpolate_adjoint,
    irrelevant_generators,
    primitive_collections,
    split_restriction,
)
from .config import ConfigManager
from .deform import (
    chamber_spaces,
    degeneration_check,
    deformation_cone,
    facet_defining,
    membership,
    shrink_vertex,
)
from .errors import ParseError, ToricError
from .exact import format_rat
from .fan import SimplicialFan, validate
from .fixture_data import FIXTURES_DIR
from .formats import dump_fan, dump_polytope, format_vector, jsonable, load, parse_indices, parse_vector
from .polytope import FaceRef, HPolytope, dual_volume_oracle, normal_fan
from .santalo import santalo_point
from .singular import (
    decompose_linear,
    factored_cover,
    ngon_generic_check,
    partials,
    polygon_products,
    sing_in_Z_check,
    sing_system,
    sing_systems,
    summarize_components,
    warren_smoothness_d2,
)
from .verification import checks, format_table, run_checks

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


@dataclass
class Output:
    text: str
    data: Any
    exit_code: int = 0


Handler = Callable[[argparse.Namespace, ConfigManager], Output]


class _Parser(argparse.ArgumentParser):
    "Usage errors are parse errors"

    def error(self, message: str) -> None:  # type: ignore
        raise ParseError(message)


# input helpers


def _input_path(name: str) -> Path:
    "A file path, or the name of a shipped fixture"
    path = Path(name)
    if not path.exists() and (FIXTURES_DIR / name).exists():
        return FIXTURES_DIR / name
    return path


def _load(args: argparse.Namespace) -> Any:
    obj = load(_input_path(args.file), args.one_based)
    if isinstance(obj, SimplicialFan):
        validate(obj, strict=args.strict)
    return obj


def _fan(args: argparse.Namespace) -> SimplicialFan:
    obj = _load(args)
    return normal_fan(obj) if isinstance(obj, HPolytope) else obj


def _polytope(args: argparse.Namespace) -> HPolytope:
    obj = _load(args)
    if not isinstance(obj, HPolytope):
        raise ParseError(f"{args.command} needs a polytope file", args.file)
    return obj


def _required(args: argparse.Namespace, flag: str) -> str:
    value = getattr(args, flag)
    if value is None:
        raise ParseError(f"{args.command} needs --{flag}")
    return value


def _vector(args: argparse.Namespace, flag: str, length: int, default: Optional[Sequence[Fraction]] = None) -> List[Fraction]:
    text = getattr(args, flag)
    if text is None:
        if default is None:
            raise ParseError(f"{args.command} needs --{flag}")
        return list(default)
    values = parse_vector(text)
    if len(values) != length:
        raise ParseError(f"--{flag} has {len(values)} entries, expected {length}")
    return values


def _face(args: argparse.Namespace, p: HPolytope) -> FaceRef:
    facets = tuple(sorted(parse_indices(_required(args, "face"), p.n)))
    return FaceRef(facets, p.d - len(facets))


def _indices(args: argparse.Namespace, flag: str, n: int) -> List[int]:
    return sorted(parse_indices(_required(args, flag), n))


def _poly_data(p: Any) -> Dict[str, Any]:
    return {
        "text": str(p),
        "variables": list(p.vars),
        "terms": [[list(e), c] for e, c in p.items()],
    }


# commands


def cmd_adjoint(args: argparse.Namespace, conf: ConfigManager) -> Output:
    adj = adjoint(_fan(args))
    return Output(str(adj), _poly_data(adj))


def cmd_amplitude(args: argparse.Namespace, conf: ConfigManager) -> Output:
    amp = amplitude(_fan(args))
    terms = [{"coefficient": c, "cone": list(cone)} for c, cone in amp.terms]
    return Output(str(amp), {"text": str(amp), "terms": terms})


def cmd_evaluate(args: argparse.Namespace, conf: ConfigManager) -> Output:
    fan = _fan(args)
    value = evaluate_amplitude(fan, _vector(args, "x", fan.n))
    return Output(format_rat(value), {"value": value})


def cmd_restrict(args: argparse.Namespace, conf: ConfigManager) -> Output:
    if args.face is not None:
        p = _polytope(args)
        result = face_restrict(p, _face(args, p))
    else:
        fan = _fan(args)
        result = restrict_adjoint(fan, _indices(args, "tau", fan.n))
    lines = [
        f"prefactor: {result.prefactor}",
        f"star adjoint: {result.star_adjoint}",
        f"c_tau: {format_rat(result.c_tau)}",
        f"restriction: {result.expand()}",
    ]
    data = {
        "prefactor": str(result.prefactor),
        "star_adjoint": str(result.star_adjoint),
        "c_tau": result.c_tau,
        "restriction": _poly_data(result.expand()),
    }
    return Output("\n".join(lines), data)


def cmd_residue(args: argparse.Namespace, conf: ConfigManager) -> Output:
    fan = _fan(args)
    res = residue(fan, _indices(args, "tau", fan.n))
    text = f"{format_rat(res.c_inv)} * ({res.amplitude})"
    return Output(text, {"c_inv": res.c_inv, "amplitude": str(res.amplitude)})


def cmd_warren(args: argparse.Namespace, conf: ConfigManager) -> Output:
    obj = _load(args)
    if isinstance(obj, HPolytope):
        fan, default = normal_fan(obj), obj.z
    else:
        fan, default = obj, None
    w = warren_adjoint(fan, _vector(args, "z", fan.n, default))
    return Output(str(w), {"z": list(w.z), "degree": w.degree, "adjoint": _poly_data(w.poly)})


def cmd_dual_volume(args: argparse.Namespace, conf: ConfigManager) -> Output:
    p = _polytope(args)
    value = dual_volume_oracle(p, _vector(args, "x", p.n))
    return Output(format_rat(value), {"value": value})


def cmd_irrelevant(args: argparse.Namespace, conf: ConfigManager) -> Output:
    gens = irrelevant_generators(_fan(args))
    return Output(str(gens), {"generators": [list(g) for g in gens.generators]})


def cmd_primitive_collections(args: argparse.Namespace, conf: ConfigManager) -> Output:
    collections = primitive_collections(_fan(args))
    return Output(" ".join(str(pc) for pc in collections), {"collections": [list(pc.rays) for pc in collections]})


def cmd_interpolate(args: argparse.Namespace, conf: ConfigManager) -> Output:
    poly = interpolate_adjoint(_polytope(args))
    return Output(str(poly), _poly_data(poly))


def cmd_split(args: argparse.Namespace, conf: ConfigManager) -> Output:
    p = _polytope(args)
    face = _face(args, p)
    split = split_restriction(p, face)
    if split is None:
        return Output(f"face {face} is not a product of simplices", {"split": None})
    data = {"prefactor": str(split.prefactor), "factors": [str(f) for f in split.factors]}
    return Output(str(split), {"split": data})


def cmd_walls(args: argparse.Namespace, conf: ConfigManager) -> Output:
    walls = deformation_cone(_polytope(args))
    defining = facet_defining(walls)
    lines = []
    data = []
    for i, (w, facet) in enumerate(zip(walls, defining), start=1):
        note = "" if facet else "  (redundant)"
        lines.append(f"{i}. {w}{note}")
        data.append({"face": list(w.face.facets), "form": str(w.signed()), "facet_defining": facet})
    return Output("\n".join(lines), {"walls": data})


def cmd_def_check(args: argparse.Namespace, conf: ConfigManager) -> Output:
    p = _polytope(args)
    result = membership(deformation_cone(p), _vector(args, "z", p.n, p.z))
    return Output(str(result), {"status": result.status.value, "walls": list(result.walls)})


def cmd_chamber_spaces(args: argparse.Namespace, conf: ConfigManager) -> Output:
    found = chamber_spaces(_polytope(args))
    lines = [f"{face}: {space}" for face, space in found]
    data = [{"face": list(face.facets), "dim": space.dimension, "space": str(space)} for face, space in found]
    return Output("\n".join(lines), {"spaces": data})


def cmd_shrink(args: argparse.Namespace, conf: ConfigManager) -> Output:
    p = _polytope(args)
    v = shrink_vertex(p, _face(args, p), _vector(args, "z", p.n))
    return Output(format_vector(v), {"vertex": list(v)})


def cmd_degenerate(args: argparse.Namespace, conf: ConfigManager) -> Output:
    p = _polytope(args)
    report = degeneration_check(p, _face(args, p), _vector(args, "z", p.n))
    data = {
        "degenerate": report.degenerate,
        "adjoint": str(report.adjoint) if report.adjoint else None,
        "lost_facets": list(report.lost_facets),
        "splits": [{"facet": s.facet, "factor": str(s.factor), "quotient": str(s.quotient)} for s in report.splits],
        "vertex": list(report.vertex) if report.vertex is not None else None,
    }
    return Output(str(report), data)


def cmd_partials(args: argparse.Namespace, conf: ConfigManager) -> Output:
    fan = _fan(args)
    derivatives = partials(fan)
    lines = [f"d/d{label}: {g}" for label, g in zip(fan.labels, derivatives)]
    return Output("\n".join(lines), {label: str(g) for label, g in zip(fan.labels, derivatives)})


def cmd_sing_system(args: argparse.Namespace, conf: ConfigManager) -> Output:
    fan = _fan(args)
    if args.J is not None:
        systems = [sing_system(fan, PrimitiveCollection(tuple(_indices(args, "J", fan.n))))]
    else:
        systems = sing_systems(fan)
    cover = factored_cover(systems)
    data = [
        {
            "collection": list(s.collection.rays),
            "zero": list(s.zero_vars),
            "equations": [{"ray": eq.ray, "equation": str(eq)} for eq in s.equations],
        }
        for s in cover
    ]
    return Output("\n".join(str(s) for s in cover), {"systems": data})


def cmd_sing_decompose(args: argparse.Namespace, conf: ConfigManager) -> Output:
    components = decompose_linear(_fan(args))
    summary = summarize_components(components)
    lines = [str(c) for c in components] + [summary]
    data = [
        {"dim": c.dimension, "space": str(c.space), "collections": [list(pc.rays) for pc in c.provenance]}
        for c in components
    ]
    return Output("\n".join(lines), {"components": data, "summary": summary})


def cmd_sing_check(args: argparse.Namespace, conf: ConfigManager) -> Output:
    verdict = sing_in_Z_check(_fan(args))
    data = {
        "status": verdict.status.value,
        "reason": verdict.reason,
        "witness": list(verdict.witness) if verdict.witness is not None else None,
    }
    return Output(str(verdict), data)


def cmd_ngon_check(args: argparse.Namespace, conf: ConfigManager) -> Output:
    fan = _fan(args)
    generic = ngon_generic_check(fan)
    first, second = polygon_products(fan)
    text = ("generic" if generic else "special") + f" (products {format_rat(first)}, {format_rat(second)})"
    return Output(text, {"generic": generic, "products": [first, second]})


def cmd_smooth_check(args: argparse.Namespace, conf: ConfigManager) -> Output:
    p = _polytope(args)
    verdict = warren_smoothness_d2(p, _vector(args, "z", p.n, p.z), conf)
    data = {
        "status": verdict.status.value,
        "point": list(verdict.point) if verdict.point is not None else None,
        "attempts": verdict.attempts,
        "gcds": list(verdict.gcds),
    }
    return Output(str(verdict), data)


def cmd_santalo(args: argparse.Namespace, conf: ConfigManager) -> Output:
    p = _polytope(args)
    if args.tol is not None:
        conf["santalo.tol"] = args.tol
    result = santalo_point(p, conf=conf)
    coords = ", ".join(f"{c:.12g}" for c in result.point)
    text = f"({coords})  gradient norm {result.grad_norm:.3e} after {result.iterations} iterations"
    data = {
        "point": list(result.point),
        "grad_norm": result.grad_norm,
        "iterations": result.iterations,
        "log_amplitude": result.value,
    }
    return Output(text, data)


def cmd_export(args: argparse.Namespace, conf: ConfigManager) -> Output:
    "The input in canonical form: sorted 0-based cones, exact coordinates"
    obj = _load(args)
    data = dump_polytope(obj) if isinstance(obj, HPolytope) else dump_fan(obj)
    return Output(json.dumps(data, indent=2), data)


def cmd_normal_fan(args: argparse.Namespace, conf: ConfigManager) -> Output:
    data = dump_fan(normal_fan(_polytope(args)))
    return Output(json.dumps(data, indent=2), data)


def cmd_verify(args: argparse.Namespace, conf: ConfigManager) -> Output:
    names = args.check or None
    if names:
        unknown = [n for n in names if n not in checks]
        if unknown:
            raise ParseError(f"unknown checks {unknown}; known: {', '.join(checks)}")
    results = run_checks(conf, names)
    data = [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]
    failed = any(not r.passed for r in results)
    return Output(format_table(results), {"checks": data}, 3 if failed else 0)


# name -> (handler, help, extra flags)
commands: Dict[str, Any] = {
    "adjoint": (cmd_adjoint, "universal adjoint; terms in graded lexicographic order", []),
    "amplitude": (cmd_amplitude, "toric amplitude as a sum over maximal cones", []),
    "evaluate": (cmd_evaluate, "evaluate the amplitude at --x", ["x"]),
    "restrict": (cmd_restrict, "restrict the adjoint to a cone (--tau) or polytope face (--face)", ["tau", "face"]),
    "residue": (cmd_residue, "residue of the amplitude along a cone", ["tau"]),
    "warren": (cmd_warren, "Warren adjoint adj(y) = Adj(U y + z)", ["z"]),
    "dual-volume": (cmd_dual_volume, "normalized volume of the polar dual of P_x", ["x"]),
    "irrelevant": (cmd_irrelevant, "minimal generators of the irrelevant ideal", []),
    "primitive-collections": (cmd_primitive_collections, "primitive collections", []),
    "interpolate": (cmd_interpolate, "adjoint from the edge planes", []),
    "split": (cmd_split, "linear factorization on the coordinate space of a face", ["face"]),
    "walls": (cmd_walls, "wall inequalities of the deformation cone", []),
    "def-check": (cmd_def_check, "locate z relative to the deformation cone", ["z"]),
    "chamber-spaces": (cmd_chamber_spaces, "linear spaces of the simplex faces", []),
    "shrink": (cmd_shrink, "vertex a simplex face shrinks to", ["face", "z"]),
    "degenerate": (cmd_degenerate, "adjoint behaviour on a wall of the deformation cone", ["face", "z"]),
    "partials": (cmd_partials, "partial derivatives of the adjoint", []),
    "sing-system": (cmd_sing_system, "singular locus equations on primitive collections", ["J"]),
    "sing-decompose": (cmd_sing_decompose, "linear components of Sing(A) in Z(Sigma)", []),
    "sing-check": (cmd_sing_check, "whether Sing(A) lies in Z(Sigma)", []),
    "ngon-check": (cmd_ngon_check, "genericity of a polygon fan", []),
    "smooth-check": (cmd_smooth_check, "smoothness of the Warren adjoint curve", ["z"]),
    "santalo": (cmd_santalo, "Santalo point of a polytope", ["tol"]),
    "export": (cmd_export, "rewrite the input file in canonical form", []),
    "normal-fan": (cmd_normal_fan, "normal fan of a polytope as a fan file", []),
    "verify": (cmd_verify, "run the verification checks", []),
}

FLAGS: Dict[str, Dict[str, Any]] = {
    "x": {"help": "comma-separated rationals, one per ray"},
    "z": {"help": "comma-separated rationals, one per facet"},
    "tau": {"help": "comma-separated 1-based ray indices of a cone"},
    "face": {"help": "comma-separated 1-based indices of the facets containing a face"},
    "J": {"help": "comma-separated 1-based ray indices of a primitive collection"},
    "tol": {"type": float, "help": "Newton decrement tolerance"},
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "structured"], default=None)
    common.add_argument("--one-based", action="store_true", help="cone indices in the file are 1-based")
    common.add_argument("--strict", action="store_true", help="also check that maximal cones meet properly")
    common.add_argument("--config", help="JSON file overriding config.json")
    common.add_argument("--verbose", action="store_true")
    common.add_argument("--debug", action="store_true")

    parser = _Parser(prog="toric_amplitudes", description="Toric amplitudes and universal adjoints")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (handler, help_text, flags) in commands.items():
        cmd = sub.add_parser(name, help=help_text, parents=[common])
        if name == "verify":
            cmd.add_argument("--check", action="append", help="run only this check; repeatable")
        else:
            cmd.add_argument("file", help="fan or polytope file, or a fixture name")
        for flag in flags:
            cmd.add_argument(f"--{flag}", **FLAGS[flag])
        cmd.set_defaults(handler=handler)
    return parser


def _setup_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.debug else logging.INFO if args.verbose else logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def _emit(output: Output, structured: bool, out: IO[str]) -> None:
    if structured:
        out.write(json.dumps(jsonable(output.data), sort_keys=True, indent=2) + "\n")
    else:
        out.write(output.text + "\n")


def run(argv: Optional[Sequence[str]] = None, out: Optional[IO[str]] = None, err: Optional[IO[str]] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _setup_logging(args)
        conf = ConfigManager(args.config)
        structured = (args.format or conf["output.format"]) == "structured"
        output = args.handler(args, conf)
    except ToricError as e:
        err.write(f"error: {e}\n")
        return e.exit_code
    _emit(output, structured, out)
    return output.exit_code


def main() -> int:
    return run()
