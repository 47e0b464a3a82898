"""Command-line front end: load a cone file, run one command, print a report.

Every command emits a report with the same shape::

    {"command": ..., "space": {...}, "result": {...},
     "checks": [{"name": ..., "passed": ...}, ...], "status": 0}

Rationals are always strings ("3/4") and vectors are comma-joined strings
("1,-1/2,0"), so reports are exact and serialise deterministically.
Exit codes: 0 success, 1 domain error, 2 theorem violation or failed check,
3 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from ordercone.bands import (
    Band,
    band_closure,
    disjoint_complement,
    enumerate_bands,
    enumerate_bands_brute_force,
)
from ordercone.errors import DomainError, OrderConeError, ParseError, TheoremViolation
from ordercone.lattice import (
    cone_seed,
    hierarchy_report,
    is_vector_lattice,
    pervasive_at,
    weakly_pervasive_witness,
)
from ordercone.projections import (
    boolean_law_failures,
    decompose,
    enumerate_band_projections,
)
from ordercone.rational import Mat, Vec, format_rat, format_vec, neg, parse_rat, parse_vec, rank
from ordercone.space import OrderedSpace, validate

EXIT_OK, EXIT_DOMAIN, EXIT_THEOREM, EXIT_PARSE = 0, 1, 2, 3

BRUTE_FORCE_FACET_LIMIT = 8


# -- input --------------------------------------------------------------------

def _fixture_text(name: str) -> Optional[str]:
    stem = name[:-5] if name.endswith(".json") else name
    entry = resources.files("ordercone") / "fixtures" / f"{stem}.json"
    return entry.read_text(encoding="utf-8") if entry.is_file() else None


def read_source(source: Optional[str]) -> tuple[str, str]:
    """Text of a cone file: a path, a bundled fixture name, or stdin for None/"-"."""
    if source is None or source == "-":
        return sys.stdin.read(), "<stdin>"
    path = Path(source)
    if path.is_file():
        try:
            return path.read_text(encoding="utf-8"), source
        except UnicodeDecodeError as exc:
            raise ParseError(f"{source}: not UTF-8 ({exc.reason})") from None
    text = _fixture_text(path.name) if path.parent == Path(".") else None
    if text is None:
        raise ParseError(f"{source}: no such file or bundled fixture")
    return text, source


def parse_spec(text: str, origin: str = "<input>") -> dict:
    """Parse and type-check a cone file; returns ``{dim, generators, name, description}``."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{origin}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ParseError(f"{origin}: top level must be an object")
    dim = raw.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"{origin}: field 'dim' must be a positive integer")
    gens = raw.get("generators")
    if not isinstance(gens, list) or not gens:
        raise ParseError(f"{origin}: field 'generators' must be a non-empty list")
    parsed = []
    for i, g in enumerate(gens):
        if not isinstance(g, list):
            raise ParseError(f"{origin}: field generators[{i}] must be a list")
        if len(g) != dim:
            raise ParseError(f"{origin}: field generators[{i}] has length {len(g)}, expected {dim}")
        row = []
        for j, entry in enumerate(g):
            where = f"{origin}: field generators[{i}][{j}]"
            if isinstance(entry, bool) or not isinstance(entry, (str, int)):
                raise ParseError(f"{where}: expected a rational string, got {entry!r}")
            try:
                row.append(parse_rat(str(entry)))
            except ParseError as exc:
                raise ParseError(f"{where}: {exc}") from None
        parsed.append(tuple(row))
    for key in ("name", "description"):
        if key in raw and not isinstance(raw[key], str):
            raise ParseError(f"{origin}: field '{key}' must be a string")
    return {
        "dim": dim,
        "generators": tuple(parsed),
        "name": raw.get("name", Path(origin).stem),
        "description": raw.get("description"),
    }


def load_spec(source: Optional[str]) -> tuple[dict, OrderedSpace]:
    text, origin = read_source(source)
    spec = parse_spec(text, origin)
    return spec, validate(spec["generators"], spec["dim"])


def _vector(text: str, dim: int, what: str) -> Vec:
    v = parse_vec(text)
    if len(v) != dim:
        raise ParseError(f"{what}: expected {dim} entries, got {len(v)}")
    return v


def _vector_set(text: str, dim: int, what: str) -> list[Vec]:
    parts = [p for p in text.split(";") if p.strip()]
    if not parts:
        raise ParseError(f"{what}: empty set")
    return [_vector(p, dim, what) for p in parts]


def _pairs(text: str, dim: int) -> list[tuple[Vec, Vec]]:
    out = []
    for chunk in (p for p in text.split(";") if p.strip()):
        halves = chunk.split(":")
        if len(halves) != 2:
            raise ParseError(f"--pairs: expected 'x:y', got {chunk!r}")
        out.append((_vector(halves[0], dim, "--pairs"), _vector(halves[1], dim, "--pairs")))
    if not out:
        raise ParseError("--pairs: no pairs given")
    return out


# -- serialisation ------------------------------------------------------------

def _vecs(m: Mat) -> list[str]:
    return [format_vec(v) for v in m]


def _band(b: Band) -> dict:
    return {
        "id": b.id,
        "dim": b.dim,
        "basis": _vecs(b.basis),
        "directed": b.directed,
        "projection_band": b.is_projection_band,
    }


def _summary(spec: dict, space: OrderedSpace) -> dict:
    return {
        "name": spec.get("name"),
        "dim": space.dim,
        "facet_count": len(space.facets),
        "facets": _vecs(space.facets),
        "extreme_rays": _vecs(space.extreme_rays),
    }


class Checks:
    """Ordered ledger of named pass/fail checks."""

    def __init__(self) -> None:
        self.entries: list[dict] = []

    def add(self, name: str, passed: bool) -> None:
        self.entries.append({"name": name, "passed": bool(passed)})

    @property
    def ok(self) -> bool:
        return all(e["passed"] for e in self.entries)


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _text_lines(value: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        out = []
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and item:
                out.append(f"{pad}{key}:")
                out.extend(_text_lines(item, indent + 1))
            else:
                out.append(f"{pad}{key}: {_scalar(item)}")
        return out
    if isinstance(value, list):
        out = []
        for item in value:
            if isinstance(item, (dict, list)) and item:
                out.append(f"{pad}-")
                out.extend(_text_lines(item, indent + 1))
            else:
                out.append(f"{pad}- {_scalar(item)}")
        return out
    return [f"{pad}{_scalar(value)}"]


def _scalar(v: Any) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, dict)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    if "error" in report:
        err = report["error"]
        lines.append(f"error: {err['type']}: {err['message']}")
    if report.get("space"):
        lines.append("space:")
        lines.extend(_text_lines(report["space"], 1))
    if "result" in report:
        lines.append("result:")
        lines.extend(_text_lines(report["result"], 1))
    for c in report.get("checks", []):
        lines.append(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['name']}")
    lines.append(f"status: {report['status']}")
    return "\n".join(lines) + "\n"


# -- commands -----------------------------------------------------------------

def cmd_validate(space: OrderedSpace, args, checks: Checks) -> dict:
    v = space.validation
    checks.add("cone is pointed", v.pointed)
    checks.add("cone is generating", v.generating)
    return {"pointed": v.pointed, "generating": v.generating, "preriesz": v.preriesz}


def cmd_facets(space: OrderedSpace, args, checks: Checks) -> dict:
    checks.add("extreme rays satisfy every facet inequality",
               all(space.contains_positive(r) for r in space.extreme_rays))
    checks.add("every facet is tight on dim-1 independent extreme rays", all(
        rank([r for r, vals in zip(space.extreme_rays, space.ray_values) if vals[i] == 0])
        == space.dim - 1
        for i in range(len(space.facets))
    ))
    return {"facets": _vecs(space.facets), "extreme_rays": _vecs(space.extreme_rays)}


def cmd_bands(space: OrderedSpace, args, checks: Checks) -> dict:
    bands = enumerate_bands(space)
    checks.add("every band equals its double complement", all(
        band_closure(space, b.basis, check=False).basis == b.basis for b in bands
    ))
    if len(space.facets) <= BRUTE_FORCE_FACET_LIMIT:
        brute = enumerate_bands_brute_force(space)
        checks.add("flat search agrees with subset enumeration",
                   [b.basis for b in brute] == [b.basis for b in bands])
    return {
        "count": len(bands),
        "directed_count": sum(b.directed for b in bands),
        "bands": [_band(b) for b in bands],
    }


def _projection_report(space: OrderedSpace, checks: Checks):
    report = enumerate_band_projections(space)
    checks.add("projection count is 2^m", len(report.projections) == 2 ** report.m)
    checks.add("m does not exceed dim", report.m <= space.dim)
    return report


def cmd_projections(space: OrderedSpace, args, checks: Checks) -> dict:
    report = _projection_report(space, checks)
    return {
        "count": len(report.projections),
        "m": report.m,
        "is_lattice": report.is_lattice,
        "minimal": list(report.minimal_indices),
        "projections": [
            {
                "index": k,
                "rank": p.rank,
                "matrix": _vecs(p.matrix),
                "range_band": p.range_band.id,
                "range_basis": _vecs(p.range_band.basis),
            }
            for k, p in enumerate(report.projections)
        ],
    }


def cmd_boolean_algebra(space: OrderedSpace, args, checks: Checks) -> dict:
    report = _projection_report(space, checks)
    failures = boolean_law_failures(report)
    checks.add("Boolean algebra laws hold on the tables", not failures)
    return {
        "size": len(report.projections),
        "m": report.m,
        "meet": [list(r) for r in report.meet_table],
        "join": [list(r) for r in report.join_table],
        "complement": list(report.complement_map),
        "law_failures": failures,
    }


def cmd_decompose(space: OrderedSpace, args, checks: Checks) -> dict:
    report = enumerate_band_projections(space)
    dec = decompose(space, report)
    checks.add("one factor per minimal band projection", dec.m == report.m)
    checks.add("isomorphism is bipositive", True)
    checks.add("factor dimensions sum to dim", sum(len(f.basis) for f in dec.factors) == space.dim)
    return {
        "m": dec.m,
        "isomorphism": _vecs(dec.isomorphism),
        "factors": [
            {
                "dim": f.space.dim,
                "basis": _vecs(f.basis),
                "facets": _vecs(f.space.facets),
                "extreme_rays": _vecs(f.space.extreme_rays),
            }
            for f in dec.factors
        ],
    }


def cmd_is_lattice(space: OrderedSpace, args, checks: Checks) -> dict:
    verdict = is_vector_lattice(space)
    r = verdict.routes
    checks.add("lattice routes agree", len({
        r.simplicial, r.rank1_census == space.dim, r.m_equals_n, r.extreme_ray_pairwise_disjoint,
    }) == 1)
    witness = None
    if verdict.witness is not None:
        x, y = verdict.witness
        checks.add("witness is symmetric-interval-disjoint", space.is_symmetric_interval_disjoint(x, y))
        checks.add("witness is not disjoint", not space.is_disjoint(x, y, "oracle", witness=False))
        witness = [format_vec(x), format_vec(y)]
    return {
        "is_lattice": verdict.is_lattice,
        "routes": {
            "simplicial": r.simplicial,
            "rank1_census": r.rank1_census,
            "m_equals_n": r.m_equals_n,
            "extreme_ray_pairwise_disjoint": r.extreme_ray_pairwise_disjoint,
        },
        "witness": witness,
    }


def cmd_disjoint(space: OrderedSpace, args, checks: Checks) -> dict:
    x = _vector(args.x, space.dim, "--x")
    y = _vector(args.y, space.dim, "--y")
    verdict = space.is_disjoint(x, y, args.method)
    other = "fast" if args.method == "oracle" else "oracle"
    checks.add(f"{args.method} and {other} methods agree",
               space.is_disjoint(x, y, other, witness=False).disjoint == verdict.disjoint)
    w = verdict.witness
    if w is not None and space.contains_positive(x) and space.contains_positive(y):
        checks.add("witness is a common lower bound", space.leq(w, x) and space.leq(w, y))
        checks.add("witness is not below zero", not space.contains_positive(neg(w)))
    return {
        "disjoint": verdict.disjoint,
        "method": verdict.method,
        "witness": None if w is None else format_vec(w),
    }


def cmd_complement(space: OrderedSpace, args, checks: Checks) -> dict:
    vectors = _vector_set(args.set, space.dim, "--set")
    band = disjoint_complement(space, vectors, check=True)
    checks.add("complement validated against the disjointness oracle", True)
    return {"band": _band(band)}


def cmd_closure(space: OrderedSpace, args, checks: Checks) -> dict:
    vectors = _vector_set(args.set, space.dim, "--set")
    band = band_closure(space, vectors, check=True)
    checks.add("closure validated against the disjointness oracle", True)
    checks.add("closure contains the set", all(band.contains(v) for v in vectors))
    return {"band": _band(band)}


def cmd_inf(space: OrderedSpace, args, checks: Checks) -> dict:
    vectors = _vector_set(args.set, space.dim, "--set")
    g = space.infimum(vectors)
    if g is not None:
        checks.add("infimum is a lower bound", all(space.leq(g, v) for v in vectors))
    return {"exists": g is not None, "infimum": None if g is None else format_vec(g)}


def cmd_sup(space: OrderedSpace, args, checks: Checks) -> dict:
    vectors = _vector_set(args.set, space.dim, "--set")
    g = space.supremum(vectors)
    if g is not None:
        checks.add("supremum is an upper bound", all(space.leq(v, g) for v in vectors))
    return {"exists": g is not None, "supremum": None if g is None else format_vec(g)}


def cmd_hierarchy(space: OrderedSpace, args, checks: Checks) -> dict:
    rows = hierarchy_report(space, _pairs(args.pairs, space.dim))
    checks.add("disjoint implies symmetric-interval-disjoint implies D-disjoint", True)
    return {
        "rows": [
            {
                "x": format_vec(r.x),
                "y": format_vec(r.y),
                "disjoint": r.disjoint,
                "symmetric_interval_disjoint": r.symmetric_interval_disjoint,
                "D_disjoint": r.D_disjoint,
                "separates": r.separates,
            }
            for r in rows
        ],
    }


def cmd_pervasive_at(space: OrderedSpace, args, checks: Checks) -> dict:
    b = _vector(args.b, space.dim, "--b")
    verdict, x = pervasive_at(space, b)
    if x is not None:
        checks.add("witness is positive and non-zero", space.contains_positive(x) and any(x))
    return {"b": format_vec(b), "pervasive": verdict, "witness": None if x is None else format_vec(x)}


def cmd_witness(space: OrderedSpace, args, checks: Checks) -> dict:
    pair = weakly_pervasive_witness(space, seed=args.seed)
    if pair is None:
        return {"witness": None}
    x, y = pair
    checks.add("witness is D-disjoint", space.is_D_disjoint(x, y))
    checks.add("witness is not disjoint", not space.is_disjoint(x, y, "oracle", witness=False))
    return {"witness": [format_vec(x), format_vec(y)]}


def cmd_random(args, checks: Checks) -> tuple[dict, dict, OrderedSpace]:
    seed = cone_seed(args.dim, args.rays, args.seed)
    space = validate(seed.rays, seed.dim)
    checks.add("random space is pre-Riesz", space.validation.preriesz)
    spec = {
        "name": f"random-{args.dim}-{args.rays}-{args.seed}",
        "dim": seed.dim,
        "generators": [[format_rat(q) for q in r] for r in seed.rays],
    }
    return spec, {"spec": spec}, space


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "facets": cmd_facets,
    "bands": cmd_bands,
    "projections": cmd_projections,
    "boolean-algebra": cmd_boolean_algebra,
    "decompose": cmd_decompose,
    "is-lattice": cmd_is_lattice,
    "disjoint": cmd_disjoint,
    "complement": cmd_complement,
    "closure": cmd_closure,
    "inf": cmd_inf,
    "sup": cmd_sup,
    "hierarchy": cmd_hierarchy,
    "pervasive-at": cmd_pervasive_at,
    "witness": cmd_witness,
}


# -- argument parsing ---------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ParseError(f"usage: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    spaced = _Parser(add_help=False, parents=[common])
    spaced.add_argument("spec", nargs="?", help="cone file or bundled fixture name (stdin if omitted)")
    spaced.add_argument("--input", help="cone file (alternative to the positional argument)")

    parser = _Parser(prog="ordercone", description="Bands and band projections of polyhedral cones.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "validate": "check that the cone is pointed and generating",
        "facets": "facet functionals and extreme rays",
        "bands": "enumerate all bands",
        "projections": "enumerate all band projections",
        "boolean-algebra": "meet/join/complement tables of the band projections",
        "decompose": "split into minimal projection bands",
        "is-lattice": "decide the vector-lattice property",
        "disjoint": "decide x ⊥ y",
        "complement": "disjoint complement of a set",
        "closure": "band generated by a set",
        "inf": "infimum of a set",
        "sup": "supremum of a set",
        "hierarchy": "disjointness hierarchy for pairs",
        "pervasive-at": "pervasiveness at a point",
        "witness": "search for a D-disjoint pair that is not disjoint",
    }
    subs = {name: sub.add_parser(name, parents=[spaced], help=text) for name, text in helps.items()}
    subs["disjoint"].add_argument("--x", required=True)
    subs["disjoint"].add_argument("--y", required=True)
    subs["disjoint"].add_argument("--method", choices=("oracle", "fast"), default="oracle")
    for name in ("complement", "closure", "inf", "sup"):
        subs[name].add_argument("--set", required=True, help="vectors separated by ';'")
    subs["hierarchy"].add_argument("--pairs", required=True, help="pairs 'x:y' separated by ';'")
    subs["pervasive-at"].add_argument("--b", required=True)
    subs["witness"].add_argument("--seed", type=int, default=0)
    rnd = sub.add_parser("random", parents=[common], help="seeded random cone file")
    rnd.add_argument("--dim", type=int, required=True)
    rnd.add_argument("--rays", type=int, required=True)
    rnd.add_argument("--seed", type=int, default=0)
    return parser


VECTOR_OPTIONS = ("--x", "--y", "--b", "--set", "--pairs")


def _attach_vector_values(argv: list[str]) -> list[str]:
    # "--b -1,0,1" would read as an unknown option; glue it to its flag
    out: list[str] = []
    k = 0
    while k < len(argv):
        if argv[k] in VECTOR_OPTIONS and k + 1 < len(argv):
            out.append(f"{argv[k]}={argv[k + 1]}")
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def _wants_text(argv: Sequence[str]) -> bool:
    for k, a in enumerate(argv):
        if a == "--format=text" or (a == "--format" and k + 1 < len(argv) and argv[k + 1] == "text"):
            return True
    return False


def run(argv: Sequence[str]) -> tuple[dict, int]:
    """Execute one command; returns the report and the exit code."""
    argv = _attach_vector_values(list(argv))
    command = argv[0] if argv else None
    report: dict = {"command": command}
    checks = Checks()
    try:
        args = build_parser().parse_args(argv)
        report["command"] = args.command
        if args.command == "random":
            spec, result, space = cmd_random(args, checks)
        else:
            if args.spec is not None and args.input is not None:
                raise ParseError("give the cone file either positionally or with --input")
            spec, space = load_spec(args.input if args.input is not None else args.spec)
            result = COMMANDS[args.command](space, args, checks)
        report["space"] = _summary(spec, space)
        report["result"] = result
        report["checks"] = checks.entries
        status = EXIT_OK if checks.ok else EXIT_THEOREM
    except ParseError as exc:
        status = _error(report, exc, EXIT_PARSE)
    except DomainError as exc:
        status = _error(report, exc, EXIT_DOMAIN)
    except TheoremViolation as exc:
        status = _error(report, exc, EXIT_THEOREM)
    except OrderConeError as exc:
        status = _error(report, exc, EXIT_DOMAIN)
    report["status"] = status
    return report, status


def _error(report: dict, exc: Exception, status: int) -> int:
    report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if argv and argv[0] in ("-h", "--help"):
        build_parser().print_help()
        return EXIT_OK
    if len(argv) >= 2 and argv[1] in ("-h", "--help"):
        try:
            build_parser().parse_args(argv)
        except SystemExit:
            return EXIT_OK
    report, status = run(argv)
    if _wants_text(argv):
        text = render_text(report)
        (sys.stderr if "error" in report else sys.stdout).write(text)
    else:
        sys.stdout.write(dumps(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
