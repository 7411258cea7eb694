"""Command-line front end: read a system document, run one command, print a report."""
from __future__ import annotations

import argparse
import hashlib
import json
import sys as _sys
from typing import Any

from . import invariants, ktheory, presets, semigroup, topograph
from .boolean_core import (
    AT_INFINITY,
    DefinableIdeal,
    FiniteAtoms,
    FiniteCofinite,
    PrincipalIdeal,
)
from .dynamics import (
    KILL,
    AtomAction,
    BooleanDynamicalSystem,
    Shift,
    TailAction,
    elem_payload,
    is_regular,
    validate_system,
)
from .errors import (
    Incomplete,
    InputError,
    SchemaError,
    UnsupportedBackend,
    ValidationError,
)

COMMANDS = (
    "validate", "spectrum", "graph", "classify", "regular", "ideals", "cycles", "simplicity",
    "cofinal", "ktheory", "quotient", "semigroup-eval", "cover-check", "boundary-paths",
)
FINITE_KEYS = {"backend", "atoms", "labels", "actions"}
COFINITE_KEYS = {"backend", "window", "universe", "labels", "actions"}


class Undecided(Exception):
    """Carries a computed-but-inconclusive payload out to exit code 2."""

    def __init__(self, payload):
        super().__init__("undecided")
        self.payload = payload


# -- documents ---------------------------------------------------------------


def _need(doc: dict, key: str, kind, where: str = "document"):
    if key not in doc:
        raise SchemaError(f"{where} is missing {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise SchemaError(f"{where}: {key!r} has the wrong type")
    return value


def _strings(values, where: str) -> list[str]:
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        raise SchemaError(f"{where} must be a list of strings")
    return values


def _cofinite_elem(backend: FiniteCofinite, payload, where: str):
    try:
        if isinstance(payload, list) and all(isinstance(i, int) for i in payload):
            return backend.finite(payload)
        if isinstance(payload, dict) and set(payload) == {"cofinite"}:
            return backend.cofinite(payload["cofinite"])
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from None
    raise SchemaError(f"{where}: expected a list of integers or {{\"cofinite\": [...]}}")


def _preset_system(block) -> BooleanDynamicalSystem:
    if not isinstance(block, dict) or len(block) != 1:
        raise SchemaError("preset must be an object with exactly one key")
    (kind, body), = block.items()
    if not isinstance(body, dict):
        raise SchemaError(f"preset {kind!r} must be an object")
    if kind == "graph":
        edges = [tuple(e) for e in _need(body, "edges", list, "graph preset")]
        return presets.from_directed_graph(_strings(body.get("vertices"), "graph vertices"), edges)
    if kind == "labelled-graph":
        edges = [tuple(e) for e in _need(body, "edges", list, "labelled-graph preset")]
        return presets.from_labelled_graph(
            _strings(body.get("vertices"), "labelled-graph vertices"), edges, body.get("generators", [])
        )
    if kind == "sft":
        shift_input = presets.parse_sft(
            _strings(body.get("alphabet"), "sft alphabet"),
            _strings(body.get("forbidden", []), "sft forbidden"),
            _need(body, "memory", int, "sft preset"),
        )
        return presets.from_sft(shift_input)
    if kind == "partial-homeo":
        backend = FiniteAtoms(tuple(_strings(body.get("atoms"), "partial-homeo atoms")))
        try:
            domain = backend.element(_strings(body.get("domain"), "partial-homeo domain"))
            codomain = backend.element(_strings(body.get("codomain"), "partial-homeo codomain"))
        except ValueError as exc:
            raise SchemaError(str(exc)) from None
        return presets.from_partial_homeo(backend, domain, codomain, _need(body, "phi", dict), body.get("label", "a"))
    raise SchemaError(f"unknown preset {kind!r}")


def system_from_document(doc) -> BooleanDynamicalSystem:
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    if "preset" in doc:
        extra = set(doc) - {"preset", "backend"}
        if extra:
            raise SchemaError(f"preset documents take no other keys: {sorted(extra)}")
        return _preset_system(doc["preset"])
    backend_kind = _need(doc, "backend", str)
    labels = _strings(_need(doc, "labels", list), "labels")
    actions = _need(doc, "actions", dict)
    if set(actions) != set(labels):
        raise SchemaError("actions must be given for exactly the declared labels")

    if backend_kind == "finite":
        extra = set(doc) - FINITE_KEYS
        if extra:
            raise SchemaError(f"unexpected keys {sorted(extra)}")
        atoms = _strings(_need(doc, "atoms", list), "atoms")
        try:
            backend = FiniteAtoms(tuple(atoms))
            built = {}
            for label in labels:
                table = actions[label]
                if not isinstance(table, dict):
                    raise SchemaError(f"action {label!r} must map atoms to atom lists")
                built[label] = AtomAction(
                    backend,
                    {a: backend.element(_strings(img, f"image of {a!r} under {label!r}")) for a, img in table.items()},
                )
        except ValueError as exc:
            raise SchemaError(str(exc)) from None
        for label, action in built.items():
            unknown = set(action.images) - set(backend.atoms)
            if unknown:
                raise SchemaError(f"action {label!r} mentions unknown atoms {sorted(unknown)}")
        return BooleanDynamicalSystem(backend, built)

    if backend_kind == "cofinite":
        extra = set(doc) - COFINITE_KEYS
        if extra:
            raise SchemaError(f"unexpected keys {sorted(extra)}")
        window = _need(doc, "window", int)
        backend = FiniteCofinite(doc.get("universe", "Z")) if doc.get("universe", "Z") in ("Z", "N") else None
        if backend is None:
            raise SchemaError("universe must be 'Z' or 'N'")
        built = {}
        for label in labels:
            entry = actions[label]
            if not isinstance(entry, dict):
                raise SchemaError(f"action {label!r} must be an object")
            tail = entry.get("tail")
            if tail == "kill":
                rule = KILL
            elif isinstance(tail, dict) and set(tail) == {"shift"} and isinstance(tail["shift"], int):
                rule = Shift(tail["shift"])
            else:
                raise SchemaError(f"action {label!r}: tail must be \"kill\" or {{\"shift\": n}}")
            raw = entry.get("exceptions", {})
            if not isinstance(raw, dict):
                raise SchemaError(f"action {label!r}: exceptions must be an object")
            try:
                exceptions = {int(k): _cofinite_elem(backend, v, f"{label}[{k}]") for k, v in raw.items()}
            except ValueError:
                raise SchemaError(f"action {label!r}: exception keys must be integers") from None
            built[label] = TailAction(backend, exceptions, rule, entry.get("window", window))
        return BooleanDynamicalSystem(backend, built)

    raise SchemaError(f"unknown backend {backend_kind!r}")


def parse_system(text: str) -> BooleanDynamicalSystem:
    """Parse and validate a JSON system document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, exc.lineno, exc.colno) from None
    sys = system_from_document(doc)
    report = validate_system(sys)
    if not report.ok:
        raise ValidationError(report)
    return sys


def serialize(sys: BooleanDynamicalSystem) -> dict:
    return sys.canonical()


def digest(sys: BooleanDynamicalSystem) -> str:
    blob = json.dumps(serialize(sys), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


# -- payload helpers -----------------------------------------------------------


def _ideal_payload(ideal) -> dict:
    if isinstance(ideal, PrincipalIdeal):
        return {"generator": elem_payload(ideal.generator)}
    assert isinstance(ideal, DefinableIdeal)
    return {"support": elem_payload(ideal.support), "height": ideal.height.value}


def _path_payload(p) -> dict:
    if isinstance(p, topograph.Finite):
        return {"kind": "finite", "word": list(p.word), "terminal": p.terminal}
    return {"kind": "eventually-periodic", "prefix": list(p.prefix), "period": list(p.period), "anchor": p.anchor}


def _element(sys: BooleanDynamicalSystem, text: str | None, flag: str):
    if not text:
        raise InputError(f"{flag} is required")
    return semigroup._parse_core(sys, text, 1)


# -- commands ------------------------------------------------------------------


def _graph(sys, args):
    graph = topograph.build_graph(sys)
    if args.dot:
        return topograph.to_dot(graph, topograph.classify_vertices(sys, graph))
    return {
        "vertices": [topograph.vertex_name(v) for v in graph.vertices],
        "edges": [{"label": e.label, "d": topograph.vertex_name(e.d), "r": topograph.vertex_name(e.r)} for e in graph.edges],
        "windowed": graph.windowed,
    }


def _spectrum(sys, args):
    if sys.is_finite:
        return {"ultrafilters": list(sys.backend.atoms), "windowed": False}
    band = sys.backend.band(sys.window() + sys.max_shift())
    names = [str(i) for i in band] + [topograph.vertex_name(AT_INFINITY)]
    return {"ultrafilters": names, "windowed": True}


def _classify(sys, args):
    graph = topograph.build_graph(sys)
    tags = topograph.classify_vertices(sys, graph)
    return {topograph.vertex_name(v): tags[v] for v in graph.vertices}


def _regular(sys, args):
    points = sys.points()
    flags = {str(p): is_regular(sys, sys.point_elem(p)) for p in points}
    payload = {
        "regular": [p for p, ok in flags.items() if ok],
        "singular": [p for p, ok in flags.items() if not ok],
    }
    if not sys.is_finite:
        payload["tail"] = is_regular(sys, sys.point_elem(sys.tail_rep()))
    return payload


def _ideals(sys, args):
    lattice, complete = invariants.hs_lattice(sys, args.bound)
    payload = {"ideals": [_ideal_payload(i) for i in lattice], "complete": complete}
    if not complete:
        raise Undecided(payload)
    return payload


def _cycles(sys, args):
    found = invariants.find_cycle_no_exit(sys, args.bound)
    if found is None:
        return {"cycle": None}
    return {"cycle": {"word": list(found.word), "base": elem_payload(found.base)}}


def _simplicity(sys, args):
    report = invariants.is_simple(sys, args.bound)
    payload: dict[str, Any] = {"simple": report.simple, "condition_LB": report.lb, "hs_trivial": report.hs_trivial}
    if not report.simple:
        w = report.witness
        if isinstance(w, invariants.CycleWitness):
            payload["witness"] = {"cycle": list(w.word), "base": elem_payload(w.base)}
        else:
            payload["witness"] = {"ideal": _ideal_payload(w)}
    return payload


def _cofinal(sys, args):
    return {"cofinal": invariants.is_cofinal(sys, args.bound)}


def _ktheory(sys, args):
    return ktheory.k_groups(sys).to_json()


def _quotient(sys, args):
    seed = _element(sys, args.ideal, "--ideal")
    ideal = invariants.hs_closure(sys, seed, args.bound)
    return {"ideal": _ideal_payload(ideal), "system": serialize(invariants.quotient_system(sys, ideal))}


def _semigroup_eval(sys, args):
    if not args.expression:
        raise InputError("semigroup-eval needs an expression")
    return semigroup.format_element(semigroup.parse_expression(sys, args.expression))


def _cover_check(sys, args):
    if not args.expression:
        raise InputError("cover-check needs the covered idempotent as its expression")
    x = semigroup.parse_expression(sys, args.expression)
    members = [semigroup.parse_expression(sys, c) for c in args.cover or []]
    outcome = semigroup.refine_cover(sys, x, members, args.bound)
    if isinstance(outcome, semigroup.OrthogonalCover):
        return {"cover": True, "refinement": [semigroup.format_element(m) for m in outcome.members]}
    if isinstance(outcome, semigroup.NotACover):
        return {"cover": False, "witness": semigroup.format_element(outcome.witness)}
    raise Undecided({"cover": None, "bound": outcome.bound})


def _boundary_paths(sys, args):
    found = topograph.boundary_paths(sys, args.cap)
    if isinstance(found, topograph.InfinitePathSpace):
        raise Undecided({"infinite": True, "reason": found.reason, "cap": found.cap})
    return {"paths": [_path_payload(p) for p in found]}


def _validate(sys, args):
    return {"ok": True, "violations": []}


HANDLERS = {
    "validate": _validate,
    "spectrum": _spectrum,
    "graph": _graph,
    "classify": _classify,
    "regular": _regular,
    "ideals": _ideals,
    "cycles": _cycles,
    "simplicity": _simplicity,
    "cofinal": _cofinal,
    "ktheory": _ktheory,
    "quotient": _quotient,
    "semigroup-eval": _semigroup_eval,
    "cover-check": _cover_check,
    "boundary-paths": _boundary_paths,
}


def run(command: str, sys: BooleanDynamicalSystem, args: argparse.Namespace) -> tuple[dict, int]:
    """Return the report and exit code for one command."""
    if command not in HANDLERS:
        raise InputError(f"unknown command {command!r}")
    diagnostics: list[str] = []
    code = 0
    try:
        result = HANDLERS[command](sys, args)
    except Undecided as exc:
        result, code = exc.payload, 2
        diagnostics.append("result is inconclusive within the configured bounds")
    except (Incomplete, UnsupportedBackend) as exc:
        result, code = None, 2
        diagnostics.append(str(exc))
    report = {"command": command, "digest": digest(sys), "result": result, "diagnostics": diagnostics}
    return report, code


# -- entry point -----------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boolsys", description="Compute invariants of Boolean dynamical systems.")
    p.add_argument("command", help="one of: " + ", ".join(COMMANDS))
    p.add_argument("system", help="path to a JSON system document, or - for stdin")
    p.add_argument("expression", nargs="?", help="element expression for semigroup-eval and cover-check")
    p.add_argument("--json", action="store_true", help="emit the machine-readable report")
    p.add_argument("--dot", action="store_true", help="graph: emit Graphviz DOT")
    p.add_argument("--ideal", help="quotient: seed element, closed to a hereditary saturated ideal")
    p.add_argument("--cover", action="append", help="cover-check: a cover member (repeatable)")
    p.add_argument("--cap", type=int, help="boundary-paths: listing cap")
    p.add_argument("--bound", type=int, help="iteration cap for searches and closures")
    return p


def _text(value, indent: str = "") -> list[str]:
    """Aligned ``key  value`` lines; nested objects indent, list items go one per line."""
    if not isinstance(value, dict):
        return [f"{indent}{value if isinstance(value, str) else json.dumps(value)}"]
    width = max((len(str(k)) for k in value), default=0)
    lines = []
    for k, v in value.items():
        if isinstance(v, dict) and v:
            lines.append(f"{indent}{k}:")
            lines.extend(_text(v, indent + "  "))
        elif isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
            lines.append(f"{indent}{k}:")
            lines.extend(f"{indent}  - {json.dumps(x)}" for x in v)
        else:
            lines.append(f"{indent}{str(k).ljust(width)}  {json.dumps(v)}")
    return lines


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    argv = list(_sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS:
        if argv and argv[0] in ("-h", "--help"):
            parser.print_help()
            return 0
        parser.print_usage(_sys.stderr)
        print(f"boolsys: unknown command; choose from {', '.join(COMMANDS)}", file=_sys.stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        if args.system == "-":
            text = _sys.stdin.read()
        else:
            with open(args.system, encoding="utf-8") as handle:
                text = handle.read()
        sys = parse_system(text)
        report, code = run(args.command, sys, args)
    except (InputError, OSError, ValueError) as exc:
        print(f"boolsys: error: {exc}", file=_sys.stderr)
        return 1

    result = report["result"]
    if args.json:
        print(json.dumps(report, indent=2))
    elif isinstance(result, str):
        print(result, end="" if result.endswith("\n") else "\n")
    elif result is not None:
        print("\n".join(_text(result)))
    for line in report["diagnostics"]:
        print(f"boolsys: {line}", file=_sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
