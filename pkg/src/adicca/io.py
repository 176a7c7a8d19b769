"""JSON (de)serialization for every value the command line exchanges.

All ``*_to_json`` functions return plain JSON-ready objects; :func:`dumps`
renders them canonically (sorted keys, fixed separators) so repeated runs
produce identical bytes.
"""

from __future__ import annotations

import json
from typing import Any

from .builders import OdometerSpec, Stage, SubstitutionSpec, ToeplitzSpec
from .diagram import DiagramSpec, LevelTemplate, PathRep, validate
from .errors import AdicError, ParseError
from .spacetime import DiagramPatch, Row, TileSet, parse_symbol
from .synth import CAConfig, RuleTable, clock_step, window_bounds
from .vershik import path_from_json, path_to_json


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", position=(exc.lineno, exc.colno)) from None


def _need(obj, key, kind=None, where="value"):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{where}: missing field {key!r}", position=where)
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise ParseError(f"{where}: field {key!r} has the wrong type", position=f"{where}.{key}")
    return v


# -- diagrams -------------------------------------------------------------------
def _word_out(word: tuple[str, ...]):
    return "".join(word) if all(len(a) == 1 for a in word) else list(word)


def diagram_to_json(spec: DiagramSpec) -> dict:
    return {
        "alphabet": list(spec.alphabet),
        "level1": dict(spec.level1),
        "templates": {
            tid: {a: _word_out(w) for a, w in t.ranges.items()} for tid, t in spec.templates.items()
        },
        "schedule": {"prefix": list(spec.prefix), "cycle": list(spec.cycle)},
    }


def diagram_from_json(obj: Any) -> DiagramSpec:
    where = "diagram"
    templates = _need(obj, "templates", dict, where)
    level1 = _need(obj, "level1", dict, where)
    sched = _need(obj, "schedule", dict, where)
    tmpl = {}
    for tid, ranges in templates.items():
        if not isinstance(ranges, dict):
            raise ParseError("template must map vertices to words", position=f"templates.{tid}")
        words = {}
        for a, w in ranges.items():
            if not isinstance(w, (str, list)) or any(not isinstance(c, str) for c in w):
                raise ParseError("word must be a string or an array of labels", position=f"templates.{tid}.{a}")
            words[a] = tuple(w)
        tmpl[tid] = LevelTemplate(tid, words)
    for a, n in level1.items():
        if not isinstance(n, int):
            raise ParseError("clock-edge count must be an integer", position=f"level1.{a}")
    alphabet = obj.get("alphabet")
    if alphabet is None:
        spec = DiagramSpec.build(level1, {t: dict(v.ranges) for t, v in tmpl.items()}, sched.get("cycle", []), sched.get("prefix", []))
        return spec
    return DiagramSpec(
        alphabet=tuple(alphabet),
        level1=dict(level1),
        templates=tmpl,
        prefix=tuple(_need(sched, "prefix", list, "schedule")),
        cycle=tuple(_need(sched, "cycle", list, "schedule")),
    )


# -- builder inputs ---------------------------------------------------------------
def substitution_from_json(obj: Any) -> SubstitutionSpec:
    words = _need(obj, "words", dict, "substitution")
    return SubstitutionSpec.of({a: list(w) for a, w in words.items()})


def substitution_to_json(s: SubstitutionSpec) -> dict:
    return {"words": {a: _word_out(w) for a, w in s.words.items()}}


def odometer_from_json(obj: Any) -> OdometerSpec:
    try:
        return OdometerSpec(
            tuple(obj.get("prefix", [])) if isinstance(obj, dict) else (),
            tuple(_need(obj, "cycle", list, "odometer")),
        )
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc), position="odometer") from None


def odometer_to_json(o: OdometerSpec) -> dict:
    return {"prefix": list(o.prefix), "cycle": list(o.cycle)}


def toeplitz_from_json(obj: Any) -> ToeplitzSpec:
    stages = []
    for i, st in enumerate(_need(obj, "stages", list, "toeplitz")):
        s = _need(st, "s", int, f"stages[{i}]")
        fill = _need(st, "fill", dict, f"stages[{i}]")
        try:
            stages.append(Stage(s, {int(k): v for k, v in fill.items()}))
        except ValueError:
            raise ParseError("fill keys must be integers", position=f"stages[{i}].fill") from None
    return ToeplitzSpec(tuple(stages), int(obj.get("tail_ratio", 1)))


def toeplitz_to_json(t: ToeplitzSpec) -> dict:
    out = {"stages": [{"s": st.s, "fill": {str(k): v for k, v in sorted(st.fill.items())}} for st in t.stages]}
    if t.tail_ratio != 1:
        out["tail_ratio"] = t.tail_ratio
    return out


# -- paths, tiles, patches -------------------------------------------------------
def path_from_obj(obj: Any) -> PathRep:
    try:
        return path_from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad path: {exc}", position="path") from None


def _sym(text: Any, where: str):
    if not isinstance(text, str):
        raise ParseError("symbol must be a string", position=where)
    try:
        return parse_symbol(text)
    except ParseError:
        raise ParseError(f"bad symbol {text!r}", position=where) from None


def _step(arr: Any, where: str):
    if not isinstance(arr, list):
        raise ParseError("step must be an array of symbols", position=where)
    return tuple(_sym(s, f"{where}[{i}]") for i, s in enumerate(arr))


def tiles_to_json(ts: TileSet) -> list:
    return sorted([[str(a), str(b)], [str(c), str(d)]] for (a, b), (c, d) in ts.tiles)


def tiles_from_json(obj: Any) -> TileSet:
    if not isinstance(obj, list):
        raise ParseError("tile set must be an array", position="tiles")
    out = set()
    for i, t in enumerate(obj):
        if not (isinstance(t, list) and len(t) == 2 and all(isinstance(r, list) and len(r) == 2 for r in t)):
            raise ParseError("tile must be a 2x2 matrix", position=f"tiles[{i}]")
        (a, b), (c, d) = t
        w = f"tiles[{i}]"
        out.add(((_sym(a, w), _sym(b, w)), (_sym(c, w), _sym(d, w))))
    return TileSet(frozenset(out))


def patch_to_json(p: DiagramPatch) -> dict:
    return {
        "diagram": diagram_to_json(p.diagram.spec),
        "base": path_to_json(p.base),
        "rows": [p.m0, p.m1],
        "width": p.width,
        "paths": [path_to_json(q) for q in p.paths],
        "grid": [[str(s) for s in r.cells] for r in p.rows],
    }


def patch_from_json(obj: Any) -> DiagramPatch:
    d = validate(diagram_from_json(_need(obj, "diagram", dict, "patch")))
    m0, m1 = _need(obj, "rows", list, "patch")
    rows = [Row(_step(r, f"grid[{i}]")) for i, r in enumerate(_need(obj, "grid", list, "patch"))]
    paths = [path_from_obj(q) for q in _need(obj, "paths", list, "patch")]
    if len(rows) != m1 - m0 + 1 or len(paths) != len(rows):
        raise ParseError("row count does not match the row range", position="patch.grid")
    return DiagramPatch(d, path_from_obj(obj["base"]), m0, m1, int(obj["width"]), paths, rows)


# -- rules and configurations -----------------------------------------------------
def _step_out(step) -> list[str]:
    return [str(s) for s in step]


def rule_to_json(rule: RuleTable) -> list:
    return sorted(
        ({"ctx": [_step_out(s) for s in ctx], "out": _step_out(out)} for ctx, out in rule.table.items()),
        key=lambda e: json.dumps(e, sort_keys=True),
    )


def rule_from_json(obj: Any) -> RuleTable:
    if not isinstance(obj, list):
        raise ParseError("rule table must be an array", position="rule")
    table = {}
    w = None
    for i, e in enumerate(obj):
        ctx = _need(e, "ctx", list, f"rule[{i}]")
        if len(ctx) != 3:
            raise ParseError("ctx must hold three steps", position=f"rule[{i}].ctx")
        key = tuple(_step(s, f"rule[{i}].ctx[{j}]") for j, s in enumerate(ctx))
        out = _step(_need(e, "out", list, f"rule[{i}]"), f"rule[{i}].out")
        widths = {len(s) for s in (*key, out)}
        if len(widths) != 1 or (w is not None and widths != {w}):
            raise ParseError("inconsistent step widths", position=f"rule[{i}]")
        w = widths.pop()
        if key in table and table[key] != out:
            raise ParseError("conflicting entries for one context", position=f"rule[{i}]")
        table[key] = out
    return RuleTable(w or 3, 1, table, functional=True)


def config_to_json(cfg: CAConfig) -> dict:
    return {
        "left": {"cycle": [_step_out(s) for s in cfg.left]},
        "core": [_step_out(s) for s in cfg.core],
        "right": "clock",
        "kmin": cfg.kmin,
    }


def config_from_json(obj: Any) -> CAConfig:
    left = _need(_need(obj, "left", dict, "config"), "cycle", list, "config.left")
    core = _need(obj, "core", list, "config")
    if obj.get("right", "clock") != "clock":
        raise ParseError("only a clock right fill is supported", position="config.right")
    left_steps = tuple(_step(s, f"left.cycle[{i}]") for i, s in enumerate(left))
    core_steps = tuple(_step(s, f"core[{i}]") for i, s in enumerate(core))
    widths = {len(s) for s in (*left_steps, *core_steps)}
    if len(widths) != 1:
        raise ParseError("inconsistent step widths", position="config")
    w = widths.pop()
    kmin = obj.get("kmin", 1 - window_bounds(w)[1])
    return CAConfig(left_steps, core_steps, clock_step(w), int(kmin))


def read(path: str, parser):
    """Parse a JSON file (``-`` for standard input) with ``parser``."""
    import sys

    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", position=path) from None
    try:
        return parser(loads(text))
    except ParseError:
        raise
    except (AdicError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: {exc}", position=path) from None
