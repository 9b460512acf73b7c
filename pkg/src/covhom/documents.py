"""JSON input documents: complexes with circle maps, presentations, arrangements.

Every document is a JSON object with a ``kind`` field; see README.md for the
schema. Errors raise :class:`SchemaError` carrying the line of the offending
object (or of the syntax error).
"""

from __future__ import annotations

import json
import json.decoder
import json.scanner
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path


class SchemaError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = f"{source or '<input>'}:{line}: " if line else (f"{source}: " if source else "")
        super().__init__(where + message)
        self.line = line
        self.source = source


class _Obj(dict):
    line: int = 0


def _decoder(text: str) -> json.JSONDecoder:
    dec = json.JSONDecoder()
    base = dec.parse_object

    def parse_object(s_and_end, *args):
        s, end = s_and_end
        obj, new_end = base(s_and_end, *args)
        out = _Obj(obj)
        out.line = text.count("\n", 0, end) + 1
        return out, new_end

    dec.parse_object = parse_object
    dec.scan_once = json.scanner.py_make_scanner(dec)
    return dec


def loads(text: str, source: str | None = None):
    try:
        return _decoder(text).decode(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, exc.lineno, source) from None


def _line(obj) -> int | None:
    return getattr(obj, "line", None)


def _require(obj: dict, key: str, source, what: str):
    if key not in obj:
        raise SchemaError(f"{what} document is missing {key!r}", _line(obj), source)
    return obj[key]


def _label(x):
    return tuple(_label(y) for y in x) if isinstance(x, list) else x


@dataclass
class ComplexDocument:
    name: str
    complex: object
    circle_map: object | None
    line: int


@dataclass
class PresentationDocument:
    name: str
    presentation: object
    extra: dict
    line: int


@dataclass
class ArrangementDocument:
    name: str
    arrangement: object
    weights: list | None
    extra: dict
    line: int


def _complex(doc: dict, source, need_map: bool):
    from covhom.circle import CircleMap, CircleMapError, OrderCycleError, compatible_order_search, validate_circle_map
    from covhom.simplicial import ComplexError, OrderedSimplicialComplex, validate_complex

    cells = _require(doc, "simplices", source, "complex")
    if not isinstance(cells, list) or not all(isinstance(c, list) and c for c in cells):
        raise SchemaError("'simplices' must be a list of nonempty vertex lists", _line(doc), source)
    cells = [tuple(_label(v) for v in c) for c in cells]
    if "vertices" in doc:
        vertices = [_label(v) for v in doc["vertices"]]
    else:
        vertices = list(dict.fromkeys(v for c in cells for v in c))
    try:
        X = OrderedSimplicialComplex.from_cells(vertices, cells)
    except (ComplexError, ValueError, KeyError) as exc:
        raise SchemaError(f"invalid complex: {exc}", _line(doc), source) from None
    cm = None
    spec = doc.get("circle_map")
    if spec is None:
        if need_map:
            raise SchemaError("complex document is missing 'circle_map' (N and heights)", _line(doc), source)
        return X, None
    if not isinstance(spec, dict):
        raise SchemaError("'circle_map' must be an object", _line(doc), source)
    N = _require(spec, "N", source, "circle_map")
    heights = _require(spec, "heights", source, "circle_map")
    if isinstance(heights, list):
        if len(heights) != len(vertices):
            raise SchemaError("'heights' list must be parallel to 'vertices'", _line(spec), source)
        hmap = dict(zip(vertices, heights))
    elif isinstance(heights, dict):
        by_str = {str(v): v for v in vertices}
        missing = [k for k in heights if k not in by_str]
        if missing:
            raise SchemaError(f"heights given for unknown vertices {missing}", _line(spec), source)
        hmap = {by_str[k]: h for k, h in heights.items()}
    else:
        raise SchemaError("'heights' must be a list or an object", _line(spec), source)
    if set(hmap) != set(vertices):
        raise SchemaError("every vertex needs a height", _line(spec), source)
    if not all(isinstance(h, int) for h in hmap.values()) or not isinstance(N, int):
        raise SchemaError("N and heights must be integers", _line(spec), source)
    try:
        if spec.get("reorder", True):
            order = compatible_order_search(X, hmap, N)
            if order != list(X.vertices):
                X = X.reordered(order)
        cm = CircleMap(N, {v: h % N for v, h in hmap.items()})
        validate_complex(X)
        validate_circle_map(X, cm)
    except (CircleMapError, OrderCycleError, ComplexError, ValueError) as exc:
        raise SchemaError(f"invalid circle map: {exc}", _line(spec), source) from None
    return X, cm


def _presentation(doc: dict, source):
    from covhom.fox import GroupPresentation, PresentationError

    gens = _require(doc, "generators", source, "presentation")
    rels = doc.get("relators", [])
    weights = _require(doc, "weights", source, "presentation")
    if not all(isinstance(g, str) for g in gens) or not all(isinstance(r, str) for r in rels):
        raise SchemaError("generators and relators must be strings", _line(doc), source)
    if not isinstance(weights, list) or not all(isinstance(w, int) for w in weights):
        raise SchemaError("'weights' must be a list of integers", _line(doc), source)
    try:
        return GroupPresentation.parse(gens, rels, weights)
    except PresentationError as exc:
        raise SchemaError(str(exc), _line(doc), source) from None


def _number(x, source, line):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(f"coefficient {x!r} must be an integer or a fraction string", line, source)
    try:
        return Fraction(x)
    except ValueError:
        raise SchemaError(f"bad coefficient {x!r}", line, source) from None


def _arrangement(doc: dict, source):
    from covhom.arrangements import (
        ArrangementError,
        HyperplaneArrangement,
        boolean_arrangement,
        graphic_arrangement,
        monomial_arrangement,
    )

    try:
        if "forms" in doc:
            forms = [[_number(x, source, _line(doc)) for x in row] for row in doc["forms"]]
            n = len(forms[0]) if forms else int(doc.get("dimension", 0))
            labels = doc.get("labels") or [f"H{i}" for i in range(len(forms))]
            from covhom.algebra import QQ

            return HyperplaneArrangement(n, [tuple(QQ(x) for x in f) for f in forms], list(labels))
        if "graph" in doc:
            g = doc["graph"]
            return graphic_arrangement([_label(v) for v in _require(g, "vertices", source, "graph")],
                                       [tuple(_label(v) for v in e) for e in _require(g, "edges", source, "graph")])
        if "monomial" in doc:
            spec = doc["monomial"]
            return monomial_arrangement(int(_require(spec, "p", source, "monomial")), int(spec.get("n", 3)))
        if "boolean" in doc:
            return boolean_arrangement(int(doc["boolean"]))
    except (ArrangementError, ValueError, TypeError) as exc:
        raise SchemaError(f"invalid arrangement: {exc}", _line(doc), source) from None
    raise SchemaError("arrangement document needs one of 'forms', 'graph', 'monomial', 'boolean'", _line(doc), source)


def parse_document(data, source: str | None = None, need_map: bool = False):
    if not isinstance(data, dict):
        raise SchemaError("top level must be an object", 1, source)
    kind = _require(data, "kind", source, "input")
    name = str(data.get("name", Path(source).stem if source else "input"))
    line = _line(data) or 1
    if kind == "complex":
        X, cm = _complex(data, source, need_map)
        return ComplexDocument(name, X, cm, line)
    if kind == "presentation":
        extra = {k: v for k, v in data.items() if k not in ("kind", "name", "generators", "relators", "weights")}
        return PresentationDocument(name, _presentation(data, source), extra, line)
    if kind == "arrangement":
        A = _arrangement(data, source)
        weights = data.get("weights")
        if weights is not None and (not isinstance(weights, list) or len(weights) != A.size):
            raise SchemaError(f"'weights' must list one integer per hyperplane ({A.size})", line, source)
        extra = {k: v for k, v in data.items() if k not in ("kind", "name", "weights")}
        return ArrangementDocument(name, A, weights, extra, line)
    raise SchemaError(f"unknown kind {kind!r} (expected complex, presentation or arrangement)", line, source)


def load_document(path, need_map: bool = False):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read input: {exc.strerror}", None, str(path)) from None
    return parse_document(loads(text, str(path)), str(path), need_map)


# ---------------------------------------------------------------- writing


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def complex_document(name: str, X, cm=None) -> dict:
    cells = X.top_cells()
    out = {
        "kind": "complex",
        "name": name,
        "vertices": [_jsonable(v) for v in X.vertices],
        "simplices": [[_jsonable(v) for v in c] for c in cells],
    }
    if cm is not None:
        out["circle_map"] = {"N": cm.N, "heights": [cm.heights[v] for v in X.vertices]}
    return out


def presentation_document(name: str, P) -> dict:
    from covhom.fox import format_word

    return {
        "kind": "presentation",
        "name": name,
        "generators": list(P.generators),
        "relators": [format_word(r, P.generators) for r in P.relators],
        "weights": list(P.weights),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def packaged_data(name: str) -> Path:
    """Path of a file shipped in ``covhom/data``."""
    from importlib.resources import files

    return Path(str(files("covhom") / "data" / name))
