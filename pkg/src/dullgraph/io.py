"""JSON documents: schema checking, exact rationals, canonical output.

A document is ``{"format_version": 1, <section>: ..., ...}`` with at least
one of the sections ``dull_graph``, ``decorated_graph``, ``orientation``,
``polytope``, ``move_script`` and ``report``.  Rationals are strings such
as ``"3/2"``; floats are rejected so that every value is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema

from .corner import CornerPolytope, validate_polytope
from .errors import ParseError
from .graph import DecoratedGraph, DullGraph, Edge, Orientation, Vertex, validate_decorated, validate_dull
from .moves import Blowdown, Blowup, Opposite, PartialFlip

FORMAT_VERSION = 1
SECTIONS = ("dull_graph", "decorated_graph", "orientation", "polytope", "move_script", "report")

_RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_ID = {"type": "string", "minLength": 1}


def _vertex_schema(decorated: bool) -> dict:
    props = {
        "id": _ID,
        "kind": {"enum": ["thin", "fat"]},
        "extremal": {"enum": ["none", "min", "max", "extremal"]},
        "genus": {"type": "integer", "minimum": 0},
        "e": {"type": "integer"},
        "area": _RATIONAL,
    }
    required = ["id", "kind"]
    if decorated:
        props["moment"] = _RATIONAL
        required.append("moment")
    return {"type": "object", "properties": props, "required": required, "additionalProperties": False}


def _graph_schema(decorated: bool) -> dict:
    return {
        "type": "object",
        "properties": {
            "vertices": {"type": "array", "items": _vertex_schema(decorated)},
            "edges": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {"a": _ID, "b": _ID, "k": {"type": "integer"}},
                    "required": ["a", "b", "k"],
                    "additionalProperties": False,
                },
            },
        },
        "required": ["vertices", "edges"],
        "additionalProperties": False,
    }


def _op(name: str, **props) -> dict:
    return {
        "type": "object",
        "properties": {"op": {"const": name}, **props},
        "required": ["op", *[k for k in props if k != "size"]],
        "additionalProperties": False,
    }


_PAIR = {"type": "array", "items": _ID, "minItems": 2, "maxItems": 2}

SCHEMA = {
    "type": "object",
    "properties": {
        "format_version": {"const": FORMAT_VERSION},
        "dull_graph": _graph_schema(False),
        "decorated_graph": _graph_schema(True),
        "orientation": {
            "type": "object",
            "properties": {
                "min": _ID,
                "max": _ID,
                "directions": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {"edge": _PAIR, "head": _ID},
                        "required": ["edge", "head"],
                        "additionalProperties": False,
                    },
                },
            },
            "required": ["min", "max", "directions"],
            "additionalProperties": False,
        },
        "polytope": {
            "type": "object",
            "properties": {
                "normals": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                },
                "constants": {"type": "array", "items": _RATIONAL},
            },
            "required": ["normals", "constants"],
            "additionalProperties": False,
        },
        "move_script": {
            "type": "array",
            "items": {
                "oneOf": [
                    _op("opposite"),
                    _op("partial_flip", chain=_ID),
                    _op("blowup", vertex={"type": ["string", "integer"]}, size=_RATIONAL),
                    _op("blowdown", edge=_PAIR),
                ]
            },
        },
        "report": {"type": "object"},
    },
    "required": ["format_version"],
    "anyOf": [{"required": [s]} for s in SECTIONS],
    "additionalProperties": False,
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


@dataclass
class Document:
    dull_graph: DullGraph | None = None
    decorated_graph: DecoratedGraph | None = None
    orientation: Orientation | None = None
    polytope: CornerPolytope | None = None
    move_script: tuple | None = None
    report: dict | None = None

    @property
    def graph(self) -> DullGraph | None:
        """The dull graph, read off the decorated graph when only that is present."""
        if self.dull_graph is not None:
            return self.dull_graph
        return self.decorated_graph.graph if self.decorated_graph is not None else None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"format_version": FORMAT_VERSION}
        if self.dull_graph is not None:
            out["dull_graph"] = graph_to_json(self.dull_graph)
        if self.decorated_graph is not None:
            out["decorated_graph"] = graph_to_json(self.decorated_graph.graph, self.decorated_graph)
        if self.orientation is not None:
            out["orientation"] = orientation_to_json(self.orientation)
        if self.polytope is not None:
            out["polytope"] = self.polytope.to_json()
        if self.move_script is not None:
            out["move_script"] = [m.to_json() for m in self.move_script]
        if self.report is not None:
            out["report"] = self.report
        return out


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def _frac(s: str, where: str) -> Fraction:
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {s!r}", where) from None


def graph_to_json(g: DullGraph, deco: DecoratedGraph | None = None) -> dict:
    verts = []
    for v in g.vertices:
        d = {"id": v.id, "kind": v.kind, "extremal": v.extremal}
        if v.is_fat:
            d["genus"] = v.genus or 0
            d["e"] = v.e or 0
        if deco is not None:
            d["moment"] = str(deco.moment[v.id])
            if v.id in deco.area:
                d["area"] = str(deco.area[v.id])
        verts.append(d)
    return {"vertices": verts, "edges": [{"a": e.a, "b": e.b, "k": e.k} for e in g.edges]}


def orientation_to_json(o: Orientation) -> dict:
    return {
        "min": o.min_vertex,
        "max": o.max_vertex,
        "directions": [{"edge": sorted((t, h)), "head": h} for t, h in sorted(o.arcs, key=sorted)],
    }


def _graph_from(obj: dict, where: str) -> tuple[DullGraph, dict, dict]:
    verts, moment, area = [], {}, {}
    for i, v in enumerate(obj["vertices"]):
        verts.append(Vertex(v["id"], v["kind"], v.get("extremal", "none"), v.get("genus"), v.get("e")))
        if "moment" in v:
            moment[v["id"]] = _frac(v["moment"], f"{where}/vertices/{i}/moment")
        if "area" in v:
            area[v["id"]] = _frac(v["area"], f"{where}/vertices/{i}/area")
    edges = [Edge(e["a"], e["b"], e["k"]) for e in obj["edges"]]
    return DullGraph.build(verts, edges), moment, area


def _orientation_from(obj: dict, where: str) -> Orientation:
    arcs = set()
    for i, d in enumerate(obj["directions"]):
        a, b = d["edge"]
        if d["head"] not in (a, b):
            raise ParseError(f"head {d['head']!r} is not an end of edge {a}-{b}", f"{where}/directions/{i}/head")
        arcs.add((a if d["head"] == b else b, d["head"]))
    return Orientation(obj["min"], obj["max"], frozenset(arcs))


def _move_from(m: dict, where: str):
    op = m["op"]
    if op == "opposite":
        return Opposite()
    if op == "partial_flip":
        return PartialFlip(m["chain"])
    if op == "blowup":
        size = _frac(m["size"], f"{where}/size") if "size" in m else None
        return Blowup(m["vertex"], size)
    return Blowdown(tuple(m["edge"]))


def parse(obj: Any, check: bool = True) -> Document:
    """Build a document from decoded JSON; ``check`` also runs the semantic validators."""
    err = jsonschema.exceptions.best_match(_VALIDATOR.iter_errors(obj))
    if err is not None:
        raise ParseError(err.message, _pointer(err.absolute_path))
    doc = Document()
    if "dull_graph" in obj:
        doc.dull_graph, _, _ = _graph_from(obj["dull_graph"], "/dull_graph")
    if "decorated_graph" in obj:
        g, moment, area = _graph_from(obj["decorated_graph"], "/decorated_graph")
        doc.decorated_graph = DecoratedGraph(g, moment, area)
    if "orientation" in obj:
        doc.orientation = _orientation_from(obj["orientation"], "/orientation")
    if "polytope" in obj:
        p = obj["polytope"]
        consts = [_frac(c, f"/polytope/constants/{i}") for i, c in enumerate(p["constants"])]
        doc.polytope = CornerPolytope(tuple(map(tuple, p["normals"])), tuple(consts))
    if "move_script" in obj:
        doc.move_script = tuple(_move_from(m, f"/move_script/{i}") for i, m in enumerate(obj["move_script"]))
    if "report" in obj:
        doc.report = obj["report"]
    if check:
        _semantic_check(doc)
    return doc


def _semantic_check(doc: Document):
    for name, report in (
        ("dull_graph", doc.dull_graph and validate_dull(doc.dull_graph)),
        ("decorated_graph", doc.decorated_graph and validate_decorated(doc.decorated_graph)),
        ("polytope", doc.polytope and validate_polytope(doc.polytope)),
    ):
        if report and not report.ok:
            raise ParseError("; ".join(str(v) for v in report), f"/{name}")


def loads(text: str, check: bool = True) -> Document:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    return parse(obj, check)


def load(path, check: bool = True) -> Document:
    return loads(Path(path).read_text(), check)


def dumps(doc: Document | dict) -> str:
    obj = doc.to_json() if isinstance(doc, Document) else doc
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def save(doc: Document | dict, path) -> None:
    Path(path).write_text(dumps(doc))
