"""JSON/CSV encodings for rationals, lines, ground sets and reports.

Rationals are strings "p/q" (or "p" when q = 1).  Lines are
{"slope": ..., "intercept": ...}; points are {"x": ..., "y": ...}.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from richlines.errors import PreconditionError
from richlines.families import FamilyDecomposition
from richlines.grid import GroundSet, RichLineRecord
from richlines.lemmas import DegreeMatrix, LayeredDigraph
from richlines.lines import Line, Point, rational

SCHEMA_VERSION = 1


def fmt_q(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_q(s) -> Fraction:
    try:
        return rational(s)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise PreconditionError(f"bad rational {s!r}") from exc


def line_to_json(l: Line) -> dict:
    return {"slope": fmt_q(l.slope), "intercept": fmt_q(l.intercept)}


def line_from_json(obj) -> Line:
    try:
        return Line(parse_q(obj["slope"]), parse_q(obj["intercept"]))
    except (KeyError, TypeError) as exc:
        raise PreconditionError(f"bad line object {obj!r}") from exc
    except ValueError as exc:
        raise PreconditionError(str(exc)) from exc


def point_to_json(p: Point) -> dict:
    return {"x": fmt_q(p.x), "y": fmt_q(p.y)}


def jsonify(obj):
    """Recursively convert package values into JSON-ready structures."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return fmt_q(obj)
    if isinstance(obj, Line):
        return line_to_json(obj)
    if isinstance(obj, Point):
        return point_to_json(obj)
    if isinstance(obj, RichLineRecord):
        return {**line_to_json(obj.line), "richness": obj.richness}
    if isinstance(obj, dict):
        return {_key(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonify(v) for v in items]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _key(k) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, Fraction):
        return fmt_q(k)
    return str(k)


def dumps(report: dict) -> str:
    return json.dumps(jsonify(report), indent=2) + "\n"


# ----------------------------------------------------------------- ground sets


def ground_set_to_json(A: GroundSet) -> dict:
    return {"elements": [fmt_q(a) for a in A.elements]}


def ground_set_from_json(obj) -> GroundSet:
    if isinstance(obj, dict):
        obj = obj.get("elements")
    if not isinstance(obj, list):
        raise PreconditionError("ground set must be {'elements': [...]} or a list")
    values = [parse_q(v) for v in obj]
    if len(set(values)) != len(values):
        raise PreconditionError("ground set has duplicate elements")
    return GroundSet.of(values)


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise PreconditionError(f"{path}: {exc.strerror}") from exc


def load_ground_set(path) -> GroundSet:
    return ground_set_from_json(load_json(path))


# ----------------------------------------------------------------- line files


def rich_lines_to_json(k: int, records) -> dict:
    return {"k": k, "lines": [jsonify(r) for r in records]}


def lines_from_json(obj) -> list:
    if isinstance(obj, dict):
        obj = obj.get("lines")
    if not isinstance(obj, list):
        raise PreconditionError("line file must be {'lines': [...]} or a list")
    return [line_from_json(o) for o in obj]


def load_lines(path) -> list:
    return lines_from_json(load_json(path))


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["slope", "intercept", "richness"])
    for r in records:
        w.writerow([fmt_q(r.line.slope), fmt_q(r.line.intercept), r.richness])
    return buf.getvalue()


# -------------------------------------------------------------- decomposition


def decomposition_to_json(dec: FamilyDecomposition) -> dict:
    return {
        "gp_core": [line_to_json(l) for l in dec.gp_core],
        "parallel_families": [
            {"slope": fmt_q(s), "lines": [line_to_json(l) for l in ls]}
            for s, ls in dec.parallel_families.items()
        ],
        "star_families": [
            {"point": point_to_json(p), "lines": [line_to_json(l) for l in ls]}
            for p, ls in dec.star_families.items()
        ],
        "family_count": dec.family_count,
    }


def decomposition_to_csv(dec: FamilyDecomposition) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["slope", "intercept", "family_kind", "family_key"])
    for l, (kind, key) in sorted(dec.assignment.items()):
        label = fmt_q(key) if kind == "parallel" else f"({fmt_q(key.x)},{fmt_q(key.y)})"
        w.writerow([fmt_q(l.slope), fmt_q(l.intercept), kind, label])
    return buf.getvalue()


# ------------------------------------------------------------------- lemmas


def degree_matrix_from_json(obj) -> DegreeMatrix:
    try:
        return DegreeMatrix([[parse_q(v) for v in row] for row in obj["rows"]], parse_q(obj["L"]))
    except (KeyError, TypeError) as exc:
        raise PreconditionError("degree matrix must be {'L': ..., 'rows': [[...]]}") from exc


def layered_graph_to_json(G: LayeredDigraph) -> dict:
    return {
        "base": [fmt_q(b) for b in G.base],
        "layers": G.layer_count,
        "edges": [
            [{"u": fmt_q(u), "v": fmt_q(v), "multiplicity": m} for (u, v), m in layer.items()]
            for layer in G.edges
        ],
    }


def layered_graph_from_json(obj) -> LayeredDigraph:
    base = tuple(sorted(parse_q(b) for b in obj["base"]))
    edges = tuple(
        {(parse_q(e["u"]), parse_q(e["v"])): int(e.get("multiplicity", 1)) for e in layer}
        for layer in obj["edges"]
    )
    return LayeredDigraph(base, edges)


def commutator_to_json(G, analysis: dict) -> dict:
    ids = {v: i for i, v in enumerate(G.vertices)}
    commuting = set(G.commuting)
    return {
        "threshold": G.threshold,
        "vertices": [
            {"id": ids[v], "side": v[0], **line_to_json(v[1])} for v in G.vertices
        ],
        "edges": [
            {
                "u": ids[a],
                "v": ids[b],
                "commuting": (a, b) in commuting,
                "provenance": [list(p) for p in G.provenance[(a, b)]],
            }
            for a, b in G.edges
        ],
        "components": {
            "component_count": analysis["component_count"],
            "max_component": analysis["max_component"],
            "slope_classes": analysis["slope_classes"],
            "members": [[ids[v] for v in comp] for comp in analysis["components"]],
        },
    }
