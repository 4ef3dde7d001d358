"""Graph-spec text format: one YAML document per graph.

Sections: ``vertices`` holds (id, x, y) records, ``edges`` holds
(id, tail, head, oriented, p) records, and an optional ``cycle`` section
lists the boundary cycle vertex ids in clockwise order with role labels plus
the U/W subsets.  Probabilities and coordinates may be integers, decimals or
rational strings like ``1/2``; they are kept exact (decimals become
fractions over a power of ten).
"""

from __future__ import annotations

from fractions import Fraction

import yaml

from .graph import GraphError, MixedPlanarGraph, build_graph


def parse_document(text: str) -> dict:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise GraphError(f"malformed graph spec: {exc}") from exc
    if not isinstance(doc, dict):
        raise GraphError("graph spec must be a mapping with vertices/edges sections")
    for key in ("vertices", "edges"):
        if key not in doc:
            raise GraphError(f"graph spec is missing the '{key}' section")
    return doc


def _record(item: dict, keys: tuple[str, ...], section: str) -> list:
    if not isinstance(item, dict):
        raise GraphError(f"{section} records must be mappings, got {item!r}")
    missing = [k for k in keys if k not in item]
    if missing:
        raise GraphError(f"{section} record {item!r} is missing {missing}")
    return [item[k] for k in keys]


def graph_from_text(text: str, *, require_planar: bool = True) -> MixedPlanarGraph:
    doc = parse_document(text)
    vertices = [_record(v, ("id", "x", "y"), "vertices") for v in doc["vertices"]]
    edges = [_record(e, ("id", "tail", "head", "oriented", "p"), "edges")
             for e in doc["edges"]]
    cycle = None
    if doc.get("cycle") is not None:
        c = doc["cycle"]
        order = [_record(o, ("v", "role"), "cycle order") for o in c.get("order", ())]
        cycle = {"order": [(v, r) for v, r in order],
                 "U": c.get("U", ()), "W": c.get("W", ())}
    try:
        return build_graph(vertices, edges, cycle, require_planar=require_planar)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, GraphError):
            raise
        raise GraphError(f"invalid graph spec value: {exc}") from exc


def graph_from_file(path, *, require_planar: bool = True) -> MixedPlanarGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return graph_from_text(fh.read(), require_planar=require_planar)


def _num(value: Fraction):
    return int(value) if value.denominator == 1 else str(value)


def graph_to_text(g: MixedPlanarGraph) -> str:
    doc: dict = {
        "vertices": [{"id": v.id, "x": _num(v.pos[0]), "y": _num(v.pos[1])}
                     for v in g.vertices],
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head,
                   "oriented": e.oriented, "p": _num(e.p)}
                  for e in g.edges],
    }
    if g.boundary is not None:
        doc["cycle"] = {
            "order": [{"v": v, "role": r}
                      for v, r in zip(g.boundary.order, g.boundary.roles)],
            "U": sorted(g.boundary.U),
            "W": sorted(g.boundary.W),
        }
    return yaml.safe_dump(doc, sort_keys=False)
