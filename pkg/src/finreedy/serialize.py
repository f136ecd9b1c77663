"""JSON documents and DOT text for the engine's objects.

Every document carries ``"schema": 1``.  Elements are written as their
printable labels; reading a document back yields string elements.
"""

from __future__ import annotations

import json
from pathlib import Path

from .fincat import CategoryError, FinCategory, category_from_json, category_to_json
from .finsets import label
from .reedy import FactorizationCategory, ReedyStructure, reedy_from_json, reedy_to_json
from .setfun import (
    DiagramError,
    ElementsCategory,
    FinSet,
    SetBifunctor,
    SetNatTrans,
    SetValuedFunctor,
    _Diagram,
    functor_from_json,
    functor_to_json,
    nat_trans_from_json,
    nat_trans_to_json,
)

SCHEMA = 1


class DocumentError(ValueError):
    """Malformed input document; carries line and column when known."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None, column: int | None = None):
        where = ""
        if path:
            where = f"{path}"
        if line is not None:
            where += f":{line}:{column}"
        super().__init__(f"{where}: {message}" if where else message)
        self.path, self.line, self.column = path, line, column


def load_json(path: str | Path):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read file: {exc.strerror}", str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, str(path), exc.lineno, exc.colno) from None


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)


# diagrams and maps


def diagram_to_json(x: _Diagram) -> dict:
    if isinstance(x, SetValuedFunctor):
        return functor_to_json(x)
    if isinstance(x, FinSet):
        return {"schema": SCHEMA, "kind": "set", "elements": [label(e) for e in x.elements]}
    if isinstance(x, SetBifunctor):
        return {
            "schema": SCHEMA,
            "kind": "bifunctor",
            "carrier": {label(n): [label(e) for e in x.carrier[n]] for n in x.nodes()},
        }
    raise DiagramError(f"no JSON form for {type(x).__name__}")


def map_to_json(f: SetNatTrans) -> dict:
    doc = nat_trans_to_json(f)
    doc["source"] = diagram_to_json(f.source)
    doc["target"] = diagram_to_json(f.target)
    return doc


def diagram_from_json(base: FinCategory | None, data: dict) -> _Diagram:
    try:
        return _diagram_from_json(base, data)
    except (DiagramError, CategoryError) as exc:
        raise DocumentError(str(exc)) from None


def _diagram_from_json(base: FinCategory | None, data: dict) -> _Diagram:
    if not isinstance(data, dict):
        raise DocumentError("diagram document must be an object")
    if data.get("kind") == "set" or (base is None and "elements" in data):
        return FinSet(data.get("elements", []))
    if base is None:
        raise DocumentError("a functor document needs a category")
    return functor_from_json(base, data)


def map_from_json(base: FinCategory | None, data: dict) -> SetNatTrans:
    """A map document: {"source": diagram, "target": diagram, "components": ...}.
    Set maps may instead give {"source": {...set}, "target": {...set}, "map": {x: y}}."""
    if not isinstance(data, dict) or "source" not in data or "target" not in data:
        raise DocumentError("map document needs 'source' and 'target'")
    src, tgt = diagram_from_json(base, data["source"]), diagram_from_json(base, data["target"])
    try:
        if "map" in data and isinstance(src, FinSet):
            return SetNatTrans(src, tgt, {FinSet.NODE: dict(data["map"])})
        return nat_trans_from_json(src, tgt, data)
    except (DiagramError, TypeError, ValueError) as exc:
        raise DocumentError(str(exc)) from None


# structures


def load_structure(path: str | Path) -> ReedyStructure:
    """A category document with an inline "reedy" overlay, or an overlay
    document naming its category file under "category"."""
    doc = load_json(path)
    if not isinstance(doc, dict):
        raise DocumentError("structure document must be an object", str(path))
    try:
        cat, overlay = _structure_parts(doc, path)
    except CategoryError as exc:
        raise DocumentError(str(exc), str(path)) from None
    try:
        return reedy_from_json(cat, overlay)
    except CategoryError as exc:
        raise DocumentError(str(exc), str(path)) from None


def _structure_parts(doc: dict, path):
    if "objects" in doc:
        cat = category_from_json(doc)
        overlay = doc.get("reedy")
        if overlay is None:
            raise DocumentError("category document has no 'reedy' overlay", str(path))
    elif "category" in doc:
        ref = doc["category"]
        cat_doc = ref if isinstance(ref, dict) else load_json(Path(path).parent / ref)
        cat = category_from_json(cat_doc)
        overlay = doc
    else:
        raise DocumentError("expected a category document or a Reedy overlay", str(path))
    return cat, overlay


def structure_to_json(r: ReedyStructure) -> dict:
    doc = category_to_json(r.base)
    doc["reedy"] = reedy_to_json(r)
    return doc


# presentations


def presentation_to_json(p) -> dict:
    stages = []
    for st in p.stages:
        stages.append({
            "index": st.index,
            "object": diagram_to_json(st.obj),
            "connecting": nat_trans_to_json(st.connecting),
            "certificate": {"pushout": st.is_pushout, "pullback": st.is_pullback},
            "cells": [
                {
                    "label": c.label,
                    "generator": map_to_json(c.map),
                    "attaching": nat_trans_to_json(c.attaching),
                    "characteristic": nat_trans_to_json(c.characteristic),
                }
                for c in st.cells
            ],
        })
    return {
        "schema": SCHEMA,
        "note": p.note,
        "target": map_to_json(p.target),
        "start": diagram_to_json(p.start),
        "start_iso": nat_trans_to_json(p.start_iso),
        "stages": stages,
        "final_iso": nat_trans_to_json(p.final_iso),
        "stabilization_index": p.stabilization_index,
        "cell_counts": p.cell_counts(),
    }


def presentation_from_json(base: FinCategory, data: dict):
    """Inverse of presentation_to_json for presentations of functor maps."""
    from .cellular import Cell, CellPresentation, _finish_stage

    try:
        target = map_from_json(base, data["target"])
        start = diagram_from_json(base, data["start"])
        start_iso = nat_trans_from_json(target.source, start, data["start_iso"])
        prev = start
        stages = []
        for sd in data["stages"]:
            obj = diagram_from_json(base, sd["object"])
            conn = nat_trans_from_json(prev, obj, sd["connecting"])
            cells = []
            for cd in sd["cells"]:
                gen = map_from_json(base, cd["generator"])
                cells.append(Cell(cd["label"], gen, nat_trans_from_json(gen.source, prev, cd["attaching"]),
                                  nat_trans_from_json(gen.target, obj, cd["characteristic"])))
            try:
                st = _finish_stage(sd["index"], cells, prev, obj, conn)
            except (KeyError, DiagramError):
                from .cellular import Stage

                st = Stage(sd["index"], cells, obj, conn)
                st.is_pushout = False
            stages.append(st)
            prev = obj
        final = nat_trans_from_json(prev, target.target, data["final_iso"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise DocumentError(f"malformed presentation document: {exc}") from None
    return CellPresentation(target, start, start_iso, stages, final, note=data.get("note", ""))


# DOT


def _q(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _ranked(nodes_by_rank: dict, lines: list) -> None:
    for rank in sorted(nodes_by_rank):
        members = " ".join(_q(n) for n in nodes_by_rank[rank])
        lines.append(f"  {{ rank=same; {members} }}")


def reedy_to_dot(r: ReedyStructure) -> str:
    """Objects ranked by degree; raising arrows solid, lowering dashed,
    identities omitted."""
    c = r.base
    lines = [f"digraph {_q(r.name or 'reedy')} {{", "  rankdir=BT;"]
    by_rank: dict = {}
    for o in c.objects:
        by_rank.setdefault(r.degree[o], []).append(o)
        lines.append(f"  {_q(o)} [label={_q(f'{o} ({r.degree[o]})')}];")
    _ranked(by_rank, lines)
    for m, (s, t) in c.morphisms.items():
        if c.is_identity(m):
            continue
        style = "solid" if m in r.raising else "dashed" if m in r.lowering else "dotted"
        lines.append(f"  {_q(s)} -> {_q(t)} [label={_q(m)}, style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def elements_to_dot(el: ElementsCategory, degree: dict | None = None) -> str:
    """Nodes labeled (c, x); ranked by the degree of c when given."""
    c = el.category
    lines = ["digraph elements {", "  rankdir=BT;"]
    by_rank: dict = {}
    for o in c.objects:
        pt = el.points[o]
        lines.append(f"  {_q(o)} [label={_q(label(pt))}];")
        if degree is not None:
            by_rank.setdefault(degree[pt[0]], []).append(o)
    _ranked(by_rank, lines)
    for m, (s, t) in c.morphisms.items():
        if c.is_identity(m):
            continue
        lines.append(f"  {_q(s)} -> {_q(t)} [label={_q(label(el.projection[m]))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def fact_cat_to_dot(fc: FactorizationCategory) -> str:
    lines = [f"digraph {_q('fact ' + fc.morphism)} {{", "  rankdir=BT;"]
    by_rank: dict = {}
    for i, ((g, h), d) in enumerate(zip(fc.objects, fc.degrees)):
        node = f"{g}|{h}"
        by_rank.setdefault(d, []).append(node)
        lines.append(f"  {_q(node)} [label={_q(f'{g} ; {h} ({d})')}];")
    _ranked(by_rank, lines)
    for k, i, j in fc.arrows:
        a, b = fc.objects[i], fc.objects[j]
        if fc.reedy.base.is_identity(k):
            continue
        lines.append(f"  {_q(f'{a[0]}|{a[1]}')} -> {_q(f'{b[0]}|{b[1]}')} [label={_q(k)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def presentation_to_dot(p) -> str:
    """Stages as a chain, each stage node listing its cells."""
    lines = ["digraph presentation {", "  rankdir=LR;", '  "start" [shape=box];']
    prev = "start"
    for st in p.stages:
        node = f"stage {st.index}"
        cells = ", ".join(c.label for c in st.cells) or "no cells"
        lines.append(f"  {_q(node)} [shape=box, label={_q(f'{node}: {cells}')}];")
        lines.append(f"  {_q(prev)} -> {_q(node)};")
        prev = node
    lines.append("}")
    return "\n".join(lines) + "\n"
