import json

import pytest

from finreedy import builtin
from finreedy.cellular import building_up, canonical_hom_presentation, replay
from finreedy.reedy import factorization_category
from finreedy.serialize import (
    DocumentError,
    diagram_from_json,
    diagram_to_json,
    dumps,
    elements_to_dot,
    fact_cat_to_dot,
    load_json,
    load_structure,
    map_from_json,
    map_to_json,
    presentation_from_json,
    presentation_to_dot,
    presentation_to_json,
    reedy_to_dot,
    structure_to_json,
)
from finreedy.setfun import CONTRA, FinSet, category_of_elements, representable, set_map
from strategies import nat_map


def test_load_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "a": 1,\n  "b": ]\n}\n')
    with pytest.raises(DocumentError) as ei:
        load_json(p)
    assert ei.value.line == 3 and ei.value.column is not None


def test_structure_roundtrip_inline_and_overlay(tmp_path):
    r = builtin("span-alt")
    doc = structure_to_json(r)
    p = tmp_path / "s.json"
    p.write_text(dumps(doc))
    assert load_structure(p) == r
    overlay = dict(doc["reedy"])
    cat = dict(doc)
    del cat["reedy"]
    (tmp_path / "cat.json").write_text(dumps(cat))
    overlay["category"] = "cat.json"
    (tmp_path / "o.json").write_text(dumps(overlay))
    assert load_structure(tmp_path / "o.json") == r


def test_structure_without_overlay_is_rejected(tmp_path):
    doc = structure_to_json(builtin("span"))
    del doc["reedy"]
    p = tmp_path / "s.json"
    p.write_text(dumps(doc))
    with pytest.raises(DocumentError):
        load_structure(p)


def test_map_roundtrip():
    r, f = nat_map("parpair", 4, 3)
    g = map_from_json(r.base, json.loads(dumps(map_to_json(f))))
    assert g.validate()
    for o in r.base.objects:
        assert len(g.source.carrier[o]) == len(f.source.carrier[o])
        assert len(set(g.components[o].values())) == len(set(f.components[o].values()))


def test_set_map_shorthand():
    doc = {"source": {"kind": "set", "elements": ["a", "b"]}, "target": {"kind": "set", "elements": ["x"]},
           "map": {"a": "x", "b": "x"}}
    f = map_from_json(None, doc)
    assert f == set_map(FinSet(["a", "b"]), FinSet(["x"]), {"a": "x", "b": "x"})


def test_diagram_on_unknown_object_is_rejected():
    with pytest.raises(DocumentError):
        diagram_from_json(builtin("span").base, {"variance": "co", "carrier": {"zz": []}})


def test_presentation_roundtrip_replays():
    r, f = nat_map("span-alt", 2, 3)
    p = building_up(r, f)
    doc = json.loads(dumps(presentation_to_json(p)))
    q = presentation_from_json(r.base, doc)
    assert replay(q).ok
    assert q.cell_counts() == p.cell_counts()


def test_dot_outputs_are_deterministic_and_well_formed():
    r = builtin("delta:1")
    texts = [
        reedy_to_dot(r),
        fact_cat_to_dot(factorization_category(r, "d1s0@1")),
        elements_to_dot(category_of_elements(representable(r.base, "[1]", CONTRA)), r.degree),
        presentation_to_dot(canonical_hom_presentation(r)),
    ]
    for t in texts:
        assert t.startswith("digraph") and t.rstrip().endswith("}")
        assert t.count("{") == t.count("}")
    assert reedy_to_dot(r) == texts[0]
    assert "style=dashed" in texts[0] and "style=solid" in texts[0]


def test_set_diagram_json():
    doc = diagram_to_json(FinSet([1, 2]))
    assert doc["kind"] == "set" and doc["elements"] == ["1", "2"]
