import io
import json
import subprocess
import sys


from finreedy import builtin
from finreedy.cli import dispatch
from finreedy.reedy import reedy_factorize
from finreedy.serialize import dumps, map_to_json, structure_to_json
from finreedy.setfun import CONTRA, SetNatTrans, SetValuedFunctor, functor_to_json
from finreedy.skeleta import latching
from finreedy.wfs import constants_classification
from strategies import diagram, nat_map


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(dumps(doc) if not isinstance(doc, str) else doc)
    return str(p)


def test_builtin_list_and_show():
    code, out, _ = run("builtin", "--list")
    assert code == 0 and "delta:N" in json.loads(out)["builtins"]
    code, out, _ = run("builtin", "span", "--emit", "dot")
    assert code == 0 and out.startswith("digraph")


def test_unknown_builtin_and_missing_subcommand_are_usage_errors():
    assert run("factorize", "--builtin", "cube:2", "--mor", "x")[0] == 3
    assert run()[0] == 3
    assert run("factorize", "--builtin", "delta:1", "--mor", "nope")[0] == 3


def test_factorize_matches_library_and_is_deterministic():
    a = run("factorize", "--builtin", "delta:1", "--mor", "d1s0@1")
    b = run("factorize", "--builtin", "delta:1", "--mor", "d1s0@1")
    assert a == b and a[0] == 0
    doc = json.loads(a[1])
    fac = reedy_factorize(builtin("delta:1"), "d1s0@1")
    assert (doc["left"], doc["mid"], doc["right"]) == (fac.left, fac.mid, fac.right)


def test_validate_structure_file(tmp_path):
    good = write(tmp_path, "good.json", structure_to_json(builtin("parpair")))
    code, out, _ = run("validate", good)
    assert code == 0 and json.loads(out)["ok"]
    doc = structure_to_json(builtin("parpair"))
    doc["reedy"]["raising"].remove("f")
    code, out, _ = run("validate", write(tmp_path, "broken.json", doc))
    rep = json.loads(out)
    assert code == 1 and not rep["ok"] and rep["clause"] == "unique-factorization"
    assert rep["witness"]["morphism"] == "f"


def test_validate_broken_category(tmp_path):
    doc = structure_to_json(builtin("span"))
    doc["compose"] = [e for e in doc["compose"] if e[1] != "a->b"]
    code, out, _ = run("validate", write(tmp_path, "cat.json", doc))
    assert code == 1 and json.loads(out)["clause"] == "compose-domain"


def test_malformed_json_reports_line_and_column(tmp_path):
    p = write(tmp_path, "bad.json", '{\n  "objects": [\n    {"id": "a"},,\n  ]\n}\n')
    code, out, err = run("validate", p)
    assert code == 3 and f"{p}:3:" in err


def test_latching_and_matching(tmp_path):
    r, x = diagram("span-alt", 3, 3)
    d = write(tmp_path, "x.json", functor_to_json(x))
    code, out, _ = run("latching", "--builtin", "span-alt", "--obj", "c", "--diagram", d)
    assert code == 0
    assert len(json.loads(out)["latching"]) == len(latching(r, "c", x).value)
    code, out, _ = run("matching", "--builtin", "span-alt", "--obj", "a", "--diagram", d)
    assert code == 0 and len(json.loads(out)["matching"]) == len(x.carrier["b"])


def test_map_commands(tmp_path):
    r, f = nat_map("parpair", 6, 3)
    m = write(tmp_path, "f.json", map_to_json(f))
    for argv in (
        ("build-up", "--map", m),
        ("replay", "--map", m),
        ("is-cell", "--map", m),
        ("factor", "--map", m),
        ("classify", "--map", m, "--side", "left"),
        ("rel-latching", "--obj", "b", "--map", m),
        ("rel-latching", "--obj", "a", "--map", m, "--side", "matching"),
    ):
        code, out, err = run(argv[0], "--builtin", "parpair", *argv[1:])
        assert code == 0, (argv, err)
        json.loads(out)
    doc = json.loads(run("build-up", "--builtin", "parpair", "--map", m)[1])
    assert doc["replay"] is True
    doc = json.loads(run("factor", "--builtin", "parpair", "--map", m)[1])
    assert doc["left_is_reedy_left"] and doc["right_is_reedy_right"]


def test_presentation_file_replay(tmp_path):
    r, f = nat_map("span", 2, 3)
    m = write(tmp_path, "f.json", map_to_json(f))
    code, out, _ = run("build-up", "--builtin", "span", "--map", m)
    pres = write(tmp_path, "p.json", out)
    code, out, _ = run("replay", "--builtin", "span", "--presentation", pres)
    assert code == 0 and json.loads(out)["ok"]


def test_lift_command(tmp_path):
    r = builtin("omega:0")
    one = SetValuedFunctor(r.base, "co", {"0": ["p"]}, {})
    two = SetValuedFunctor(r.base, "co", {"0": ["p", "q"]}, {})
    i = SetNatTrans(one, two, {"0": {"p": "p"}})
    p = SetNatTrans(two, one, {"0": {"p": "p", "q": "p"}})
    files = [write(tmp_path, "i.json", map_to_json(i)), write(tmp_path, "p.json", map_to_json(p))]
    sq = write(tmp_path, "sq.json", {"top": {"0": {"p": "q"}}, "bottom": {"0": {"p": "p", "q": "p"}}})
    code, out, _ = run("lift", "--builtin", "omega:0", "--i", files[0], "--p", files[1], "--square", sq)
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "LIFT"
    assert doc["lift"]["components"]["0"]["p"] == "q"


def test_ez_command(tmp_path):
    from finreedy.setfun import representable

    x = representable(builtin("delta:1").base, "[0]", CONTRA)
    d = write(tmp_path, "x.json", functor_to_json(x))
    code, out, _ = run("ez", "--builtin", "delta:1", "--diagram", d, "--level", "[1]", "--simplex", "s0@1")
    doc = json.loads(out)
    assert code == 0 and doc["decompositions"] == 1 and doc["level"] == "[0]"


def test_leibniz_tensor_command(tmp_path):
    r, f = nat_map("span", 1, 2)
    g = {"source": {"kind": "set", "elements": ["0"]}, "target": {"kind": "set", "elements": ["0", "1"]},
         "map": {"0": "0"}}
    code, out, err = run("leibniz", "--builtin", "span", "--op", "tensor",
                         "--f", write(tmp_path, "f.json", map_to_json(f)), "--g", write(tmp_path, "g.json", g))
    assert code == 0, err
    assert json.loads(out)["tag"] == "tensor"


def test_structural_commands():
    for argv in (
        ("fact-cat", "--builtin", "delta:2", "--mor", "d1s0@1"),
        ("boundary", "--builtin", "delta:2", "--obj", "[2]"),
        ("skeleton", "--builtin", "delta:2", "--n", "1"),
        ("cells", "--builtin", "span-alt"),
    ):
        code, out, _ = run(*argv)
        assert code == 0
        json.loads(out)
    code, out, _ = run("boundary", "--builtin", "delta:1", "--obj", "[1]", "--emit", "dot")
    assert code == 0 and out.startswith("digraph")


def test_constants_matches_library():
    code, out, _ = run("constants", "--builtin", "omega:3")
    doc = json.loads(out)
    rep = constants_classification(builtin("omega:3"))
    assert doc["fibrant_constants"] is True
    assert doc["cofibrant_constants"] == rep.cofibrant and doc["consistent"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "finreedy", "factorize", "--builtin", "delta:1", "--mor", "d1s0@1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["mid"] == "[0]"
