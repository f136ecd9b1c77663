"""Command-line front end.  Each subcommand loads its inputs, calls one
library routine and prints JSON (or DOT with ``--emit dot``).

Exit codes: 0 success, 1 validation failure, 2 computation error,
3 usage error or malformed input.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable

from . import cellular, leibniz, reedy, setfun, skeleta, wfs
from .fincat import CategoryError, validate_category
from .finsets import label
from .library import builtin, builtin_names
from .serialize import (
    DocumentError,
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

EXIT_OK, EXIT_INVALID, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class ValidationFailure(Exception):
    def __init__(self, doc):
        super().__init__("validation failed")
        self.doc = doc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# input helpers


def _structure(args) -> reedy.ReedyStructure:
    if getattr(args, "builtin", None):
        try:
            r = builtin(args.builtin)
        except CategoryError as exc:
            raise UsageError(str(exc)) from None
    elif getattr(args, "structure", None):
        r = load_structure(args.structure)
    else:
        raise UsageError("give --builtin SPEC or --structure FILE")
    rep = validate_category(r.base)
    if not rep:
        raise ValidationFailure(rep.to_json())
    rep = reedy.validate_reedy(r)
    if not rep:
        raise ValidationFailure(rep.to_json())
    return r


def _checked(x, what: str):
    rep = x.validate()
    if not rep:
        raise ValidationFailure({"input": what, **rep.to_json()})
    return x


def _diagram(r, path: str, what: str = "diagram"):
    from .serialize import diagram_from_json

    return _checked(diagram_from_json(r.base, load_json(path)), what)


def _map(base, path: str, what: str = "map"):
    f = map_from_json(base, load_json(path))
    _checked(f.source, f"{what} source")
    _checked(f.target, f"{what} target")
    return _checked(f, what)


def _need(r, obj: str) -> str:
    if obj not in r.base.objects:
        raise UsageError(f"unknown object {obj!r}")
    return obj


def _mor(r, m: str) -> str:
    if m not in r.base.morphisms:
        raise UsageError(f"unknown morphism {m!r}")
    return m


def _set_json(s) -> list:
    return [label(e) for e in s.elements]


def _fmap_json(f) -> dict:
    return {label(x): label(y) for x, y in setfun.set_map_fn(f).items()}


# subcommands; each returns (text, exit code)


def cmd_builtin(args):
    if args.list or not args.spec:
        return dumps({"schema": 1, "builtins": builtin_names()}), EXIT_OK
    r = _structure(argparse.Namespace(builtin=args.spec))
    if args.emit == "dot":
        return reedy_to_dot(r), EXIT_OK
    return dumps(structure_to_json(r)), EXIT_OK


def cmd_validate(args):
    if args.file and not args.builtin:
        args.structure = args.file
    r = _structure(args)
    if args.emit == "dot":
        return reedy_to_dot(r), EXIT_OK
    return dumps({"schema": 1, "ok": True, "name": r.name, "objects": len(r.base.objects),
                  "morphisms": len(r.base.morphisms), "max_degree": r.max_degree}), EXIT_OK


def cmd_factorize(args):
    r = _structure(args)
    fac = reedy.reedy_factorize(r, _mor(r, args.mor))
    return dumps({"schema": 1, **fac.to_json()}), EXIT_OK


def cmd_fact_cat(args):
    r = _structure(args)
    fc = reedy.factorization_category(r, _mor(r, args.mor))
    if args.emit == "dot":
        return fact_cat_to_dot(fc), EXIT_OK
    return dumps({"schema": 1, **fc.report()}), EXIT_OK


def cmd_boundary(args):
    r = _structure(args)
    bw = skeleta.boundary(r, _need(r, args.obj), args.side)
    if args.emit == "dot":
        return elements_to_dot(setfun.category_of_elements(bw.functor), r.degree), EXIT_OK
    return dumps({"schema": 1, "object": args.obj, "side": args.side, "boundary": diagram_to_json(bw.functor)}), EXIT_OK


def cmd_skeleton(args, co: bool = False):
    r = _structure(args)
    ctx = skeleta.truncation_context(r, args.n)
    if not args.diagram:
        h, _ = skeleta.two_sided_skeleton(r, args.n)
        return dumps({"schema": 1, "n": args.n, "hom": {label(k): list(v) for k, v in h.carrier.items()}}), EXIT_OK
    x = _diagram(r, args.diagram)
    if co:
        res = skeleta.coskeleton(ctx, x)
        return dumps({"schema": 1, "n": args.n, "coskeleton": diagram_to_json(res.value),
                      "unit": map_to_json(res.unit)}), EXIT_OK
    res = skeleta.skeleton(ctx, x)
    return dumps({"schema": 1, "n": args.n, "skeleton": diagram_to_json(res.value),
                  "counit": map_to_json(res.counit)}), EXIT_OK


def cmd_latching(args, match: bool = False):
    r = _structure(args)
    x = _diagram(r, args.diagram)
    obj = _need(r, args.obj)
    if match:
        m = skeleta.matching(r, obj, x)
        return dumps({"schema": 1, "object": obj, "matching": _set_json(m.value), "map": _fmap_json(m.map)}), EXIT_OK
    lt = skeleta.latching(r, obj, x)
    return dumps({"schema": 1, "object": obj, "latching": _set_json(lt.value), "map": _fmap_json(lt.map)}), EXIT_OK


def _square_json(lr) -> dict:
    return {
        "tag": lr.tag,
        "top_left": map_to_json(lr.top_left),
        "top_right": map_to_json(lr.top_right),
        "corner": diagram_to_json(lr.corner.obj),
        "right": map_to_json(lr.right),
        "bottom": map_to_json(lr.bottom),
        "map": map_to_json(lr.map),
    }


def cmd_leibniz(args):
    r = _structure(args)
    f = _map(r.base, args.f, "f")
    g_base = None if args.op == "tensor" else (r.base if not args.g_structure else load_structure(args.g_structure).base)
    g = _map(g_base, args.g, "g")
    lr = leibniz.leibniz(args.op, f, g)
    return dumps({"schema": 1, **_square_json(lr)}), EXIT_OK


def cmd_rel_latching(args):
    r = _structure(args)
    f = _map(r.base, args.map)
    obj = _need(r, args.obj)
    if args.side == "matching":
        rm = leibniz.relative_matching(r, obj, f)
        return dumps({"schema": 1, "object": obj, "side": "matching", "map": _fmap_json(rm.map),
                      "source": _set_json(rm.map.source), "target": _set_json(rm.map.target),
                      "injective": setfun.is_mono(rm.map), "surjective": setfun.is_epi(rm.map)}), EXIT_OK
    rl = leibniz.relative_latching(r, obj, f)
    return dumps({"schema": 1, "object": obj, "side": "latching", "map": _fmap_json(rl.map),
                  "source": _set_json(rl.map.source), "target": _set_json(rl.map.target),
                  "injective": setfun.is_mono(rl.map), "surjective": setfun.is_epi(rl.map)}), EXIT_OK


def _emit_presentation(p, emit: str, extra: dict | None = None):
    if emit == "dot":
        return presentation_to_dot(p), EXIT_OK
    doc = presentation_to_json(p)
    if extra:
        doc.update(extra)
    return dumps(doc), EXIT_OK


def cmd_cells(args):
    r = _structure(args)
    p = cellular.canonical_hom_presentation(r)
    if args.upto is not None:
        p.stages = [st for st in p.stages if st.index <= args.upto]
    if args.emit == "dot":
        return presentation_to_dot(p), EXIT_OK
    doc = {
        "schema": 1,
        "stages": [{"index": st.index, "cells": [c.label for c in st.cells],
                    "certificate": {"pushout": st.is_pushout, "pullback": st.is_pullback},
                    "object": {label(k): list(v) for k, v in st.obj.carrier.items()}} for st in p.stages],
    }
    return dumps(doc), EXIT_OK


def cmd_build_up(args):
    r = _structure(args)
    f = _map(r.base, args.map)
    p = cellular.building_up(r, f)
    rp = cellular.replay(p)
    return _emit_presentation(p, args.emit, {"replay": rp.ok})


def cmd_replay(args):
    r = _structure(args)
    if args.presentation:
        p = presentation_from_json(r.base, load_json(args.presentation))
    elif args.map:
        p = cellular.building_up(r, _map(r.base, args.map))
    else:
        p = cellular.canonical_hom_presentation(r)
    rp = cellular.replay(p)
    doc = {"schema": 1, "ok": rp.ok, "failed_stage": rp.failed_stage, "failed_cell": rp.failed_cell, "reason": rp.reason}
    return dumps(doc), EXIT_OK if rp.ok else EXIT_INVALID


def cmd_is_cell(args):
    r = _structure(args)
    f = _map(r.base, args.map)
    if args.base != "mono":
        raise UsageError("only the mono base is available from the command line")
    v = cellular.is_relative_cell(r, f)
    doc = {"schema": 1, "is_cell": v.is_cell}
    if v.witness:
        doc["witness"] = {"object": v.witness["object"],
                          "elements": [label(e) for e in v.witness["elements"]] if v.witness["elements"] else None}
    if v.presentation is not None:
        doc["cell_counts"] = v.presentation.cell_counts()
        doc["replay"] = v.replay.ok
        if args.emit == "dot":
            return presentation_to_dot(v.presentation), EXIT_OK
    return dumps(doc), EXIT_OK


def cmd_ez(args):
    r = _structure(args)
    x = _diagram(r, args.diagram)
    if x.variance != setfun.CONTRA:
        raise UsageError("ez expects a contravariant diagram (a truncated simplicial set)")
    res = cellular.ez_decompose(x, _need(r, args.level), args.simplex)
    return dumps({"schema": 1, "simplex": args.simplex, "epi": res.epi, "level": res.simplex[0],
                  "nondegenerate": label(res.simplex[1]), "decompositions": res.candidates}), EXIT_OK


def cmd_factor(args):
    r = _structure(args)
    f = _map(r.base, args.map)
    fa = wfs.reedy_factor(r, f, flavor=args.flavor)
    return dumps({"schema": 1, "flavor": args.flavor, "middle": diagram_to_json(fa.middle),
                  "left": map_to_json(fa.left), "right": map_to_json(fa.right),
                  "left_is_reedy_left": wfs.is_reedy_left(r, fa.left).member,
                  "right_is_reedy_right": wfs.is_reedy_right(r, fa.right).member}), EXIT_OK


def cmd_lift(args):
    r = _structure(args)
    i, p = _map(r.base, args.i, "i"), _map(r.base, args.p, "p")
    sq = load_json(args.square)
    try:
        u = setfun.nat_trans_from_json(i.source, p.source, {"components": sq["top"]})
        v = setfun.nat_trans_from_json(i.target, p.target, {"components": sq["bottom"]})
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"square document needs 'top' and 'bottom': {exc}") from None
    _checked(u, "top")
    _checked(v, "bottom")
    res = wfs.reedy_lift(r, i, p, u, v, strict=args.strict)
    doc = {"schema": 1, "status": res.status, "preconditions": res.preconditions, "witness": res.witness,
           "explored": res.explored}
    if res.lift is not None:
        doc["lift"] = setfun.nat_trans_to_json(res.lift)
    code = EXIT_OK if res.status == "LIFT" else EXIT_INVALID if res.status in ("NOT_COMMUTATIVE", "PRECONDITION") else EXIT_OK
    return dumps(doc), code


def cmd_classify(args):
    r = _structure(args)
    f = _map(r.base, args.map)
    m = wfs.is_reedy_left(r, f) if args.side == "left" else wfs.is_reedy_right(r, f)
    return dumps({"schema": 1, "side": args.side, "member": m.member, "failures": m.failures}), EXIT_OK


def cmd_constants(args):
    r = _structure(args)
    return dumps({"schema": 1, **wfs.constants_classification(r).to_json()}), EXIT_OK


# parser


def _structure_args(p):
    p.add_argument("--builtin", help="builtin structure spec, e.g. delta:2 or prod(omega:1,omega:1)")
    p.add_argument("--structure", help="category JSON with a Reedy overlay, or an overlay naming its category")
    p.add_argument("--emit", choices=("json", "dot"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="finreedy", description="Exact computations with finite Reedy categories.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def add(name: str, fn: Callable, help_: str):
        p = sub.add_parser(name, help=help_)
        _structure_args(p)
        p.set_defaults(fn=fn)
        return p

    p = add("builtin", cmd_builtin, "list builtin structures or print one")
    p.add_argument("spec", nargs="?")
    p.add_argument("--list", action="store_true")
    p = add("validate", cmd_validate, "validate a category and its Reedy overlay")
    p.add_argument("file", nargs="?")
    add("factorize", cmd_factorize, "canonical factorization of a morphism").add_argument("--mor", required=True)
    add("fact-cat", cmd_fact_cat, "category of factorizations of a morphism").add_argument("--mor", required=True)
    p = add("boundary", cmd_boundary, "boundary of a representable")
    p.add_argument("--obj", required=True)
    p.add_argument("--side", choices=("co", "contra"), default="contra")
    for name, co in (("skeleton", False), ("coskeleton", True)):
        p = add(name, (lambda a, co=co: cmd_skeleton(a, co)), f"{name} of a diagram, or of the hom bifunctor")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--diagram")
    for name, m in (("latching", False), ("matching", True)):
        p = add(name, (lambda a, m=m: cmd_latching(a, m)), f"{name} object and map")
        p.add_argument("--obj", required=True)
        p.add_argument("--diagram", required=True)
    p = add("leibniz", cmd_leibniz, "Leibniz construction of two maps")
    p.add_argument("--op", choices=leibniz.TAGS, required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--g-structure", help="structure of g's category for the exterior product")
    p = add("rel-latching", cmd_rel_latching, "relative latching (or matching) map")
    p.add_argument("--obj", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--side", choices=("latching", "matching"), default="latching")
    add("cells", cmd_cells, "canonical cell presentation of the hom bifunctor").add_argument("--upto", type=int)
    add("build-up", cmd_build_up, "cell presentation of a map by its relative latching maps").add_argument("--map", required=True)
    p = add("replay", cmd_replay, "recompute a presentation's pushouts")
    p.add_argument("--presentation")
    p.add_argument("--map")
    p = add("is-cell", cmd_is_cell, "relative cell complex test")
    p.add_argument("--map", required=True)
    p.add_argument("--base", default="mono")
    p = add("ez", cmd_ez, "degeneracy / nondegenerate decomposition of a simplex")
    p.add_argument("--diagram", required=True)
    p.add_argument("--level", required=True)
    p.add_argument("--simplex", required=True)
    p = add("factor", cmd_factor, "Reedy factorization of a map")
    p.add_argument("--map", required=True)
    p.add_argument("--flavor", choices=wfs.FLAVORS, default="left-then-right")
    p = add("lift", cmd_lift, "Reedy lifting problem")
    p.add_argument("--i", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--square", required=True)
    p.add_argument("--strict", action="store_true")
    p = add("classify", cmd_classify, "Reedy-left / Reedy-right membership")
    p.add_argument("--map", required=True)
    p.add_argument("--side", choices=("left", "right"), required=True)
    add("constants", cmd_constants, "cofibrant / fibrant constants classification")
    return ap


def dispatch(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if not getattr(args, "fn", None):
            raise UsageError("missing subcommand")
        text, code = args.fn(args)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except DocumentError as exc:
        err.write(f"malformed input: {exc}\n")
        return EXIT_USAGE
    except ValidationFailure as exc:
        out.write(dumps({"schema": 1, "ok": False, **exc.doc}) + "\n")
        return EXIT_INVALID
    except (CategoryError, setfun.DiagramError, AssertionError, KeyError, ValueError) as exc:
        err.write(f"computation error: {type(exc).__name__}: {exc}\n")
        return EXIT_COMPUTE
    out.write(text if text.endswith("\n") else text + "\n")
    return code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
