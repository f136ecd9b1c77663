"""Reedy factorizations and lifts over a factorization system on finite sets.

A base system supplies a left class, a right class, a factorization of any
set map and a lift for left-against-right squares.  Reedy-left maps have
relative latching maps in the left class, Reedy-right maps have relative
matching maps in the right class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable

from .finsets import emin, esorted, label
from .fincat import full_subcategory
from .leibniz import leibniz, relative_latching, relative_matching
from .reedy import ReedyStructure, dual_reedy, reedy_factorize, truncate
from .setfun import (
    CO,
    CONTRA,
    DiagramError,
    FinSet,
    SetNatTrans,
    SetValuedFunctor,
    compose,
    constant_functor,
    induced_from_pushout,
    is_epi,
    is_iso,
    is_mono,
    restrict,
    set_map,
    set_map_fn,
    to_opposite,
)
from .skeleta import (
    ExtensionChoice,
    ExtensionError,
    _lan_at,
    _ran_at,
    _tau_value,
    boundary,
    extend_diagram,
    latching,
    matching,
)

SEARCH_CAP = 1_000_000


@dataclass
class BaseSystem:
    name: str
    left: Callable[[SetNatTrans], bool]
    right: Callable[[SetNatTrans], bool]
    factor: Callable[[SetNatTrans], tuple]  # f -> (i, p) with f = p i
    lift: Callable[[SetNatTrans, SetNatTrans, dict, dict], dict]  # (i, p, u, v) -> h


def _mono_epi_factor(f: SetNatTrans):
    a, b = f.source, f.target
    mid = FinSet([("inl", x) for x in a.elements] + [("inr", y) for y in b.elements])
    fm = set_map_fn(f)
    i = set_map(a, mid, {x: ("inl", x) for x in a.elements})
    p = set_map(mid, b, {**{("inl", x): fm[x] for x in a.elements}, **{("inr", y): y for y in b.elements}})
    return i, p


def _mono_epi_lift(i, p, u, v):
    inv = {y: x for x, y in set_map_fn(i).items()}
    pre: dict = {}
    for x, y in set_map_fn(p).items():
        pre.setdefault(y, []).append(x)
    h = {}
    for b in i.target.elements:
        h[b] = u[inv[b]] if b in inv else emin(pre[v[b]])
    return h


def _iso_all_factor(f):
    return set_map(f.source, f.source, {x: x for x in f.source.elements}), f


def _iso_all_lift(i, p, u, v):
    inv = {y: x for x, y in set_map_fn(i).items()}
    return {b: u[inv[b]] for b in i.target.elements}


def _all_iso_factor(f):
    return f, set_map(f.target, f.target, {x: x for x in f.target.elements})


def _all_iso_lift(i, p, u, v):
    inv = {y: x for x, y in set_map_fn(p).items()}
    return {b: inv[v[b]] for b in i.target.elements}


MONO_EPI = BaseSystem("mono-epi", is_mono, is_epi, _mono_epi_factor, _mono_epi_lift)
ISO_ALL = BaseSystem("iso-all", is_iso, lambda f: True, _iso_all_factor, _iso_all_lift)
ALL_ISO = BaseSystem("all-iso", lambda f: True, is_iso, _all_iso_factor, _all_iso_lift)
BASE_SYSTEMS = {b.name: b for b in (MONO_EPI, ISO_ALL, ALL_ISO)}


def base_system(name: str | BaseSystem) -> BaseSystem:
    if isinstance(name, BaseSystem):
        return name
    if name not in BASE_SYSTEMS:
        raise DiagramError(f"unknown base system {name!r}; known: {sorted(BASE_SYSTEMS)}")
    return BASE_SYSTEMS[name]


# class membership


@dataclass
class Membership:
    member: bool
    failures: list = field(default_factory=list)  # objects whose relative map is outside the class


def is_reedy_left(r: ReedyStructure, f: SetNatTrans, base: str | BaseSystem = MONO_EPI) -> Membership:
    b = base_system(base)
    bad = [o for o in r.base.objects if not b.left(relative_latching(r, o, f, cross_check=False).map)]
    return Membership(not bad, bad)


def is_reedy_right(r: ReedyStructure, f: SetNatTrans, base: str | BaseSystem = MONO_EPI) -> Membership:
    b = base_system(base)
    bad = [o for o in r.base.objects if not b.right(relative_matching(r, o, f, cross_check=False).map)]
    return Membership(not bad, bad)


# factorization


@dataclass
class ReedyFactorization:
    middle: SetValuedFunctor
    left: SetNatTrans
    right: SetNatTrans


def _degree_subcats(r: ReedyStructure, n: int):
    rn, _ = truncate(r, n)
    sub, _ = full_subcategory(rn.base, [o for o in rn.base.objects if rn.degree[o] < n])
    return rn, sub


FLAVORS = ("left-then-right", "right-then-left")


def reedy_factor(r: ReedyStructure, f: SetNatTrans, base: str | BaseSystem = MONO_EPI,
                 flavor: str = "left-then-right") -> ReedyFactorization:
    """Factor f = p i, building the middle object one degree at a time by
    factoring X^c u_{L^c X} L^c Z -> M^c Z x_{M^c Y} Y^c in the base system.

    With a single base system both flavors run the same construction."""
    if flavor not in FLAVORS:
        raise DiagramError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")
    b = base_system(base)
    x, y = f.source, f.target
    if not isinstance(x, SetValuedFunctor) or x.variance != CO:
        raise DiagramError("reedy_factor expects a map of covariant diagrams")
    c = r.base
    z = None
    icomp: dict = {}
    pcomp: dict = {}
    for n in range(0, r.max_degree + 1):
        rn, sub = _degree_subcats(r, n)
        zs = z if z is not None else SetValuedFunctor(sub, CO, {}, {})
        xs = restrict(x, sub)
        choices = {}
        for o in rn.objects_of_degree(n):
            latz, zcls = _lan_at(rn, sub, zs, o)
            latx, xcls = _lan_at(rn, sub, xs, o)
            # A = X^c u_{L^c X} L^c Z, built as tagged classes
            from .finsets import UnionFind

            uf = UnionFind([("inl", v) for v in x.carrier[o]] + [("inr", t) for t in latz.elements])
            for (d, u, v) in latx.elements:
                uf.union(("inl", x.action[u][v]), ("inr", zcls[(d, u, icomp[d][v])]))
            acls = uf.classes()
            A = FinSet(set(acls.values()))
            fams_z = _ran_at(rn, sub, zs, o)
            keys = [(d, w) for d in sub.objects for w in c.hom(o, d)]

            def pmatch(fam):
                return tuple(((d, w), pcomp[d][v]) for (d, w), v in fam)

            def ymatch(yv):
                return tuple(((d, w), y.action[w][yv]) for (d, w) in keys)

            Bel = [(fam, yv) for fam in fams_z for yv in y.carrier[o] if pmatch(fam) == ymatch(yv)]
            B = FinSet(Bel)
            g = {}
            for e, rep in acls.items():
                tag, v = e
                if tag == "inl":
                    img = (tuple(((d, w), icomp[d][x.action[w][v]]) for (d, w) in keys), f.components[o][v])
                else:
                    d0, u0, z0 = v
                    img = (_tau_value(rn, sub, zs, o, v), y.action[u0][pcomp[d0][z0]])
                if rep in g and g[rep] != img:
                    raise AssertionError("map out of the relative latching object is not well defined")
                g[rep] = img
            gmap = set_map(A, B, g)
            i0, p0 = b.factor(gmap)
            E = i0.target
            im = set_map_fn(i0)
            pm = set_map_fn(p0)
            latch = {t: im[acls[("inr", t)]] for t in latz.elements}
            match = {e: pm[e][0] for e in E.elements}
            choices[o] = ExtensionChoice(list(E.elements), latch, match)
            icomp[o] = {v: im[acls[("inl", v)]] for v in x.carrier[o]}
            pcomp[o] = {e: pm[e][1] for e in E.elements}
        z = extend_diagram(r, n, zs, choices)
        if isinstance(z, ExtensionError):
            raise AssertionError(f"factorization choices rejected at {z.object}: {z.reason}")
    z = SetValuedFunctor(c, CO, z.carrier, z.action)
    left = SetNatTrans(x, z, icomp)
    right = SetNatTrans(z, y, pcomp)
    for m in (left, right):
        rep = m.validate()
        if not rep:
            raise AssertionError(f"factor is not natural: {rep}")
    if compose(right, left) != f:
        raise AssertionError("factors do not compose to f")
    return ReedyFactorization(z, left, right)


# lifting


@dataclass
class LiftResult:
    status: str  # "LIFT", "UNSOLVABLE", "SEARCH_LIMIT", "NOT_COMMUTATIVE"
    lift: SetNatTrans | None = None
    witness: dict | None = None
    explored: int = 0
    preconditions: dict = field(default_factory=dict)


def _candidates(r, i, p, u, v, h, o):
    """Per-element admissible values of h at o given h on lower degrees."""
    c = r.base
    A, B, X = i.source, i.target, p.source
    lower = [d for d in c.objects if r.degree[d] < r.degree[o]]
    forced: dict = {}
    conflict = None
    for a in A.carrier[o]:
        forced.setdefault(i.components[o][a], set()).add(u.components[o][a])
    for d in lower:
        for w in c.hom(d, o):
            for bv in B.carrier[d]:
                forced.setdefault(B.action[w][bv], set()).add(X.action[w][h[d][bv]])
    out = {}
    for bv in B.carrier[o]:
        opts = [xv for xv in X.carrier[o] if p.components[o][xv] == v.components[o][bv]]
        for d in lower:
            for w in c.hom(o, d):
                target = h[d][B.action[w][bv]]
                opts = [xv for xv in opts if X.action[w][xv] == target]
        if bv in forced:
            opts = [xv for xv in opts if xv in forced[bv]] if len(forced[bv]) == 1 else []
        out[bv] = esorted(opts)
        if not out[bv] and conflict is None:
            conflict = bv
    return out, conflict


def reedy_lift(r: ReedyStructure, i: SetNatTrans, p: SetNatTrans, u: SetNatTrans, v: SetNatTrans,
               base: str | BaseSystem = MONO_EPI, cap: int = SEARCH_CAP, strict: bool = False) -> LiftResult:
    """A diagonal h: B -> X with h i = u and p h = v, found degree by degree.

    When i is Reedy-left and p Reedy-right the base lift solves each
    relative square.  Otherwise (unless ``strict``) an exhaustive degreewise
    search runs, greedy branch first, up to ``cap`` nodes."""
    li, rp = is_reedy_left(r, i, base), is_reedy_right(r, p, base)
    pre = {
        "left_is_reedy_left": li.member,
        "right_is_reedy_right": rp.member,
        "left_failures": li.failures,
        "right_failures": rp.failures,
    }
    if compose(p, u) != compose(v, i):
        return LiftResult("NOT_COMMUTATIVE", preconditions=pre)
    if pre["left_is_reedy_left"] and pre["right_is_reedy_right"]:
        return LiftResult("LIFT", _degreewise_base_lift(r, i, p, u, v, base_system(base)), preconditions=pre)
    if strict:
        return LiftResult("PRECONDITION", preconditions=pre)
    order = sorted(r.base.objects, key=lambda o: (r.degree[o], o))
    h: dict = {}
    explored = 0
    first_obstruction: list = []

    def go(k: int) -> bool:
        nonlocal explored
        if k == len(order):
            return True
        o = order[k]
        cands, bad = _candidates(r, i, p, u, v, h, o)
        if bad is not None:
            if not first_obstruction:
                first_obstruction.append({"object": o, "element": label(bad)})
            return False
        elems = list(cands)
        for combo in iproduct(*(cands[e] for e in elems)):
            explored += 1
            if explored > cap:
                raise _Capped()
            h[o] = dict(zip(elems, combo))
            if go(k + 1):
                return True
        h.pop(o, None)
        return False

    try:
        found = go(0)
    except _Capped:
        return LiftResult("SEARCH_LIMIT", explored=explored, preconditions=pre)
    if not found:
        return LiftResult("UNSOLVABLE", witness=first_obstruction[0] if first_obstruction else None,
                          explored=explored, preconditions=pre)
    lift = SetNatTrans(i.target, p.source, h)
    rep = lift.validate()
    if not rep or compose(lift, i) != u or compose(p, lift) != v:
        raise AssertionError("degreewise lift is not a lift")
    return LiftResult("LIFT", lift, explored=explored, preconditions=pre)


class _Capped(Exception):
    pass


def _degreewise_base_lift(r, i, p, u, v, b: BaseSystem) -> SetNatTrans:
    """Solve L^c-hat(i) against M^c-hat(p) with the base lift, degree by degree."""
    c = r.base
    A, B, X = i.source, i.target, p.source
    h: dict = {}
    order = sorted(c.objects, key=lambda o: (r.degree[o], o))

    def via_lower(w, bv):
        # h(B_w b) for w: o -> d or d -> o through a lower-degree object
        fac = reedy_factorize(r, w)
        return X.action[fac.right][h[fac.mid][B.action[fac.left][bv]]]

    for o in order:
        rl = relative_latching(r, o, i, cross_check=False)
        rm = relative_matching(r, o, p, cross_check=False)
        po, pb = rl.pushout, rm.pullback
        top_a = set_map(FinSet(A.carrier[o]), FinSet(X.carrier[o]), u.components[o])
        lb = po.g.target  # L^c B
        top_l = set_map(lb, FinSet(X.carrier[o]), {(d, w, bv): via_lower(w, bv) for (d, w, bv) in lb.elements})
        top = set_map_fn(induced_from_pushout(po, top_a, top_l))
        index = {(yv, frozenset(fam)): (yv, fam) for (yv, fam) in pb.obj.elements}
        bw = boundary(r, o, CO, cross_check=False).functor
        keys = [(d, w) for d in c.objects for w in bw.carrier[d]]
        bottom = {bv: index[(v.components[o][bv], frozenset((k, via_lower(k[1], bv)) for k in keys))]
                  for bv in B.carrier[o]}
        hc = b.lift(rl.map, rm.map, top, bottom)
        h[o] = hc
    lift = SetNatTrans(B, X, h)
    if not lift.validate() or compose(lift, i) != u or compose(p, lift) != v:
        raise AssertionError("base lift is not a lift")
    return lift


def all_lifts_bruteforce(i: SetNatTrans, p: SetNatTrans, u: SetNatTrans, v: SetNatTrans, cap: int = 200_000) -> int:
    """Count lifts by enumerating every family of component functions."""
    B, X = i.target, p.source
    nodes = list(B.nodes())
    slots = [(n, b) for n in nodes for b in B.carrier[n]]
    pools = [list(X.carrier[n]) for n, _ in slots]
    total = 1
    for pl in pools:
        total *= len(pl)
    if total > cap:
        raise DiagramError("search space too large")
    count = 0
    for combo in iproduct(*pools):
        comps = {n: {} for n in nodes}
        for (n, b), val in zip(slots, combo):
            comps[n][b] = val
        h = SetNatTrans(B, X, comps)
        if h.validate() and compose(h, i) == u and compose(p, h) == v:
            count += 1
    return count


# Leibniz preservation


@dataclass
class PreservationCertificate:
    preconditions: dict
    injective: bool | None = None
    map: SetNatTrans | None = None  # f (*)^ i
    presentation: object = None  # cells are the relative latching maps of i
    replay_ok: bool | None = None
    cells_injective: bool | None = None

    @property
    def holds(self) -> bool:
        return bool(self.injective and self.replay_ok and self.cells_injective)


def leibniz_left_preservation(r: ReedyStructure, f: SetNatTrans, i: SetNatTrans,
                              base: str | BaseSystem = MONO_EPI) -> PreservationCertificate:
    """For a weight map f with injective relative latching maps and a
    Reedy-left i, certify that the Leibniz weighted colimit f (*)^ i is
    injective and present it with one cell per boundary cell of f."""
    from .cellular import boundary_cell_presentation, presentation_to_opposite, replay, transfer_first

    if f.source.variance != CONTRA or i.source.variance != CO:
        raise DiagramError("expected a contravariant weight map and a covariant diagram map")
    rd = dual_reedy(r)
    fo = SetNatTrans(to_opposite(f.source), to_opposite(f.target), f.components)
    wl, il = is_reedy_left(rd, fo, base), is_reedy_left(r, i, base)
    pre = {"weight_left": wl.member, "weight_failures": wl.failures, "map_left": il.member, "map_failures": il.failures}
    if not (wl.member and il.member):
        return PreservationCertificate(pre)
    lr = leibniz("wcolim", f, i, verify=False)
    pres = presentation_to_opposite(boundary_cell_presentation(rd, fo))
    moved = transfer_first(pres, i, "wcolim")
    rp = replay(moved)
    cells_ok = all(is_mono(c.map) for c in moved.cells())
    return PreservationCertificate(pre, is_mono(lr.map), lr.map, moved, rp.ok and moved.target == lr.map, cells_ok)


# constant diagrams


@dataclass
class ConstantsReport:
    cofibrant: bool  # every latching weight connected or empty
    fibrant: bool  # every matching weight connected or empty
    latching_components: dict
    matching_components: dict
    cofibrant_check: bool  # latching maps of constant diagrams injective
    fibrant_check: bool  # matching maps of constant diagrams surjective

    @property
    def consistent(self) -> bool:
        return self.cofibrant == self.cofibrant_check and self.fibrant == self.fibrant_check

    def to_json(self) -> dict:
        return {
            "cofibrant_constants": self.cofibrant,
            "fibrant_constants": self.fibrant,
            "latching_components": self.latching_components,
            "matching_components": self.matching_components,
            "consistent": self.consistent,
        }


def _components(w: SetValuedFunctor) -> int:
    from .setfun import category_of_elements

    return len(category_of_elements(w).components())


def constants_classification(r: ReedyStructure) -> ConstantsReport:
    lat, mat = {}, {}
    for o in r.base.objects:
        lat[o] = _components(boundary(r, o, CONTRA, cross_check=False).functor)
        mat[o] = _components(boundary(r, o, CO, cross_check=False).functor)
    cof = all(k <= 1 for k in lat.values())
    fib = all(k <= 1 for k in mat.values())
    const = constant_functor(r.base, [0, 1])
    cof_chk = all(is_mono(latching(r, o, const, cross_check=False).map) for o in r.base.objects)
    fib_chk = all(is_epi(matching(r, o, const, cross_check=False).map) for o in r.base.objects)
    return ConstantsReport(cof, fib, lat, mat, cof_chk, fib_chk)
