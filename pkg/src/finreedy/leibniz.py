"""Arrow-category constructions: exterior products, Leibniz (pushout-corner)
maps for three bifunctors, relative latching and matching maps, composite
decomposition and the lifting transposition rule on finite sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from .fincat import ProductCategory, product
from .reedy import ReedyStructure
from .setfun import (
    CO,
    CONTRA,
    DiagramError,
    FinSet,
    Pullback,
    Pushout,
    SetBifunctor,
    SetNatTrans,
    SetValuedFunctor,
    _Diagram,
    compose,
    induced_from_pushout,
    induced_to_pullback,
    is_iso,
    is_pullback_square,
    is_pushout_square,
    pullback,
    pushout,
    set_map,
    set_map_fn,
    tensor,
    weighted_colimit,
    weighted_limit,
    wcolim_map,
    wlim_map,
)
from .skeleta import boundary, latching, matching

TAGS = ("exterior", "tensor", "wcolim")


# exterior products


def exterior_product(x: SetValuedFunctor, y: SetValuedFunctor, prod: ProductCategory | None = None) -> _Diagram:
    """x on C, y on D.  Same variance: a functor on C x D with pairs (a, b).
    Mixed variance: a bifunctor contravariant in the contravariant factor's
    category, with elements (contravariant element, covariant element)."""
    if x.variance == y.variance:
        p = prod or product(x.base, y.base)
        carrier = {o: list(iproduct(x.carrier[a], y.carrier[b])) for o, (a, b) in p.obj_pairs.items()}
        action = {}
        for m, (f, g) in p.mor_pairs.items():
            xf, yg = x.action[f], y.action[g]
            src = p.obj_pairs[p.src(m) if x.variance == CO else p.dst(m)]
            action[m] = {(a, b): (xf[a], yg[b]) for a in x.carrier[src[0]] for b in y.carrier[src[1]]}
        return SetValuedFunctor(p, x.variance, carrier, action)
    contra, co = (x, y) if x.variance == CONTRA else (y, x)
    c, d = contra.base, co.base
    carrier = {(a, b): list(iproduct(contra.carrier[a], co.carrier[b])) for a in c.objects for b in d.objects}
    action = {}
    for f, (s, t) in c.morphisms.items():
        for b in d.objects:
            action[("L", f, b)] = {(u, v): (contra.action[f][u], v) for u in contra.carrier[t] for v in co.carrier[b]}
    for a in c.objects:
        for g, (s, t) in d.morphisms.items():
            action[("R", a, g)] = {(u, v): (u, co.action[g][v]) for u in contra.carrier[a] for v in co.carrier[s]}
    return SetBifunctor(c, d, carrier, action)


def exterior_map(f: SetNatTrans, g: SetNatTrans, src: _Diagram | None = None, tgt: _Diagram | None = None) -> SetNatTrans:
    src = src or exterior_product(f.source, g.source)
    tgt = tgt or exterior_product(f.target, g.target)
    comps = {}
    if isinstance(src, SetBifunctor):
        contra_first = f.source.variance == CONTRA
        for (a, b) in src.nodes():
            cf, cg = (f, g) if contra_first else (g, f)
            comps[(a, b)] = {(u, v): (cf.components[a][u], cg.components[b][v]) for u, v in src.carrier[(a, b)]}
    else:
        p = src.base
        for o, (a, b) in p.obj_pairs.items():
            comps[o] = {(u, v): (f.components[a][u], g.components[b][v]) for u, v in src.carrier[o]}
    return SetNatTrans(src, tgt, comps)


# bifunctor registry


class _Bifunctor:
    name = ""

    def obj(self, a, b) -> _Diagram:
        raise NotImplementedError

    def map(self, f: SetNatTrans, g: SetNatTrans) -> SetNatTrans:
        raise NotImplementedError


class _Exterior(_Bifunctor):
    name = "exterior"

    def __init__(self):
        self._prods: dict = {}
        self._objs: dict = {}

    def _prod(self, x, y):
        key = (id(x.base), id(y.base))
        if key not in self._prods:
            self._prods[key] = product(x.base, y.base)
        return self._prods[key]

    def obj(self, a, b):
        key = (id(a), id(b))
        if key not in self._objs:
            prod = self._prod(a, b) if a.variance == b.variance else None
            self._objs[key] = (a, b, exterior_product(a, b, prod))
        return self._objs[key][2]

    def map(self, f, g):
        return exterior_map(f, g, self.obj(f.source, g.source), self.obj(f.target, g.target))


class _Tensor(_Bifunctor):
    """Diagram (or finite set) times a finite set."""

    name = "tensor"

    def __init__(self):
        self._objs: dict = {}

    def obj(self, a, b):
        if not isinstance(b, FinSet):
            raise DiagramError("tensor needs a finite set in the second slot")
        key = (id(a), id(b))
        if key not in self._objs:
            self._objs[key] = (a, b, tensor(a, b.elements))
        return self._objs[key][2]

    def map(self, f, g):
        gs = set_map_fn(g)
        src, tgt = self.obj(f.source, g.source), self.obj(f.target, g.target)
        comps = {n: {(e, t): (f.components[n][e], gs[t]) for e, t in src.carrier[n]} for n in src.nodes()}
        return SetNatTrans(src, tgt, comps)


class _WColim(_Bifunctor):
    """Weight (contravariant functor or bifunctor) weighted colimit diagram."""

    name = "wcolim"

    def __init__(self):
        self._objs: dict = {}

    def result(self, a, b):
        key = (id(a), id(b))
        if key not in self._objs:
            self._objs[key] = (a, b, weighted_colimit(a, b))
        return self._objs[key][2]

    def obj(self, a, b):
        return self.result(a, b).value

    def map(self, f, g):
        return wcolim_map(f, g, self.result(f.source, g.source), self.result(f.target, g.target))


def bifunctor(tag: str) -> _Bifunctor:
    if tag == "exterior":
        return _Exterior()
    if tag == "tensor":
        return _Tensor()
    if tag == "wcolim":
        return _WColim()
    raise DiagramError(f"unknown bifunctor tag {tag!r}; expected one of {TAGS}")


def _ident(x):
    return SetNatTrans(x, x, {n: {e: e for e in x.carrier[n]} for n in x.nodes()})


@dataclass
class LeibnizResult:
    """f: A -> A', g: B -> B'.  Square A(x)B -> A'(x)B, A(x)B -> A(x)B',
    corner = pushout, map = the induced corner -> A'(x)B'."""

    tag: str
    f: SetNatTrans
    g: SetNatTrans
    top_left: SetNatTrans  # A(x)B -> A(x)B'   (A (x) g)
    top_right: SetNatTrans  # A(x)B -> A'(x)B  (f (x) B)
    corner: Pushout  # inl from A(x)B', inr from A'(x)B
    right: SetNatTrans  # A(x)B' -> A'(x)B'
    bottom: SetNatTrans  # A'(x)B -> A'(x)B'
    map: SetNatTrans
    ops: _Bifunctor = field(repr=False)


def leibniz(tag: str, f: SetNatTrans, g: SetNatTrans, ops: _Bifunctor | None = None, verify: bool = True) -> LeibnizResult:
    ops = ops or bifunctor(tag)
    A, A2, B, B2 = f.source, f.target, g.source, g.target
    Ag = ops.map(_ident(A), g)
    fB = ops.map(f, _ident(B))
    fB2 = ops.map(f, _ident(B2))
    A2g = ops.map(_ident(A2), g)
    po = pushout(Ag, fB)
    m = induced_from_pushout(po, fB2, A2g)
    if verify:
        if not is_pushout_square(Ag, fB, po.inl, po.inr):
            raise AssertionError("corner is not a pushout")
        for n in po.obj.nodes():
            for x in Ag.target.carrier[n]:
                assert m.components[n][po.inl.components[n][x]] == fB2.components[n][x]
            for x in fB.target.carrier[n]:
                assert m.components[n][po.inr.components[n][x]] == A2g.components[n][x]
    return LeibnizResult(tag, f, g, Ag, fB, po, fB2, A2g, m, ops)


# relative latching and matching


@dataclass
class RelativeMap:
    object: str
    map: SetNatTrans  # FinSet -> FinSet
    pushout: Pushout | None = None
    pullback: Pullback | None = None


def relative_latching(r: ReedyStructure, obj: str, f: SetNatTrans, cross_check: bool = True) -> RelativeMap:
    """X^c u_{L^c X} L^c Y -> Y^c for f: X -> Y."""
    x, y = f.source, f.target
    lx, ly = latching(r, obj, x, cross_check=False), latching(r, obj, y, cross_check=False)
    lf = wcolim_map(None, f, lx.wcolim, ly.wcolim)
    fc = set_map(FinSet(x.carrier[obj]), FinSet(y.carrier[obj]), f.components[obj])
    po = pushout(lx.map, lf)
    m = induced_from_pushout(po, fc, ly.map)
    if cross_check:
        _check_rel_latching(r, obj, f, po, m)
    return RelativeMap(obj, m, pushout=po)


def _yoneda_colim(wc, x: SetValuedFunctor, obj: str) -> SetNatTrans:
    """C^c (*) X -> X^c, [d, u, v] |-> X(u)(v)."""
    return set_map(wc.value, FinSet(x.carrier[obj]), {(d, u, v): x.action[u][v] for (d, u, v) in wc.value.elements})


def _check_rel_latching(r, obj, f, po, m):
    bw = boundary(r, obj, CONTRA, cross_check=False)
    lr = leibniz("wcolim", bw.inclusion, f, verify=False)
    # Yoneda identifications on the representable parts
    ops = lr.ops
    rep_x = ops.result(bw.inclusion.target, f.source)
    rep_y = ops.result(bw.inclusion.target, f.target)
    yx = _yoneda_colim(rep_x, f.source, obj)
    yy = _yoneda_colim(rep_y, f.target, obj)
    if not (is_iso(yx) and is_iso(yy)):
        raise AssertionError("Yoneda comparison is not invertible")
    # comparison of corners: inl part (bd (*) Y) matches L^c Y, inr part (C^c (*) X) matches X^c
    comp = {}
    for e, rep in lr.corner.classes[FinSet.NODE].items():
        tag, t = e
        if tag == "inl":
            val = po.inr.components[FinSet.NODE][t]
        else:
            val = po.inl.components[FinSet.NODE][yx.components[FinSet.NODE][t]]
        if rep in comp and comp[rep] != val:
            raise AssertionError("corner comparison not well defined")
        comp[rep] = val
    if len(set(comp.values())) != len(comp) or set(comp.values()) != set(po.obj.elements):
        raise AssertionError("relative latching corners disagree")
    for rep, val in comp.items():
        if yy.components[FinSet.NODE][lr.map.components[FinSet.NODE][rep]] != m.components[FinSet.NODE][val]:
            raise AssertionError("relative latching maps disagree")


def relative_matching(r: ReedyStructure, obj: str, f: SetNatTrans, cross_check: bool = True) -> RelativeMap:
    """X^c -> Y^c x_{M^c Y} M^c X for f: X -> Y."""
    x, y = f.source, f.target
    mx, my = matching(r, obj, x, cross_check=False), matching(r, obj, y, cross_check=False)
    mf = wlim_map(None, f, mx.wlim, my.wlim)
    fc = set_map(FinSet(x.carrier[obj]), FinSet(y.carrier[obj]), f.components[obj])
    pb = pullback(my.map, mf)
    m = induced_to_pullback(pb, fc, mx.map)
    if cross_check and not is_pullback_square(pb.p1, pb.p2, my.map, mf):
        raise AssertionError("relative matching codomain is not a pullback")
    return RelativeMap(obj, m, pullback=pb)


def leibniz_limit(f: SetNatTrans, g: SetNatTrans) -> tuple[SetNatTrans, Pullback]:
    """For a weight map f: W -> W' and diagram map g: X -> Y, the map
    {W', X} -> {W, X} x_{{W, Y}} {W', Y}."""
    W, W2, X, Y = f.source, f.target, g.source, g.target
    w2x, wx, wy, w2y = weighted_limit(W2, X), weighted_limit(W, X), weighted_limit(W, Y), weighted_limit(W2, Y)
    a = wlim_map(f, None, w2x, wx)
    b = wlim_map(None, g, wx, wy)
    c = wlim_map(f, None, w2y, wy)
    d = wlim_map(None, g, w2x, w2y)
    pb = pullback(b, c)
    return induced_to_pullback(pb, a, d), pb


# composites


@dataclass
class CompositeCertificate:
    k: SetNatTrans  # corner(f, g) ... see decompose_composite
    square_ok: bool
    equality_ok: bool
    first: LeibnizResult
    second: LeibnizResult
    whole: LeibnizResult

    @property
    def valid(self) -> bool:
        return self.square_ok and self.equality_ok


def decompose_composite(tag: str, f: SetNatTrans, f2: SetNatTrans, g: SetNatTrans) -> CompositeCertificate:
    """(f2 f) (x)^ g = (f2 (x)^ g) k where k is a pushout of f (x)^ g."""
    if f.target != f2.source:
        raise DiagramError("maps are not composable")
    ops = bifunctor(tag)
    first = leibniz(tag, f, g, ops)
    second = leibniz(tag, f2, g, ops)
    whole = leibniz(tag, compose(f2, f), g, ops)
    # k: corner(f2 f, g) -> corner(f2, g); A(x)B' via f(x)B' then inl, A''(x)B by inr
    fB2 = first.right
    k = induced_from_pushout(
        whole.corner,
        compose(second.corner.inl, fB2),
        second.corner.inr,
    )
    # comparison corner(f, g) -> corner(f2 f, g): A(x)B' by inl, A'(x)B via f2(x)B then inr
    j = induced_from_pushout(first.corner, whole.corner.inl, compose(whole.corner.inr, second.top_right))
    square_ok = is_pushout_square(j, first.map, k, second.corner.inl)
    equality_ok = compose(second.map, k) == whole.map
    return CompositeCertificate(k, square_ok, equality_ok, first, second, whole)


# lifting transposition for the cartesian product of finite sets


def _fun_set(src: FinSet, tgt: FinSet) -> FinSet:
    """tgt^src as value tuples indexed by sorted src."""
    return FinSet(iproduct(tgt.elements, repeat=len(src.elements)))


def _apply(fn: tuple, dom: FinSet, x):
    return fn[dom.elements.index(x)]


@dataclass
class SetSquare:
    """Lifting problem i against p for finite sets: top u: dom i -> dom p,
    bottom v: cod i -> cod p with p u = v i."""

    i: SetNatTrans
    p: SetNatTrans
    top: dict
    bottom: dict

    def commutes(self) -> bool:
        i, p = set_map_fn(self.i), set_map_fn(self.p)
        return all(p[self.top[a]] == self.bottom[i[a]] for a in self.i.source.elements)

    def is_lift(self, t: dict) -> bool:
        i, p = set_map_fn(self.i), set_map_fn(self.p)
        return all(t[i[a]] == self.top[a] for a in self.i.source.elements) and all(
            p[t[b]] == self.bottom[b] for b in self.i.target.elements
        )


def exhaustive_set_lifts(sq: SetSquare, limit: int | None = None) -> list[dict]:
    """All lifts, by enumerating the fibres of p over the bottom map."""
    i, p = set_map_fn(sq.i), set_map_fn(sq.p)
    fibres = {}
    for b in sq.i.target.elements:
        fibres[b] = [z for z in sq.p.source.elements if p[z] == sq.bottom[b]]
    forced = {}
    for a in sq.i.source.elements:
        b = i[a]
        if b in forced and forced[b] != sq.top[a]:
            return []
        forced[b] = sq.top[a]
    free = [b for b in sq.i.target.elements if b not in forced]
    if any(forced[b] not in fibres[b] for b in forced):
        return []
    out = []
    for choice in iproduct(*(fibres[b] for b in free)):
        t = dict(forced)
        t.update(zip(free, choice))
        out.append(t)
        if limit is not None and len(out) >= limit:
            break
    return out


@dataclass
class Transposed:
    original: SetSquare  # (i x^ j) against p
    transposed: SetSquare  # i against hom^(j, p)
    lr: LeibnizResult
    hom_target: Pullback


def transpose_lifting_problem(tag: str, i: SetNatTrans, j: SetNatTrans, p: SetNatTrans, top: dict, bottom: dict) -> Transposed:
    """Square (i x^ j) -> p  <->  square i -> hom^(j, p), for the cartesian
    product of finite sets (tag 'tensor' on finite sets)."""
    if tag != "tensor" or not all(isinstance(m.source, FinSet) for m in (i, j, p)):
        raise DiagramError("transposition is only available for the closed product of finite sets")
    lr = leibniz("tensor", i, j)
    orig = SetSquare(lr.map, p, dict(top), dict(bottom))
    if not orig.commutes():
        raise DiagramError("square does not commute")
    A, A2, B, B2 = i.source, i.target, j.source, j.target
    Z, W = p.source, p.target
    pz = set_map_fn(p)
    jm = set_map_fn(j)
    ZB2, ZB, WB, WB2 = _fun_set(B2, Z), _fun_set(B, Z), _fun_set(B, W), _fun_set(B2, W)
    restrict_z = set_map(ZB2, ZB, {h: tuple(_apply(h, B2, jm[b]) for b in B.elements) for h in ZB2.elements})
    post_p = set_map(ZB, WB, {h: tuple(pz[z] for z in h) for h in ZB.elements})
    restrict_w = set_map(WB2, WB, {h: tuple(_apply(h, B2, jm[b]) for b in B.elements) for h in WB2.elements})
    post_p2 = set_map(ZB2, WB2, {h: tuple(pz[z] for z in h) for h in ZB2.elements})
    pb = pullback(post_p, restrict_w)
    hom_map = induced_to_pullback(pb, restrict_z, post_p2)
    cls = lr.corner.classes[FinSet.NODE]
    t_top = {a: tuple(top[cls[("inl", (a, b2))]] for b2 in B2.elements) for a in A.elements}
    t_bottom = {
        a2: (tuple(top[cls[("inr", (a2, b))]] for b in B.elements), tuple(bottom[(a2, b2)] for b2 in B2.elements))
        for a2 in A2.elements
    }
    trans = SetSquare(i, hom_map, t_top, t_bottom)
    if not trans.commutes():
        raise AssertionError("transposed square does not commute")
    return Transposed(orig, trans, lr, pb)


def lift_to_transpose(t: Transposed, lift: dict) -> dict:
    B2 = t.lr.g.target
    return {a2: tuple(lift[(a2, b2)] for b2 in B2.elements) for a2 in t.lr.f.target.elements}


def lift_from_transpose(t: Transposed, lift: dict) -> dict:
    B2 = t.lr.g.target
    return {(a2, b2): _apply(lift[a2], B2, b2) for a2 in t.lr.f.target.elements for b2 in B2.elements}
