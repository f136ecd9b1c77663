"""Finite Set-valued diagrams, maps between them, and (co)limit machinery.

Three kinds of diagram share one pointwise interface (``_Diagram``):

* ``SetValuedFunctor`` on a FinCategory, co- or contravariant;
* ``SetBifunctor`` contravariant in a first category and covariant in a
  second; its actions are stored per generator, i.e. ``("L", f, d)`` for
  f acting in the first slot at d and ``("R", c, g)`` for the second slot;
* ``FinSet``, a diagram on a single node with no arrows.

Every diagram exposes ``nodes()`` and ``arrows()`` (key, source node,
target node), so coproducts, pushouts, pullbacks and naturality checks
are written once.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Any, Callable, Iterable

from .fincat import OK, CategoryError, FinCategory, ValidationReport, opposite
from .finsets import UnionFind, ekey, emin, esorted, label

CO, CONTRA = "co", "contra"

# the element of a canonical one-point set (empty ends, terminal weights)
POINT = "*"


class DiagramError(ValueError):
    pass


class _Diagram:
    carrier: dict
    action: dict

    def nodes(self) -> tuple:
        raise NotImplementedError

    def arrows(self):
        """Yield (key, source node, target node) for every stored action."""
        raise NotImplementedError

    def like(self, carrier: dict, action: dict) -> "_Diagram":
        """A diagram of the same kind and shape with new data."""
        raise NotImplementedError

    def at(self, node) -> tuple:
        return self.carrier[node]

    def act(self, key, x):
        return self.action[key][x]

    def same_shape(self, other) -> bool:
        return type(self) is type(other) and self._shape() == other._shape()

    def _shape(self):
        raise NotImplementedError

    def size(self) -> int:
        return sum(len(v) for v in self.carrier.values())

    def is_empty(self) -> bool:
        return self.size() == 0

    def fingerprint(self):
        # diagrams are never mutated after construction, so cache
        fp = self.__dict__.get("_fp")
        if fp is None:
            fp = (
                tuple((n, frozenset(self.carrier[n])) for n in self.nodes()),
                tuple((k, frozenset(self.action[k].items())) for k, _, _ in self.arrows()),
            )
            self.__dict__["_fp"] = fp
        return fp

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, _Diagram):
            return NotImplemented
        return self.same_shape(other) and self.fingerprint() == other.fingerprint()

    def __hash__(self):
        return hash(self.fingerprint())

    def _check_actions(self) -> ValidationReport:
        for n in self.nodes():
            if len(set(self.carrier[n])) != len(self.carrier[n]):
                return ValidationReport(False, "carrier", {"node": label(n)}, "repeated element")
        for key, s, t in self.arrows():
            m = self.action.get(key)
            if m is None:
                return ValidationReport(False, "action-missing", {"arrow": label(key)}, "no action recorded")
            tgt = set(self.carrier[t])
            for x in self.carrier[s]:
                if x not in m or m[x] not in tgt:
                    return ValidationReport(False, "action-range", {"arrow": label(key), "element": label(x)}, "action not a function between carriers")
            if len(m) != len(self.carrier[s]):
                return ValidationReport(False, "action-range", {"arrow": label(key)}, "action defined off the carrier")
        return OK


class SetValuedFunctor(_Diagram):
    def __init__(self, base: FinCategory, variance: str, carrier: dict, action: dict):
        if variance not in (CO, CONTRA):
            raise DiagramError(f"variance must be 'co' or 'contra', got {variance!r}")
        self.base = base
        self.variance = variance
        self.carrier = {o: esorted(carrier.get(o, ())) for o in base.objects}
        self.action = {f: dict(action.get(f, {})) for f in base.morphisms}
        for o, i in base.identity.items():
            if i not in action:
                self.action[i] = {x: x for x in self.carrier[o]}

    def nodes(self):
        return self.base.objects

    def arrows(self):
        for f, (s, t) in self.base.morphisms.items():
            yield (f, s, t) if self.variance == CO else (f, t, s)

    def like(self, carrier, action):
        return SetValuedFunctor(self.base, self.variance, carrier, action)

    def _shape(self):
        return (self.base, self.variance)

    def validate(self) -> ValidationReport:
        rep = self._check_actions()
        if not rep:
            return rep
        c = self.base
        for o in c.objects:
            i = self.action[c.identity[o]]
            if any(i[x] != x for x in self.carrier[o]):
                return ValidationReport(False, "identity", {"object": o}, "identity acts non-trivially")
        co = self.variance == CO
        for (g, f), gf in c.compose_table.items():
            ag, af, agf = self.action[g], self.action[f], self.action[gf]
            dom = self.carrier[c.src(f)] if co else self.carrier[c.dst(g)]
            for x in dom:
                y = ag[af[x]] if co else af[ag[x]]
                if agf[x] != y:
                    return ValidationReport(False, "composition", {"pair": [g, f], "element": label(x)}, "action not functorial")
        return OK

    def __repr__(self):
        sizes = ",".join(f"{o}:{len(self.carrier[o])}" for o in self.base.objects)
        return f"<SetValuedFunctor {self.variance} [{sizes}]>"


class SetBifunctor(_Diagram):
    """H(c, d), contravariant in c (first base) and covariant in d (second)."""

    def __init__(self, left: FinCategory, right: FinCategory, carrier: dict, action: dict):
        self.left, self.right = left, right
        self._nodes = tuple((c, d) for c in left.objects for d in right.objects)
        self.carrier = {n: esorted(carrier.get(n, ())) for n in self._nodes}
        self.action = {}
        for key, s, t in self.arrows():
            self.action[key] = dict(action.get(key, {}))

    def nodes(self):
        return self._nodes

    def arrows(self):
        for f, (s, t) in self.left.morphisms.items():
            for d in self.right.objects:
                yield ("L", f, d), (t, d), (s, d)
        for c in self.left.objects:
            for g, (s, t) in self.right.morphisms.items():
                yield ("R", c, g), (c, s), (c, t)

    def like(self, carrier, action):
        return SetBifunctor(self.left, self.right, carrier, action)

    def _shape(self):
        return (self.left, self.right)

    def act_left(self, f, d, x):
        return self.action[("L", f, d)][x]

    def act_right(self, c, g, x):
        return self.action[("R", c, g)][x]

    def slice_right(self, d) -> SetValuedFunctor:
        """H(-, d) as a contravariant functor on the first base."""
        return SetValuedFunctor(
            self.left, CONTRA,
            {c: self.carrier[(c, d)] for c in self.left.objects},
            {f: self.action[("L", f, d)] for f in self.left.morphisms},
        )

    def slice_left(self, c) -> SetValuedFunctor:
        """H(c, -) as a covariant functor on the second base."""
        return SetValuedFunctor(
            self.right, CO,
            {d: self.carrier[(c, d)] for d in self.right.objects},
            {g: self.action[("R", c, g)] for g in self.right.morphisms},
        )

    def validate(self) -> ValidationReport:
        rep = self._check_actions()
        if not rep:
            return rep
        for d in self.right.objects:
            rep = self.slice_right(d).validate()
            if not rep:
                return ValidationReport(False, "left-" + rep.clause, dict(rep.witness, slot=d), rep.message)
        for c in self.left.objects:
            rep = self.slice_left(c).validate()
            if not rep:
                return ValidationReport(False, "right-" + rep.clause, dict(rep.witness, slot=c), rep.message)
        for f, (c0, c1) in self.left.morphisms.items():
            for g, (d0, d1) in self.right.morphisms.items():
                lf0, lf1 = self.action[("L", f, d0)], self.action[("L", f, d1)]
                rg0, rg1 = self.action[("R", c0, g)], self.action[("R", c1, g)]
                for x in self.carrier[(c1, d0)]:
                    if rg0[lf0[x]] != lf1[rg1[x]]:
                        return ValidationReport(False, "interchange", {"pair": [f, g], "element": label(x)}, "actions do not commute")
        return OK

    def __repr__(self):
        return f"<SetBifunctor {len(self._nodes)} nodes, {self.size()} elements>"


class FinSet(_Diagram):
    NODE = "*"

    def __init__(self, elements: Iterable = ()):
        self.carrier = {self.NODE: esorted(set(elements))}
        self.action = {}

    @property
    def elements(self) -> tuple:
        return self.carrier[self.NODE]

    def nodes(self):
        return (self.NODE,)

    def arrows(self):
        return iter(())

    def like(self, carrier, action):
        return FinSet(carrier[self.NODE])

    def _shape(self):
        return ()

    def validate(self):
        return self._check_actions()

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in set(self.elements)

    def __repr__(self):
        return f"FinSet({list(self.elements)!r})"


class SetNatTrans:
    def __init__(self, source: _Diagram, target: _Diagram, components: dict):
        if not source.same_shape(target):
            raise DiagramError("source and target have different shapes")
        self.source, self.target = source, target
        self.components = {n: dict(components.get(n, {})) for n in source.nodes()}

    def __call__(self, node, x):
        return self.components[node][x]

    def validate(self) -> ValidationReport:
        for n in self.source.nodes():
            comp = self.components[n]
            tgt = set(self.target.carrier[n])
            for x in self.source.carrier[n]:
                if x not in comp or comp[x] not in tgt:
                    return ValidationReport(False, "component", {"node": label(n), "element": label(x)}, "component not a function")
        for key, s, t in self.source.arrows():
            ca, cb = self.components[s], self.components[t]
            fa, fb = self.source.action[key], self.target.action[key]
            for x in self.source.carrier[s]:
                if fa.get(x) not in cb or ca[x] not in fb or cb[fa[x]] != fb[ca[x]]:
                    return ValidationReport(False, "naturality", {"arrow": label(key), "element": label(x)}, "square does not commute")
        return OK

    def fingerprint(self):
        return tuple(
            (n, frozenset((x, self.components[n][x]) for x in self.source.carrier[n])) for n in self.source.nodes()
        )

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SetNatTrans):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.fingerprint() == other.fingerprint()

    def __hash__(self):
        return hash(self.fingerprint())

    def __repr__(self):
        return f"<SetNatTrans {self.source!r} -> {self.target!r}>"


def set_map(source: FinSet, target: FinSet, mapping: dict) -> SetNatTrans:
    return SetNatTrans(source, target, {FinSet.NODE: dict(mapping)})


def set_map_fn(f: SetNatTrans) -> dict:
    return f.components[FinSet.NODE]


# generic pointwise operations


def identity(x: _Diagram) -> SetNatTrans:
    return SetNatTrans(x, x, {n: {e: e for e in x.carrier[n]} for n in x.nodes()})


def compose(g: SetNatTrans, f: SetNatTrans) -> SetNatTrans:
    """g after f."""
    if f.target != g.source:
        raise DiagramError("maps are not composable")
    return SetNatTrans(
        f.source, g.target,
        {n: {x: g.components[n][y] for x, y in f.components[n].items()} for n in f.source.nodes()},
    )


def empty_like(x: _Diagram) -> _Diagram:
    return x.like({n: () for n in x.nodes()}, {k: {} for k, _, _ in x.arrows()})


def from_empty(x: _Diagram) -> SetNatTrans:
    return SetNatTrans(empty_like(x), x, {})


def is_mono(f: SetNatTrans) -> bool:
    return all(len(set(c.values())) == len(c) for c in f.components.values())


def is_epi(f: SetNatTrans) -> bool:
    return all(set(f.components[n].values()) == set(f.target.carrier[n]) for n in f.source.nodes())


def is_iso(f: SetNatTrans) -> bool:
    return is_mono(f) and is_epi(f)


def inverse(f: SetNatTrans) -> SetNatTrans:
    if not is_iso(f):
        raise DiagramError("map is not invertible")
    return SetNatTrans(f.target, f.source, {n: {y: x for x, y in c.items()} for n, c in f.components.items()})


def first_non_injective(f: SetNatTrans):
    """(node, x1, x2) with f(x1) = f(x2), or None."""
    for n in f.source.nodes():
        seen = {}
        for x in f.source.carrier[n]:
            y = f.components[n][x]
            if y in seen:
                return n, seen[y], x
            seen[y] = x
    return None


def image(f: SetNatTrans) -> tuple[_Diagram, SetNatTrans, SetNatTrans]:
    """Epi-mono factorization through the pointwise image."""
    carrier = {n: set(f.components[n].values()) for n in f.source.nodes()}
    action = {k: {y: f.target.action[k][y] for y in carrier[s]} for k, s, _ in f.target.arrows()}
    im = f.target.like(carrier, action)
    e = SetNatTrans(f.source, im, f.components)
    m = SetNatTrans(im, f.target, {n: {y: y for y in im.carrier[n]} for n in im.nodes()})
    return im, e, m


def subdiagram(x: _Diagram, keep: dict) -> tuple[_Diagram, SetNatTrans]:
    """The subdiagram on the given per-node subsets (must be closed under the actions)."""
    carrier = {n: [e for e in x.carrier[n] if e in keep.get(n, ())] for n in x.nodes()}
    cs = {n: set(v) for n, v in carrier.items()}
    action = {}
    for k, s, t in x.arrows():
        action[k] = {e: x.action[k][e] for e in carrier[s]}
        if any(v not in cs[t] for v in action[k].values()):
            raise DiagramError(f"subsets not closed under {label(k)}")
    sub = x.like(carrier, action)
    return sub, SetNatTrans(sub, x, {n: {e: e for e in carrier[n]} for n in x.nodes()})


@dataclass
class Coproduct:
    obj: _Diagram
    inl: SetNatTrans
    inr: SetNatTrans


def coproduct(a: _Diagram, b: _Diagram) -> Coproduct:
    if not a.same_shape(b):
        raise DiagramError("shape mismatch")
    carrier = {n: [("inl", x) for x in a.carrier[n]] + [("inr", y) for y in b.carrier[n]] for n in a.nodes()}
    action = {}
    for k, s, _ in a.arrows():
        m = {("inl", x): ("inl", a.action[k][x]) for x in a.carrier[s]}
        m.update({("inr", y): ("inr", b.action[k][y]) for y in b.carrier[s]})
        action[k] = m
    obj = a.like(carrier, action)
    inl = SetNatTrans(a, obj, {n: {x: ("inl", x) for x in a.carrier[n]} for n in a.nodes()})
    inr = SetNatTrans(b, obj, {n: {y: ("inr", y) for y in b.carrier[n]} for n in a.nodes()})
    return Coproduct(obj, inl, inr)


def coproduct_many(parts: list[_Diagram], like: _Diagram | None = None) -> tuple[_Diagram, list[SetNatTrans]]:
    """Coproduct of a list; elements are (index, x)."""
    if not parts:
        if like is None:
            raise DiagramError("empty coproduct needs a shape")
        return empty_like(like), []
    a = parts[0]
    carrier = {n: [(i, x) for i, p in enumerate(parts) for x in p.carrier[n]] for n in a.nodes()}
    action = {k: {(i, x): (i, p.action[k][x]) for i, p in enumerate(parts) for x in p.carrier[s]} for k, s, _ in a.arrows()}
    obj = a.like(carrier, action)
    incs = [SetNatTrans(p, obj, {n: {x: (i, x) for x in p.carrier[n]} for n in a.nodes()}) for i, p in enumerate(parts)]
    return obj, incs


def copair(inj: Coproduct, f: SetNatTrans, g: SetNatTrans) -> SetNatTrans:
    comps = {}
    for n in inj.obj.nodes():
        m = {("inl", x): f.components[n][x] for x in inj.inl.source.carrier[n]}
        m.update({("inr", y): g.components[n][y] for y in inj.inr.source.carrier[n]})
        comps[n] = m
    return SetNatTrans(inj.obj, f.target, comps)


def coproduct_map(f: SetNatTrans, g: SetNatTrans) -> tuple[SetNatTrans, Coproduct, Coproduct]:
    s, t = coproduct(f.source, g.source), coproduct(f.target, g.target)
    comps = {}
    for n in s.obj.nodes():
        m = {("inl", x): ("inl", f.components[n][x]) for x in f.source.carrier[n]}
        m.update({("inr", y): ("inr", g.components[n][y]) for y in g.source.carrier[n]})
        comps[n] = m
    return SetNatTrans(s.obj, t.obj, comps), s, t


@dataclass
class Pushout:
    """Pushout of a span B <-f- A -g-> C; elements are tagged inl/inr and
    each class is named by its least member."""

    f: SetNatTrans
    g: SetNatTrans
    obj: _Diagram
    inl: SetNatTrans
    inr: SetNatTrans
    classes: dict  # node -> {tagged element: representative}


def pushout(f: SetNatTrans, g: SetNatTrans) -> Pushout:
    if f.source != g.source:
        raise DiagramError("pushout needs a span with a common source")
    b, c = f.target, g.target
    classes, carrier = {}, {}
    for n in b.nodes():
        uf = UnionFind([("inl", x) for x in b.carrier[n]] + [("inr", y) for y in c.carrier[n]])
        for a in f.source.carrier[n]:
            uf.union(("inl", f.components[n][a]), ("inr", g.components[n][a]))
        classes[n] = uf.classes()
        carrier[n] = set(classes[n].values())
    action = {}
    for k, s, t in b.arrows():
        m = {}
        for e in carrier[s]:
            tag, x = e
            src = b if tag == "inl" else c
            m[e] = classes[t][(tag, src.action[k][x])]
        action[k] = m
    obj = b.like(carrier, action)
    inl = SetNatTrans(b, obj, {n: {x: classes[n][("inl", x)] for x in b.carrier[n]} for n in b.nodes()})
    inr = SetNatTrans(c, obj, {n: {y: classes[n][("inr", y)] for y in c.carrier[n]} for n in b.nodes()})
    return Pushout(f, g, obj, inl, inr, classes)


def induced_from_pushout(po: Pushout, h: SetNatTrans, k: SetNatTrans) -> SetNatTrans:
    """The map out of the pushout restricting to h and k; raises if h f != k g."""
    if h.source != po.f.target or k.source != po.g.target or h.target != k.target:
        raise DiagramError("cocone legs have wrong endpoints")
    comps = {}
    for n in po.obj.nodes():
        m = {}
        for e, rep in po.classes[n].items():
            tag, x = e
            val = (h if tag == "inl" else k).components[n][x]
            if rep in m and m[rep] != val:
                raise DiagramError(f"cocone does not commute at {label(n)}")
            m[rep] = val
        comps[n] = m
    return SetNatTrans(po.obj, h.target, comps)


@dataclass
class Pullback:
    f: SetNatTrans
    g: SetNatTrans
    obj: _Diagram
    p1: SetNatTrans
    p2: SetNatTrans


def pullback(f: SetNatTrans, g: SetNatTrans) -> Pullback:
    if f.target != g.target:
        raise DiagramError("pullback needs a cospan with a common target")
    b, c = f.source, g.source
    carrier = {}
    for n in b.nodes():
        by_val: dict = {}
        for y in c.carrier[n]:
            by_val.setdefault(g.components[n][y], []).append(y)
        carrier[n] = [(x, y) for x in b.carrier[n] for y in by_val.get(f.components[n][x], ())]
    action = {k: {(x, y): (b.action[k][x], c.action[k][y]) for x, y in carrier[s]} for k, s, _ in b.arrows()}
    obj = b.like(carrier, action)
    p1 = SetNatTrans(obj, b, {n: {e: e[0] for e in carrier[n]} for n in b.nodes()})
    p2 = SetNatTrans(obj, c, {n: {e: e[1] for e in carrier[n]} for n in b.nodes()})
    return Pullback(f, g, obj, p1, p2)


def induced_to_pullback(pb: Pullback, h: SetNatTrans, k: SetNatTrans) -> SetNatTrans:
    comps = {}
    for n in pb.obj.nodes():
        m = {}
        for x in h.source.carrier[n]:
            e = (h.components[n][x], k.components[n][x])
            if pb.f.components[n][e[0]] != pb.g.components[n][e[1]]:
                raise DiagramError(f"cone does not commute at {label(n)}")
            m[x] = e
        comps[n] = m
    return SetNatTrans(h.source, pb.obj, comps)


# independent square checks: plain closure computations, no union-find


def _components_naive(elements: list, edges: list) -> dict:
    adj = {e: [] for e in elements}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    comp, idx = {}, 0
    for e in elements:
        if e in comp:
            continue
        stack = [e]
        comp[e] = idx
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in comp:
                    comp[w] = idx
                    stack.append(w)
        idx += 1
    return comp


def is_pushout_square(f: SetNatTrans, g: SetNatTrans, h: SetNatTrans, k: SetNatTrans) -> bool:
    """Is the commuting square (h f = k g) a pushout?  Checked pointwise by
    the set-level criterion: h, k jointly surjective and h(b) = k(c) exactly
    when b, c are related by the equivalence generated by f, g."""
    for n in f.source.nodes():
        bs, cs = list(f.target.carrier[n]), list(g.target.carrier[n])
        for a in f.source.carrier[n]:
            if h.components[n][f.components[n][a]] != k.components[n][g.components[n][a]]:
                return False
        elems = [("b", x) for x in bs] + [("c", y) for y in cs]
        edges = [(("b", f.components[n][a]), ("c", g.components[n][a])) for a in f.source.carrier[n]]
        comp = _components_naive(elems, edges)
        val = {("b", x): h.components[n][x] for x in bs}
        val.update({("c", y): k.components[n][y] for y in cs})
        if set(val.values()) != set(h.target.carrier[n]):
            return False
        seen = {}
        for e in elems:
            if comp[e] in seen and seen[comp[e]] != val[e]:
                return False
            seen[comp[e]] = val[e]
        if len(set(seen.values())) != len(seen):
            return False
    return True


def is_pullback_square(h: SetNatTrans, k: SetNatTrans, f: SetNatTrans, g: SetNatTrans) -> bool:
    """Square P -h-> B -f-> D, P -k-> C -g-> D: is P the pullback?"""
    for n in f.source.nodes():
        pairs = {}
        for p in h.source.carrier[n]:
            b, c = h.components[n][p], k.components[n][p]
            if f.components[n][b] != g.components[n][c]:
                return False
            if (b, c) in pairs:
                return False
            pairs[(b, c)] = p
        want = {(b, c) for b in f.source.carrier[n] for c in g.source.carrier[n]
                if f.components[n][b] == g.components[n][c]}
        if set(pairs) != want:
            return False
    return True


# tensors and cotensors with finite sets


def tensor(x: _Diagram, s: Iterable) -> _Diagram:
    """x * S: pointwise product with a set; elements (x, s)."""
    s = esorted(set(s))
    carrier = {n: [(e, t) for e in x.carrier[n] for t in s] for n in x.nodes()}
    action = {k: {(e, t): (x.action[k][e], t) for e in x.carrier[src] for t in s} for k, src, _ in x.arrows()}
    return x.like(carrier, action)


def tensor_map(f: SetNatTrans, g: SetNatTrans) -> SetNatTrans:
    """f * g for f a diagram map and g a map of finite sets."""
    gs = set_map_fn(g)
    src, tgt = tensor(f.source, g.source.elements), tensor(f.target, g.target.elements)
    comps = {n: {(e, t): (f.components[n][e], gs[t]) for e in f.source.carrier[n] for t in g.source.elements}
             for n in f.source.nodes()}
    return SetNatTrans(src, tgt, comps)


def cotensor(s: Iterable, x: _Diagram) -> _Diagram:
    """S pitchfork x: functions S -> x(n), as value tuples indexed by sorted S."""
    s = esorted(set(s))
    carrier = {n: list(iproduct(x.carrier[n], repeat=len(s))) for n in x.nodes()}
    action = {k: {v: tuple(x.action[k][e] for e in v) for v in carrier[src]} for k, src, _ in x.arrows()}
    return x.like(carrier, action)


def cartesian_product(a: FinSet, b: FinSet) -> FinSet:
    return FinSet(iproduct(a.elements, b.elements))


# constructors


def constant_functor(c: FinCategory, elements: Iterable, variance: str = CO) -> SetValuedFunctor:
    els = esorted(set(elements))
    return SetValuedFunctor(c, variance, {o: els for o in c.objects}, {f: {e: e for e in els} for f in c.morphisms})


def terminal_functor(c: FinCategory, variance: str = CO) -> SetValuedFunctor:
    return constant_functor(c, [POINT], variance)


def empty_functor(c: FinCategory, variance: str = CO) -> SetValuedFunctor:
    return SetValuedFunctor(c, variance, {}, {})


def representable(c: FinCategory, obj: str, variance: str) -> SetValuedFunctor:
    """``contra``: C(-, obj), acting by precomposition; ``co``: C(obj, -), by postcomposition."""
    if obj not in c.objects:
        raise CategoryError(f"unknown object {obj!r}")
    if variance == CONTRA:
        carrier = {d: c.hom(d, obj) for d in c.objects}
        action = {f: {u: c.comp(u, f) for u in carrier[c.dst(f)]} for f in c.morphisms}
    elif variance == CO:
        carrier = {d: c.hom(obj, d) for d in c.objects}
        action = {f: {u: c.comp(f, u) for u in carrier[c.src(f)]} for f in c.morphisms}
    else:
        raise DiagramError(f"bad variance {variance!r}")
    return SetValuedFunctor(c, variance, carrier, action)


def hom_bifunctor(c: FinCategory) -> SetBifunctor:
    carrier = {(x, y): c.hom(x, y) for x in c.objects for y in c.objects}
    action = {}
    for f, (s, t) in c.morphisms.items():
        for d in c.objects:
            action[("L", f, d)] = {u: c.comp(u, f) for u in c.hom(t, d)}
            action[("R", d, f)] = {u: c.comp(f, u) for u in c.hom(d, s)}
    return SetBifunctor(c, c, carrier, action)


def sub_bifunctor(h: SetBifunctor, keep: Callable[[Any, Any], bool]) -> tuple[SetBifunctor, SetNatTrans]:
    sub, inc = subdiagram(h, {n: [e for e in h.carrier[n] if keep(n, e)] for n in h.nodes()})
    return sub, inc


def to_opposite(x: SetValuedFunctor) -> SetValuedFunctor:
    """The same data read on the opposite category with the other variance."""
    return SetValuedFunctor(opposite(x.base), CO if x.variance == CONTRA else CONTRA, x.carrier, x.action)


def map_to_opposite(f: SetNatTrans) -> SetNatTrans:
    return SetNatTrans(to_opposite(f.source), to_opposite(f.target), f.components)


def restrict(x: SetValuedFunctor, sub: FinCategory) -> SetValuedFunctor:
    """Restriction along a full-subcategory inclusion (ids shared)."""
    return SetValuedFunctor(sub, x.variance, {o: x.carrier[o] for o in sub.objects}, {f: x.action[f] for f in sub.morphisms})


def restrict_map(f: SetNatTrans, sub: FinCategory) -> SetNatTrans:
    return SetNatTrans(restrict(f.source, sub), restrict(f.target, sub), {o: f.components[o] for o in sub.objects})


def restrict_bifunctor(h: SetBifunctor, left: FinCategory) -> SetBifunctor:
    """Restrict the contravariant slot to a full subcategory."""
    carrier = {(c, d): h.carrier[(c, d)] for c in left.objects for d in h.right.objects}
    action = {}
    for f in left.morphisms:
        for d in h.right.objects:
            action[("L", f, d)] = h.action[("L", f, d)]
    for c in left.objects:
        for g in h.right.morphisms:
            action[("R", c, g)] = h.action[("R", c, g)]
    return SetBifunctor(left, h.right, carrier, action)


# categories of elements


@dataclass
class ElementsCategory:
    category: FinCategory
    points: dict  # object id -> (base object, element) or (c, w, x)
    projection: dict  # morphism id -> base morphism

    def components(self) -> list[list[str]]:
        c = self.category
        comp = _components_naive(list(c.objects), [c.morphisms[m] for m in c.morphisms])
        groups: dict[int, list] = {}
        for o in c.objects:
            groups.setdefault(comp[o], []).append(o)
        return sorted(groups.values())

    def is_connected(self) -> bool:
        return len(self.components()) <= 1


def _build_elements(points: dict, arrows: dict, base: FinCategory, comp_rule) -> ElementsCategory:
    """points: oid -> data; arrows: mid -> (src oid, dst oid, base morphism)."""
    morphisms = {m: (s, t) for m, (s, t, _) in arrows.items()}
    identity = {}
    by_src: dict[str, list] = {}
    for m, (s, t, f) in arrows.items():
        by_src.setdefault(s, []).append(m)
        if s == t and base.is_identity(f):
            identity[s] = m
    lookup = {(s, t, f): m for m, (s, t, f) in arrows.items()}
    compose = {}
    for m1, (s, t, f) in arrows.items():
        for m2 in by_src.get(t, ()):
            _, u, g = arrows[m2]
            compose[(m2, m1)] = lookup[(s, u, base.comp(g, f))]
    cat = FinCategory(points.keys(), morphisms, identity, compose, name="el")
    return ElementsCategory(cat, points, {m: f for m, (_, _, f) in arrows.items()})


def category_of_elements(w: _Diagram, mode: str = "plain", other: SetValuedFunctor | None = None) -> ElementsCategory:
    """``plain`` el W; ``diagonal`` for a bifunctor on (C, C); ``pullback``
    el W x_C el D for contravariant W and covariant D = ``other``."""
    if mode == "plain":
        if not isinstance(w, SetValuedFunctor):
            raise DiagramError("plain mode needs a SetValuedFunctor")
        c = w.base
        points = {label((o, x)): (o, x) for o in c.objects for x in w.carrier[o]}
        arrows = {}
        for f, (s, t) in c.morphisms.items():
            if w.variance == CO:
                for x in w.carrier[s]:
                    arrows[label((f, x))] = (label((s, x)), label((t, w.action[f][x])), f)
            else:
                for y in w.carrier[t]:
                    arrows[label((f, y))] = (label((s, w.action[f][y])), label((t, y)), f)
        return _build_elements(points, arrows, c, None)
    if mode == "diagonal":
        if not isinstance(w, SetBifunctor) or w.left != w.right:
            raise DiagramError("diagonal mode needs a bifunctor on (C, C)")
        c = w.left
        points = {label((o, x)): (o, x) for o in c.objects for x in w.carrier[(o, o)]}
        arrows = {}
        for f, (s, t) in c.morphisms.items():
            for x in w.carrier[(s, s)]:
                lhs = w.action[("R", s, f)][x]
                for y in w.carrier[(t, t)]:
                    if w.action[("L", f, t)][y] == lhs:
                        arrows[label((f, x, y))] = (label((s, x)), label((t, y)), f)
        return _build_elements(points, arrows, c, None)
    if mode == "pullback":
        if other is None or not isinstance(w, SetValuedFunctor) or w.base != other.base:
            raise DiagramError("base mismatch")
        if w.variance != CONTRA or other.variance != CO:
            raise DiagramError("pullback mode needs a contravariant weight and covariant diagram")
        c = w.base
        points = {label((o, v, x)): (o, v, x) for o in c.objects for v in w.carrier[o] for x in other.carrier[o]}
        arrows = {}
        for f, (s, t) in c.morphisms.items():
            for v in w.carrier[t]:
                for x in other.carrier[s]:
                    arrows[label((f, v, x))] = (
                        label((s, w.action[f][v], x)),
                        label((t, v, other.action[f][x])),
                        f,
                    )
        return _build_elements(points, arrows, c, None)
    raise DiagramError(f"unknown mode {mode!r}")


def is_connected_weight(w: SetValuedFunctor) -> bool:
    """Empty, or el(w) connected.  Cross-checked against the coproduct
    criterion: the component split of el(w) gives a decomposition of w into
    non-empty subfunctors."""
    if w.is_empty():
        return True
    el = category_of_elements(w)
    comps = el.components()
    split = coproduct_split(w)
    assert len(split) == len(comps)
    return len(comps) == 1


def coproduct_split(w: SetValuedFunctor) -> list[SetValuedFunctor]:
    """Decompose w as a coproduct of connected subfunctors, one per component of el(w)."""
    el = category_of_elements(w)
    parts = []
    for comp in el.components():
        keep: dict = {}
        for oid in comp:
            o, x = el.points[oid]
            keep.setdefault(o, set()).add(x)
        parts.append(subdiagram(w, keep)[0])
    total = sum(p.size() for p in parts)
    assert total == w.size()
    return parts


# coends and ends


@dataclass
class Quotient:
    value: FinSet
    classes: dict  # element -> representative

    def __len__(self):
        return len(self.value)


def coend(h: SetBifunctor) -> Quotient:
    """The defining coequaliser: elements (c, x) for x in H(c, c), with
    (c, H(f, c) z) ~ (d, H(d, f) z) for f: c -> d and z in H(d, c)."""
    if h.left != h.right:
        raise DiagramError("coend needs a bifunctor on (C, C)")
    c = h.left
    uf = UnionFind((o, x) for o in c.objects for x in h.carrier[(o, o)])
    for f, (s, t) in c.morphisms.items():
        for z in h.carrier[(t, s)]:
            uf.union((s, h.action[("L", f, s)][z]), (t, h.action[("R", t, f)][z]))
    classes = uf.classes()
    return Quotient(FinSet(classes.values()), classes)


def coend_by_coequalizer(h: SetBifunctor) -> Quotient:
    """Same quotient, computed as the coequaliser of the two maps out of
    the coproduct over arrows, by naive component search."""
    c = h.left
    elems = [(o, x) for o in c.objects for x in h.carrier[(o, o)]]
    edges = []
    for f, (s, t) in c.morphisms.items():
        for z in h.carrier[(t, s)]:
            edges.append(((s, h.action[("L", f, s)][z]), (t, h.action[("R", t, f)][z])))
    comp = _components_naive(elems, edges)
    groups: dict[int, list] = {}
    for e in elems:
        groups.setdefault(comp[e], []).append(e)
    classes = {e: emin(groups[comp[e]]) for e in elems}
    return Quotient(FinSet(classes.values()), classes)


def diagonal_components(h: SetBifunctor) -> Quotient:
    """pi_0 of the diagonal elements category (arrows f with H(c, f) x = H(f, d) y)."""
    c = h.left
    uf = UnionFind((o, x) for o in c.objects for x in h.carrier[(o, o)])
    for f, (s, t) in c.morphisms.items():
        for x in h.carrier[(s, s)]:
            lhs = h.action[("R", s, f)][x]
            for y in h.carrier[(t, t)]:
                if h.action[("L", f, t)][y] == lhs:
                    uf.union((s, x), (t, y))
    classes = uf.classes()
    return Quotient(FinSet(classes.values()), classes)


def _search_families(order: list, domain: dict, edges: dict, fixed: dict | None = None, limit: int | None = None):
    """Backtracking over assignments key -> value in domain[key] subject to
    forced propagation: edges[key] = [(key2, fn)] requires val[key2] = fn(val[key]).
    Yields complete assignments as dicts."""
    val: dict = dict(fixed or {})
    count = 0

    def propagate(start, trail):
        stack = [start]
        while stack:
            k = stack.pop()
            v = val[k]
            for k2, fn in edges.get(k, ()):
                w = fn(v)
                if k2 in val:
                    if val[k2] != w:
                        return False
                else:
                    if w not in domain[k2]:
                        return False
                    val[k2] = w
                    trail.append(k2)
                    stack.append(k2)
        return True

    for k in list(val):
        if not propagate(k, []):
            return

    def rec(i):
        nonlocal count
        while i < len(order) and order[i] in val:
            i += 1
        if i == len(order):
            count += 1
            yield dict(val)
            return
        k = order[i]
        for v in domain[k]:
            trail = [k]
            val[k] = v
            if propagate(k, trail):
                yield from rec(i + 1)
                if limit is not None and count >= limit:
                    for t in trail:
                        del val[t]
                    return
            for t in trail:
                del val[t]

    yield from rec(0)


def end(h: SetBifunctor) -> FinSet:
    """Families (x_c) with H(c, f) x_c = H(f, d) x_d for every f: c -> d.
    Elements are tuples ((c, x_c), ...) in object order."""
    c = h.left
    families = []
    objs = list(c.objects)

    def rec(i, chosen):
        if i == len(objs):
            families.append(tuple(chosen.items()))
            return
        o = objs[i]
        for x in h.carrier[(o, o)]:
            chosen[o] = x
            ok = True
            for f in c.morphisms:
                s, t = c.morphisms[f]
                if s in chosen and t in chosen and (s == o or t == o):
                    if h.action[("R", s, f)][chosen[s]] != h.action[("L", f, t)][chosen[t]]:
                        ok = False
                        break
            if ok:
                rec(i + 1, chosen)
            del chosen[o]

    rec(0, {})
    return FinSet(families)


# weighted colimits


@dataclass
class WColim:
    """W (*) X.  ``value`` is a FinSet (functor weight) or a covariant
    functor on the weight's second base (bifunctor weight).  ``classes``
    maps each triple (c, w, x) to its representative, per output node."""

    weight: _Diagram
    diagram: SetValuedFunctor
    value: _Diagram
    classes: dict

    def cls(self, triple, node=FinSet.NODE):
        return self.classes[node][triple]


def _wcolim_classes(w: SetValuedFunctor, x: SetValuedFunctor) -> dict:
    c = w.base
    uf = UnionFind((o, v, e) for o in c.objects for v in w.carrier[o] for e in x.carrier[o])
    for f, (s, t) in c.morphisms.items():
        wf, xf = w.action[f], x.action[f]
        for v in w.carrier[t]:
            wv = wf[v]
            for e in x.carrier[s]:
                uf.union((s, wv, e), (t, v, xf[e]))
    return uf.classes()


def _check_pair(w: _Diagram, x: SetValuedFunctor):
    base = w.left if isinstance(w, SetBifunctor) else getattr(w, "base", None)
    if base is None or base != x.base:
        raise DiagramError("weight and diagram live on different categories")
    if x.variance != CO:
        raise DiagramError("diagram must be covariant")
    if isinstance(w, SetValuedFunctor) and w.variance != CONTRA:
        raise DiagramError("weight for a colimit must be contravariant")


def weighted_colimit(w: _Diagram, x: SetValuedFunctor) -> WColim:
    _check_pair(w, x)
    if isinstance(w, SetValuedFunctor):
        classes = _wcolim_classes(w, x)
        return WColim(w, x, FinSet(classes.values()), {FinSet.NODE: classes})
    d = w.right
    classes, carrier = {}, {}
    for o in d.objects:
        classes[o] = _wcolim_classes(w.slice_right(o), x)
        carrier[o] = set(classes[o].values())
    action = {}
    for g, (s, t) in d.morphisms.items():
        m = {}
        for (c0, v, e) in carrier[s]:
            m[(c0, v, e)] = classes[t][(c0, w.action[("R", c0, g)][v], e)]
        action[g] = m
    return WColim(w, x, SetValuedFunctor(d, CO, carrier, action), classes)


def wcolim_map(alpha: SetNatTrans | None, beta: SetNatTrans | None, src: WColim, tgt: WColim) -> SetNatTrans:
    """The induced map src -> tgt from a weight map alpha: W -> W' and a
    diagram map beta: X -> X' (None = identity)."""
    comps = {}
    bifun = isinstance(src.weight, SetBifunctor)
    for node in src.value.nodes():
        m = {}
        for (c0, v, e) in src.value.carrier[node]:
            if alpha is None:
                v2 = v
            elif bifun:
                v2 = alpha.components[(c0, node)][v]
            else:
                v2 = alpha.components[c0][v]
            e2 = e if beta is None else beta.components[c0][e]
            m[(c0, v, e)] = tgt.classes[node][(c0, v2, e2)]
        comps[node] = m
    return SetNatTrans(src.value, tgt.value, comps)


def colimit(x: SetValuedFunctor) -> WColim:
    return weighted_colimit(terminal_functor(x.base, CONTRA), x)


def wcolim_via_coend(w: SetValuedFunctor, x: SetValuedFunctor) -> Quotient:
    """W (*) X as the coend of (c, c') -> W(c) x X(c')."""
    c = w.base
    carrier, action = {}, {}
    for a in c.objects:
        for b in c.objects:
            carrier[(a, b)] = list(iproduct(w.carrier[a], x.carrier[b]))
    for f, (s, t) in c.morphisms.items():
        for b in c.objects:
            action[("L", f, b)] = {(v, e): (w.action[f][v], e) for v, e in carrier[(t, b)]}
        for a in c.objects:
            action[("R", a, f)] = {(v, e): (v, x.action[f][e]) for v, e in carrier[(a, s)]}
    return coend(SetBifunctor(c, c, carrier, action))


# weighted limits


@dataclass
class WLim:
    weight: _Diagram
    diagram: SetValuedFunctor
    value: _Diagram


def _nat_trans_families(w: SetValuedFunctor, x: SetValuedFunctor, limit: int | None = None) -> list:
    """All natural transformations w => x, as sorted tuples of ((c, v), x(c, v))."""
    c = w.base
    order = [(o, v) for o in c.objects for v in w.carrier[o]]
    domain = {(o, v): x.carrier[o] for o, v in order}
    edges: dict = {}
    for f, (s, t) in c.morphisms.items():
        wf, xf = w.action[f], x.action[f]
        for v in w.carrier[s]:
            edges.setdefault((s, v), []).append(((t, wf[v]), xf.__getitem__))
    out = []
    for sol in _search_families(order, domain, edges, limit=limit):
        out.append(tuple((k, sol[k]) for k in order))
    return out


def nat_trans_count(w: SetValuedFunctor, x: SetValuedFunctor) -> int:
    return len(_nat_trans_families(w, x))


def weighted_limit(w: _Diagram, x: SetValuedFunctor) -> WLim:
    """{W, X}: natural transformations W => X.  For a bifunctor weight on
    (D, C) the result is a covariant functor on D."""
    if isinstance(w, SetValuedFunctor):
        if w.base != x.base or w.variance != CO or x.variance != CO:
            raise DiagramError("weighted limit needs covariant weight and diagram on one base")
        return WLim(w, x, FinSet(_nat_trans_families(w, x)))
    if w.right != x.base:
        raise DiagramError("weight and diagram live on different categories")
    d = w.left
    carrier = {o: _nat_trans_families(w.slice_left(o), x) for o in d.objects}
    action = {}
    for g, (s, t) in d.morphisms.items():
        m = {}
        for fam in carrier[s]:
            val = dict(fam)
            new = tuple(((o, v), val[(o, w.action[("L", g, o)][v])]) for o in x.base.objects for v in w.carrier[(t, o)])
            m[fam] = new
        action[g] = m
    return WLim(w, x, SetValuedFunctor(d, CO, carrier, action))


def wlim_map(alpha: SetNatTrans | None, beta: SetNatTrans | None, src: WLim, tgt: WLim) -> SetNatTrans:
    """Induced {W, X} -> {W', X'} from alpha: W' -> W and beta: X -> X'."""
    comps = {}
    bifun = isinstance(src.weight, SetBifunctor)
    tw = tgt.weight
    for node in src.value.nodes():
        m = {}
        for fam in src.value.carrier[node]:
            val = dict(fam)
            new = []
            cs = tgt.diagram.base.objects
            for o in cs:
                for v in (tw.carrier[(node, o)] if bifun else tw.carrier[o]):
                    if alpha is None:
                        v0 = v
                    else:
                        v0 = alpha.components[(node, o) if bifun else o][v]
                    e = val[(o, v0)]
                    new.append(((o, v), e if beta is None else beta.components[o][e]))
            m[fam] = tuple(new)
        comps[node] = m
    return SetNatTrans(src.value, tgt.value, comps)


def limit(x: SetValuedFunctor) -> WLim:
    return weighted_limit(terminal_functor(x.base, CO), x)


def evaluation_family(w: SetValuedFunctor, x: SetValuedFunctor, fam) -> dict:
    return dict(fam)


# JSON


def functor_to_json(x: SetValuedFunctor) -> dict:
    return {
        "schema": 1,
        "variance": x.variance,
        "carrier": {o: [label(e) for e in x.carrier[o]] for o in x.base.objects},
        "action": {f: {label(e): label(v) for e, v in sorted(x.action[f].items(), key=lambda kv: ekey(kv[0]))}
                   for f in x.base.morphisms},
    }


def functor_from_json(base: FinCategory, data: dict) -> SetValuedFunctor:
    try:
        variance = data["variance"]
        carrier = {o: list(v) for o, v in data["carrier"].items()}
        action = {f: dict(m) for f, m in data.get("action", {}).items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise DiagramError(f"malformed functor document: {exc}") from None
    unknown = set(carrier) - set(base.objects)
    if unknown:
        raise DiagramError(f"unknown object {sorted(unknown)[0]!r}")
    for f in base.morphisms:
        if f not in action and base.is_identity(f):
            o = base.src(f)
            action[f] = {e: e for e in carrier.get(o, ())}
    return SetValuedFunctor(base, variance, carrier, action)


def nat_trans_to_json(f: SetNatTrans) -> dict:
    return {
        "schema": 1,
        "components": {label(n): {label(x): label(y) for x, y in sorted(f.components[n].items(), key=lambda kv: ekey(kv[0]))}
                       for n in f.source.nodes()},
    }


def nat_trans_from_json(source: _Diagram, target: _Diagram, data: dict) -> SetNatTrans:
    try:
        comps = {n: dict(m) for n, m in data["components"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise DiagramError(f"malformed transformation document: {exc}") from None
    return SetNatTrans(source, target, comps)
