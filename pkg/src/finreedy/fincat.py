"""Finite categories given by explicit composition tables.

Identifiers are strings and every enumeration runs in sorted id order, so
all derived data is deterministic.
"""

from __future__ import annotations

import re

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable, Iterable, Mapping


class CategoryError(ValueError):
    pass


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a validator.  Violations are data: ``clause`` names the
    failed axiom and ``witness`` carries the objects/morphisms involved."""

    ok: bool
    clause: str = ""
    witness: dict = field(default_factory=dict)
    message: str = ""

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        out = {"ok": self.ok}
        if not self.ok:
            out.update(clause=self.clause, witness=self.witness, message=self.message)
        return out


OK = ValidationReport(True)


class FinCategory:
    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Mapping[str, tuple[str, str]],
        identity: Mapping[str, str],
        compose: Mapping[tuple[str, str], str],
        name: str = "",
    ):
        self.objects: tuple[str, ...] = tuple(sorted(objects))
        self.morphisms: dict[str, tuple[str, str]] = {m: tuple(morphisms[m]) for m in sorted(morphisms)}
        self.identity: dict[str, str] = dict(identity)
        self.compose_table: dict[tuple[str, str], str] = dict(compose)
        self.name = name
        homs: dict[tuple[str, str], list[str]] = {}
        out: dict[str, list[str]] = {o: [] for o in self.objects}
        inc: dict[str, list[str]] = {o: [] for o in self.objects}
        for m, (s, t) in self.morphisms.items():
            homs.setdefault((s, t), []).append(m)
            if s in out:
                out[s].append(m)
            if t in inc:
                inc[t].append(m)
        self._hom = {k: tuple(v) for k, v in homs.items()}
        self._out = {k: tuple(v) for k, v in out.items()}
        self._in = {k: tuple(v) for k, v in inc.items()}
        self._cache: dict = {}

    # basic accessors
    def src(self, f: str) -> str:
        return self.morphisms[f][0]

    def dst(self, f: str) -> str:
        return self.morphisms[f][1]

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self._hom.get((a, b), ())

    def out_of(self, a: str) -> tuple[str, ...]:
        return self._out[a]

    def into(self, b: str) -> tuple[str, ...]:
        return self._in[b]

    def comp(self, g: str, f: str) -> str:
        """The composite g after f."""
        try:
            return self.compose_table[(g, f)]
        except KeyError:
            raise CategoryError(f"{g} and {f} are not composable") from None

    def comp_path(self, *fs: str) -> str:
        """comp_path(h, g, f) = h after g after f."""
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.comp(g, out)
        return out

    def is_identity(self, f: str) -> bool:
        return self.identity.get(self.src(f)) == f

    def _key(self):
        if "key" not in self._cache:
            self._cache["key"] = (
                self.objects,
                tuple(self.morphisms.items()),
                tuple(sorted(self.identity.items())),
                tuple(sorted(self.compose_table.items())),
            )
        return self._cache["key"]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCategory):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<FinCategory{tag}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"

    def composable_pairs(self):
        for f in self.morphisms:
            for g in self._out[self.dst(f)]:
                yield g, f


class ProductCategory(FinCategory):
    """c x d with ids ``(x,y)``; keeps the component ids for each pair."""

    def __init__(self, left: FinCategory, right: FinCategory, name: str = ""):
        self.left, self.right = left, right
        self.obj_pairs: dict[str, tuple[str, str]] = {}
        self.mor_pairs: dict[str, tuple[str, str]] = {}
        self._obj_id: dict[tuple[str, str], str] = {}
        self._mor_id: dict[tuple[str, str], str] = {}
        for x, y in iproduct(left.objects, right.objects):
            oid = f"({x},{y})"
            self.obj_pairs[oid] = (x, y)
            self._obj_id[(x, y)] = oid
        morphisms = {}
        for f, g in iproduct(left.morphisms, right.morphisms):
            mid = f"({f},{g})"
            self.mor_pairs[mid] = (f, g)
            self._mor_id[(f, g)] = mid
            morphisms[mid] = (
                self._obj_id[(left.src(f), right.src(g))],
                self._obj_id[(left.dst(f), right.dst(g))],
            )
        identity = {o: self._mor_id[(left.identity[x], right.identity[y])] for o, (x, y) in self.obj_pairs.items()}
        compose = {}
        for (g1, f1), gf1 in left.compose_table.items():
            for (g2, f2), gf2 in right.compose_table.items():
                compose[(self._mor_id[(g1, g2)], self._mor_id[(f1, f2)])] = self._mor_id[(gf1, gf2)]
        super().__init__(self.obj_pairs.keys(), morphisms, identity, compose, name=name)

    def obj(self, x: str, y: str) -> str:
        return self._obj_id[(x, y)]

    def mor(self, f: str, g: str) -> str:
        return self._mor_id[(f, g)]


@dataclass(frozen=True, eq=False)
class FinFunctor:
    source: FinCategory
    target: FinCategory
    obj_map: dict
    mor_map: dict

    def __call__(self, x: str) -> str:
        if x in self.mor_map:
            return self.mor_map[x]
        return self.obj_map[x]


def validate_functor(F: FinFunctor) -> ValidationReport:
    c, d = F.source, F.target
    for f, (s, t) in c.morphisms.items():
        if f not in F.mor_map or F.mor_map[f] not in d.morphisms:
            return ValidationReport(False, "total", {"morphism": f}, "morphism map undefined")
        if d.morphisms[F.mor_map[f]] != (F.obj_map[s], F.obj_map[t]):
            return ValidationReport(False, "endpoints", {"morphism": f}, "endpoints not preserved")
    for o in c.objects:
        if F.mor_map[c.identity[o]] != d.identity[F.obj_map[o]]:
            return ValidationReport(False, "identity", {"object": o}, "identity not preserved")
    for (g, f), gf in c.compose_table.items():
        if d.comp(F.mor_map[g], F.mor_map[f]) != F.mor_map[gf]:
            return ValidationReport(False, "composition", {"pair": [g, f]}, "composition not preserved")
    return OK


def validate_category(c: FinCategory) -> ValidationReport:
    """Check the category axioms exhaustively; report the first violation."""
    objs = set(c.objects)
    if len(objs) != len(c.objects):
        return ValidationReport(False, "unique-ids", {}, "duplicate object id")
    overlap = objs & set(c.morphisms)
    if overlap:
        return ValidationReport(False, "unique-ids", {"id": sorted(overlap)[0]}, "id used for an object and a morphism")
    for f, (s, t) in c.morphisms.items():
        if s not in objs or t not in objs:
            return ValidationReport(False, "dangling-endpoint", {"morphism": f}, f"{f} has an unlisted endpoint")
    for o in c.objects:
        i = c.identity.get(o)
        if i is None or c.morphisms.get(i) != (o, o):
            return ValidationReport(False, "identity", {"object": o}, f"no identity at {o}")
    for (g, f), gf in c.compose_table.items():
        if g not in c.morphisms or f not in c.morphisms or c.src(g) != c.dst(f):
            return ValidationReport(False, "compose-domain", {"pair": [g, f]}, "entry for a non-composable pair")
        if gf not in c.morphisms or c.morphisms[gf] != (c.src(f), c.dst(g)):
            return ValidationReport(False, "compose-hom", {"pair": [g, f], "result": gf}, "composite in the wrong hom-set")
    for g, f in c.composable_pairs():
        if (g, f) not in c.compose_table:
            return ValidationReport(False, "compose-domain", {"pair": [g, f]}, "missing composite")
    for f, (s, t) in c.morphisms.items():
        if c.comp(c.identity[t], f) != f or c.comp(f, c.identity[s]) != f:
            return ValidationReport(False, "unit", {"morphism": f}, f"identities are not neutral for {f}")
    table = c.compose_table
    for f in c.morphisms:
        for g in c.out_of(c.dst(f)):
            gf = table[(g, f)]
            for h in c.out_of(c.dst(g)):
                if table[(h, gf)] != table[(table[(h, g)], f)]:
                    return ValidationReport(
                        False, "associativity", {"triple": [h, g, f]}, f"({h}{g}){f} != {h}({g}{f})"
                    )
    return OK


# constructions


def opposite(c: FinCategory) -> FinCategory:
    morphisms = {m: (t, s) for m, (s, t) in c.morphisms.items()}
    compose = {(f, g): gf for (g, f), gf in c.compose_table.items()}
    name = c.name[:-3] if c.name.endswith("^op") else (c.name + "^op" if c.name else "")
    return FinCategory(c.objects, morphisms, c.identity, compose, name=name)


def product(c: FinCategory, d: FinCategory) -> ProductCategory:
    name = f"{c.name}x{d.name}" if c.name and d.name else ""
    return ProductCategory(c, d, name=name)


def full_subcategory(c: FinCategory, objs: Iterable[str]) -> tuple[FinCategory, FinFunctor]:
    keep = set(objs)
    unknown = keep - set(c.objects)
    if unknown:
        raise CategoryError(f"unknown object id {sorted(unknown)[0]!r}")
    morphisms = {m: st for m, st in c.morphisms.items() if st[0] in keep and st[1] in keep}
    identity = {o: c.identity[o] for o in keep}
    compose = {k: v for k, v in c.compose_table.items() if k[1] in morphisms and k[0] in morphisms}
    sub = FinCategory(keep, morphisms, identity, compose)
    incl = FinFunctor(sub, c, {o: o for o in keep}, {m: m for m in morphisms})
    return sub, incl


def from_concrete(
    objects: Iterable[str],
    data: Mapping[str, tuple[str, str, object]],
    compose_data: Callable[[object, object], object],
    name: str = "",
) -> FinCategory:
    """Build a category whose morphisms carry concrete data (e.g. maps of
    ordinals); composites are found by composing the data.  Each morphism
    is ``id -> (src, dst, datum)``; identities are recognised as the unique
    endomorphism whose datum is neutral."""
    lookup = {(s, t, d): m for m, (s, t, d) in data.items()}
    morphisms = {m: (s, t) for m, (s, t, _) in data.items()}
    by_src: dict[str, list[str]] = {}
    for m, (s, _, _) in data.items():
        by_src.setdefault(s, []).append(m)
    compose = {}
    for f, (s, t, df) in data.items():
        for g in by_src.get(t, ()):
            _, u, dg = data[g]
            compose[(g, f)] = lookup[(s, u, compose_data(dg, df))]
    identity = {}
    for o in objects:
        for m in by_src.get(o, ()):
            s, t, d = data[m]
            if t == o and all(compose[(m, f)] == f for f in morphisms if morphisms[f][1] == o):
                identity[o] = m
                break
    return FinCategory(objects, morphisms, identity, compose, name=name)


# builtin shapes


def discrete(n: int) -> FinCategory:
    objs = [str(i) for i in range(n)]
    return FinCategory(
        objs,
        {f"id_{o}": (o, o) for o in objs},
        {o: f"id_{o}" for o in objs},
        {(f"id_{o}", f"id_{o}"): f"id_{o}" for o in objs},
        name=f"discrete:{n}",
    )


def terminal() -> FinCategory:
    return FinCategory(["*"], {"id_*": ("*", "*")}, {"*": "id_*"}, {("id_*", "id_*"): "id_*"}, name="terminal")


def empty_category() -> FinCategory:
    return FinCategory([], {}, {}, {}, name="empty")


def parallel_pair() -> FinCategory:
    morphisms = {"id_a": ("a", "a"), "id_b": ("b", "b"), "f": ("a", "b"), "g": ("a", "b")}
    compose = {("id_a", "id_a"): "id_a", ("id_b", "id_b"): "id_b"}
    for m in ("f", "g"):
        compose[(m, "id_a")] = m
        compose[("id_b", m)] = m
    return FinCategory(["a", "b"], morphisms, {"a": "id_a", "b": "id_b"}, compose, name="parpair")


def span() -> FinCategory:
    """The pushout shape b <- a -> c."""
    morphisms = {"id_a": ("a", "a"), "id_b": ("b", "b"), "id_c": ("c", "c"), "a->b": ("a", "b"), "a->c": ("a", "c")}
    compose = {(f"id_{o}", f"id_{o}"): f"id_{o}" for o in "abc"}
    for m, t in (("a->b", "b"), ("a->c", "c")):
        compose[(m, "id_a")] = m
        compose[(f"id_{t}", m)] = m
    return FinCategory(["a", "b", "c"], morphisms, {o: f"id_{o}" for o in "abc"}, compose, name="span")


def omega_trunc(n: int) -> FinCategory:
    """The poset 0 < 1 < ... < n."""
    objs = [str(i) for i in range(n + 1)]
    data = {}
    for i in range(n + 1):
        for j in range(i, n + 1):
            mid = f"id_{i}" if i == j else f"{i}->{j}"
            data[mid] = (str(i), str(j), (i, j))
    return from_concrete(objs, data, lambda g, f: (f[0], g[1]), name=f"omega:{n}")


def _monotone_maps(m: int, k: int):
    """All order-preserving maps [m] -> [k] as value tuples."""

    def rec(i, lo):
        if i > m:
            yield ()
            return
        for v in range(lo, k + 1):
            for rest in rec(i + 1, v):
                yield (v,) + rest

    return list(rec(0, 0))


def delta_word(values: tuple[int, ...], k: int) -> str:
    """Epi-mono normal form d^{i1}...d^{is} s^{j1}...s^{jt} of a monotone map
    [m] -> [k] given by its values, with source appended: e.g. ``d1s0@1``."""
    m = len(values) - 1
    image = set(values)
    faces = [i for i in range(k, -1, -1) if i not in image]
    degens = [j for j in range(m) if values[j] == values[j + 1]]
    word = "".join(f"d{i}" for i in faces) + "".join(f"s{j}" for j in degens)
    return f"{word or 'id'}@{m}"


def delta_trunc(n: int) -> FinCategory:
    """Delta restricted to [0..n]: all order-preserving maps."""
    objs = [f"[{i}]" for i in range(n + 1)]
    data = {}
    for m in range(n + 1):
        for k in range(n + 1):
            for vals in _monotone_maps(m, k):
                data[delta_word(vals, k)] = (f"[{m}]", f"[{k}]", vals)
    return from_concrete(objs, data, lambda g, f: tuple(g[i] for i in f), name=f"delta:{n}")


_TOKEN = re.compile(r"([ds])(\d+)")


def delta_values(f: str) -> tuple[int, ...]:
    """Value tuple of the monotone map named by a normal-form id such as ``d1s0@1``."""
    word, m = f.rsplit("@", 1)
    vals = list(range(int(m) + 1))
    tokens = [] if word == "id" else _TOKEN.findall(word)
    for kind, idx in reversed(tokens):
        idx = int(idx)
        if kind == "s":
            vals = [v if v <= idx else v - 1 for v in vals]
        else:
            vals = [v if v < idx else v + 1 for v in vals]
    return tuple(vals)


# JSON schema


def category_to_json(c: FinCategory) -> dict:
    return {
        "schema": 1,
        "objects": [{"id": o} for o in c.objects],
        "morphisms": [{"id": m, "src": s, "dst": t} for m, (s, t) in c.morphisms.items()],
        "identities": {o: c.identity[o] for o in sorted(c.identity)},
        "compose": [[g, f, gf] for (g, f), gf in sorted(c.compose_table.items())],
    }


def category_from_json(data: dict) -> FinCategory:
    try:
        objects = [o["id"] for o in data["objects"]]
        morphisms = {m["id"]: (m["src"], m["dst"]) for m in data["morphisms"]}
        identity = dict(data["identities"])
        compose = {(g, f): gf for g, f, gf in data["compose"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise CategoryError(f"malformed category document: {exc}") from None
    if len(set(objects)) != len(objects):
        raise CategoryError("duplicate object id")
    if len(morphisms) != len(data["morphisms"]):
        raise CategoryError("duplicate morphism id")
    return FinCategory(objects, morphisms, identity, compose, name=data.get("name", ""))
