"""Reedy structures on finite categories.

A structure is data layered over a FinCategory: a degree per object and
two id-sets, the raising and the lowering morphisms.  Every morphism must
factor uniquely as a lowering map followed by a raising map.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .fincat import (
    OK,
    CategoryError,
    FinCategory,
    FinFunctor,
    ValidationReport,
    full_subcategory,
    opposite,
    product,
)

DEFAULT_DEGREE_BOUND = 32


class ReedyStructure:
    def __init__(
        self,
        base: FinCategory,
        degree: dict[str, int],
        raising: Iterable[str],
        lowering: Iterable[str],
        name: str = "",
    ):
        self.base = base
        self.degree = dict(degree)
        self.raising = frozenset(raising)
        self.lowering = frozenset(lowering)
        self.name = name or base.name
        self._fact: dict[str, list] | None = None

    def deg(self, obj: str) -> int:
        return self.degree[obj]

    @property
    def max_degree(self) -> int:
        return max(self.degree.values(), default=-1)

    def objects_of_degree(self, n: int) -> tuple[str, ...]:
        return tuple(o for o in self.base.objects if self.degree[o] == n)

    def factorizations(self, f: str) -> list[tuple[str, str]]:
        """All (lowering g, raising h) with h after g equal to f."""
        if self._fact is None:
            c = self.base
            table: dict[str, list] = {m: [] for m in c.morphisms}
            for g in sorted(self.lowering):
                for h in c.out_of(c.dst(g)):
                    if h in self.raising:
                        table[c.comp(h, g)].append((g, h))
            self._fact = table
        return self._fact[f]

    def __eq__(self, other):
        if not isinstance(other, ReedyStructure):
            return NotImplemented
        return (
            self.base == other.base
            and self.degree == other.degree
            and self.raising == other.raising
            and self.lowering == other.lowering
        )

    def __hash__(self):
        return hash((self.base, tuple(sorted(self.degree.items())), self.raising, self.lowering))

    def __repr__(self):
        return f"<ReedyStructure {self.name or '?'}: {len(self.base.objects)} objects, max degree {self.max_degree}>"


@dataclass(frozen=True)
class Factorization:
    morphism: str
    left: str  # lowering part
    mid: str
    right: str  # raising part
    degree: int

    def to_json(self) -> dict:
        return {"morphism": self.morphism, "left": self.left, "mid": self.mid, "right": self.right, "degree": self.degree}


def validate_reedy(r: ReedyStructure, degree_bound: int = DEFAULT_DEGREE_BOUND) -> ValidationReport:
    c = r.base
    for o in c.objects:
        d = r.degree.get(o)
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            return ValidationReport(False, "degree", {"object": o}, f"{o} has no natural-number degree")
        if d > degree_bound:
            return ValidationReport(False, "degree-bound", {"object": o, "degree": d}, "degree exceeds bound")
    for side, ids in (("raising", r.raising), ("lowering", r.lowering)):
        stray = sorted(ids - set(c.morphisms))
        if stray:
            return ValidationReport(False, "unknown-morphism", {"side": side, "morphism": stray[0]}, "not a morphism")
        for o in c.objects:
            if c.identity[o] not in ids:
                return ValidationReport(False, "identities", {"side": side, "object": o}, f"identity at {o} missing")
    for side, ids in (("raising", r.raising), ("lowering", r.lowering)):
        for (g, f), gf in c.compose_table.items():
            if g in ids and f in ids and gf not in ids:
                return ValidationReport(
                    False, "closure", {"side": side, "pair": [g, f], "composite": gf}, f"{side} not closed"
                )
    for f in sorted(r.raising):
        if not c.is_identity(f) and r.degree[c.src(f)] >= r.degree[c.dst(f)]:
            return ValidationReport(False, "degree-monotonicity", {"side": "raising", "morphism": f}, "raising map does not raise degree")
    for f in sorted(r.lowering):
        if not c.is_identity(f) and r.degree[c.src(f)] <= r.degree[c.dst(f)]:
            return ValidationReport(False, "degree-monotonicity", {"side": "lowering", "morphism": f}, "lowering map does not lower degree")
    r._fact = None
    for f in c.morphisms:
        fs = r.factorizations(f)
        if len(fs) != 1:
            return ValidationReport(
                False,
                "unique-factorization",
                {"morphism": f, "count": len(fs), "factorizations": [list(p) for p in fs]},
                f"{f} has {len(fs)} lowering-raising factorizations",
            )
    return OK


def reedy_factorize(r: ReedyStructure, f: str) -> Factorization:
    if f not in r.base.morphisms:
        raise CategoryError(f"unknown morphism {f!r}")
    fs = r.factorizations(f)
    if len(fs) != 1:
        raise CategoryError(f"{f} has {len(fs)} Reedy factorizations")
    g, h = fs[0]
    mid = r.base.dst(g)
    return Factorization(f, g, mid, h, r.degree[mid])


# factorization categories


@dataclass
class FactorizationCategory:
    """All two-step factorizations (g, h) of a fixed morphism, with maps k
    between them satisfying k g = g' and h' k = h."""

    reedy: ReedyStructure
    morphism: str
    objects: list  # (g, h) pairs
    arrows: list  # (k, i, j) with i, j indices into objects
    degrees: list
    _category: FinCategory | None = field(default=None, repr=False)

    @property
    def is_empty(self) -> bool:
        return not self.objects

    def components(self) -> list[list[int]]:
        adj: dict[int, set] = {i: set() for i in range(len(self.objects))}
        for _, i, j in self.arrows:
            adj[i].add(j)
            adj[j].add(i)
        seen, comps = set(), []
        for s in range(len(self.objects)):
            if s in seen:
                continue
            comp, queue = [], deque([s])
            seen.add(s)
            while queue:
                v = queue.popleft()
                comp.append(v)
                for w in sorted(adj[v]):
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def min_degree(self) -> int | None:
        return min(self.degrees, default=None)

    def minimizers(self) -> list[int]:
        m = self.min_degree()
        return [i for i, d in enumerate(self.degrees) if d == m]

    def zigzag(self, start: int, goal: int, lo: int, hi: int) -> list[int] | None:
        """Shortest undirected path start..goal using only objects whose degree lies in [lo, hi]."""
        adj: dict[int, set] = {i: set() for i in range(len(self.objects))}
        for _, i, j in self.arrows:
            adj[i].add(j)
            adj[j].add(i)
        prev = {start: None}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            if v == goal:
                path = []
                while v is not None:
                    path.append(v)
                    v = prev[v]
                return path[::-1]
            for w in sorted(adj[v]):
                if w not in prev and lo <= self.degrees[w] <= hi:
                    prev[w] = v
                    queue.append(w)
        return None

    def report(self) -> dict:
        out = {
            "morphism": self.morphism,
            "objects": [{"left": g, "mid": self.reedy.base.dst(g), "right": h, "degree": d}
                        for (g, h), d in zip(self.objects, self.degrees)],
            "arrow_count": len(self.arrows),
            "connected": self.is_connected(),
            "min_degree": self.min_degree(),
            "minimizers": len(self.minimizers()),
        }
        return out

    @property
    def category(self) -> FinCategory:
        """The factorizations as a FinCategory (object ids ``g|h``, arrow ids ``k:i>j``)."""
        if self._category is None:
            c = self.reedy.base
            oid = [f"{g}|{h}" for g, h in self.objects]
            mid = {}
            morphisms = {}
            for k, i, j in self.arrows:
                m = f"{k}:{oid[i]}>{oid[j]}"
                mid[(k, i, j)] = m
                morphisms[m] = (oid[i], oid[j])
            identity = {oid[i]: mid[(c.identity[c.dst(g)], i, i)] for i, (g, _) in enumerate(self.objects)}
            out: dict[int, list] = {}
            for k, i, j in self.arrows:
                out.setdefault(i, []).append((k, j))
            compose = {}
            for k1, i, j in self.arrows:
                for k2, l in out.get(j, ()):
                    compose[(mid[(k2, j, l)], mid[(k1, i, j)])] = mid[(c.comp(k2, k1), i, l)]
            self._category = FinCategory(oid, morphisms, identity, compose, name=f"fact({self.morphism})")
        return self._category


def factorization_category(r: ReedyStructure, f: str, through: Iterable[str] | None = None) -> FactorizationCategory:
    c = r.base
    if f not in c.morphisms:
        raise CategoryError(f"unknown morphism {f!r}")
    a, b = c.morphisms[f]
    allowed = set(c.objects) if through is None else set(through)
    objs, degs = [], []
    for mid in c.objects:
        if mid not in allowed:
            continue
        for g in c.hom(a, mid):
            for h in c.hom(mid, b):
                if c.comp(h, g) == f:
                    objs.append((g, h))
                    degs.append(r.degree[mid])
    by_mid: dict[str, list[int]] = {}
    for i, (g, _) in enumerate(objs):
        by_mid.setdefault(c.dst(g), []).append(i)
    arrows = []
    for i, (g, h) in enumerate(objs):
        m1 = c.dst(g)
        for m2, js in by_mid.items():
            for k in c.hom(m1, m2):
                kg = c.comp(k, g)
                for j in js:
                    g2, h2 = objs[j]
                    if kg == g2 and c.comp(h2, k) == h:
                        arrows.append((k, i, j))
    return FactorizationCategory(r, f, objs, arrows, degs)


# constructions


def dual_reedy(r: ReedyStructure) -> ReedyStructure:
    base = opposite(r.base)
    if r.name.startswith("dual(") and r.name.endswith(")"):
        name = r.name[5:-1]
    else:
        name = f"dual({r.name})" if r.name else ""
    return ReedyStructure(base, r.degree, r.lowering, r.raising, name=name)


def product_reedy(r: ReedyStructure, s: ReedyStructure) -> ReedyStructure:
    base = product(r.base, s.base)
    degree = {o: r.degree[x] + s.degree[y] for o, (x, y) in base.obj_pairs.items()}
    raising = [m for m, (f, g) in base.mor_pairs.items() if f in r.raising and g in s.raising]
    lowering = [m for m, (f, g) in base.mor_pairs.items() if f in r.lowering and g in s.lowering]
    name = f"prod({r.name},{s.name})" if r.name and s.name else ""
    return ReedyStructure(base, degree, raising, lowering, name=name)


def truncate(r: ReedyStructure, n: int) -> tuple[ReedyStructure, FinFunctor]:
    keep = [o for o in r.base.objects if r.degree[o] <= n]
    sub, incl = full_subcategory(r.base, keep)
    sub.name = f"{r.base.name}<={n}" if r.base.name else ""
    t = ReedyStructure(
        sub,
        {o: r.degree[o] for o in keep},
        [m for m in sub.morphisms if m in r.raising],
        [m for m in sub.morphisms if m in r.lowering],
        name=f"{r.name}<={n}" if r.name else "",
    )
    return t, incl


def with_structure(base: FinCategory, degree: dict, raising, lowering, name: str = "") -> ReedyStructure:
    return ReedyStructure(base, degree, raising, lowering, name)


# JSON overlay


def reedy_to_json(r: ReedyStructure) -> dict:
    return {
        "schema": 1,
        "degree": {o: r.degree[o] for o in r.base.objects},
        "raising": sorted(r.raising),
        "lowering": sorted(r.lowering),
    }


def reedy_from_json(base: FinCategory, data: dict) -> ReedyStructure:
    try:
        return ReedyStructure(base, dict(data["degree"]), list(data["raising"]), list(data["lowering"]))
    except (KeyError, TypeError) as exc:
        raise CategoryError(f"malformed Reedy overlay: {exc}") from None
