"""Random test data: diagrams as quotients of coproducts of representables,
maps between them, subdiagrams, simplicial sets and poset Reedy structures."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .fincat import FinCategory
from .finsets import UnionFind
from .library import delta_reedy
from .reedy import ReedyStructure
from .setfun import (
    CO,
    CONTRA,
    FinSet,
    SetNatTrans,
    SetValuedFunctor,
    coproduct_many,
    representable,
    set_map,
    subdiagram,
)


@dataclass
class GenConfig:
    max_generators: int = 3
    max_relations: int = 3
    max_set: int = 3


def quotient(x: SetValuedFunctor, pairs: list) -> tuple[SetValuedFunctor, SetNatTrans]:
    """Smallest quotient of x identifying each (object, a, b) in ``pairs``:
    the generated congruence is closed under every action."""
    ufs = {o: UnionFind(x.carrier[o]) for o in x.base.objects}
    for o, a, b in pairs:
        ufs[o].union(a, b)
    changed = True
    while changed:
        changed = False
        for f, s, t in x.arrows():
            act = x.action[f]
            for a in x.carrier[s]:
                ra = ufs[s].find(a)
                if ra != a and ufs[t].find(act[a]) != ufs[t].find(act[ra]):
                    ufs[t].union(act[a], act[ra])
                    changed = True
    reps = {o: {a: ufs[o].find(a) for a in x.carrier[o]} for o in x.base.objects}
    carrier = {o: set(reps[o].values()) for o in x.base.objects}
    action = {f: {reps[s][a]: reps[t][x.action[f][a]] for a in x.carrier[s]} for f, s, t in x.arrows()}
    q = SetValuedFunctor(x.base, x.variance, carrier, action)
    return q, SetNatTrans(x, q, reps)


def free_diagram(c: FinCategory, gens: list, variance: str = CO) -> SetValuedFunctor:
    """Coproduct of representables at the listed objects (elements (i, morphism))."""
    parts = [representable(c, o, variance) for o in gens]
    if not parts:
        return SetValuedFunctor(c, variance, {}, {})
    obj, _ = coproduct_many(parts)
    return obj


def _random_pairs(x: SetValuedFunctor, rng: random.Random, k: int) -> list:
    nonempty = [o for o in x.base.objects if len(x.carrier[o]) > 1]
    out = []
    for _ in range(k):
        if not nonempty:
            break
        o = rng.choice(nonempty)
        a, b = rng.sample(list(x.carrier[o]), 2)
        out.append((o, a, b))
    return out


def random_diagram(c: FinCategory, rng: random.Random, cfg: GenConfig = GenConfig(), variance: str = CO) -> SetValuedFunctor:
    gens = [rng.choice(c.objects) for _ in range(rng.randint(0, cfg.max_generators))]
    x = free_diagram(c, gens, variance)
    q, _ = quotient(x, _random_pairs(x, rng, rng.randint(0, cfg.max_relations)))
    return q


def random_map(c: FinCategory, rng: random.Random, cfg: GenConfig = GenConfig(), variance: str = CO,
               target: SetValuedFunctor | None = None) -> SetNatTrans:
    """A map out of a quotiented free diagram, given by random generator images."""
    y = target if target is not None else random_diagram(c, rng, cfg, variance)
    usable = [o for o in c.objects if y.carrier[o]]
    gens = [rng.choice(usable) for _ in range(rng.randint(0, cfg.max_generators))] if usable else []
    free = free_diagram(c, gens, variance)
    images = [rng.choice(list(y.carrier[o])) for o in gens]
    comps = {o: {} for o in c.objects}
    for o in c.objects:
        for (i, m) in free.carrier[o]:
            comps[o][(i, m)] = y.action[m][images[i]]
    # identify only elements with equal images so the map descends
    cand = []
    for o in c.objects:
        by_img: dict = {}
        for e in free.carrier[o]:
            by_img.setdefault(comps[o][e], []).append(e)
        cand += [(o, a, b) for es in by_img.values() for a in es for b in es if a != b]
    k = rng.randint(0, cfg.max_relations)
    pairs = rng.sample(cand, min(k, len(cand)))
    q, qmap = quotient(free, pairs)
    qcomps = {o: {qmap.components[o][e]: comps[o][e] for e in free.carrier[o]} for o in c.objects}
    return SetNatTrans(q, y, qcomps)


def random_subdiagram(x: SetValuedFunctor, rng: random.Random, p: float = 0.4) -> tuple[SetValuedFunctor, SetNatTrans]:
    """Subdiagram generated by a random set of elements; returns (sub, inclusion)."""
    keep = {o: {e for e in x.carrier[o] if rng.random() < p} for o in x.base.objects}
    changed = True
    while changed:
        changed = False
        for f, s, t in x.arrows():
            for e in list(keep[s]):
                img = x.action[f][e]
                if img not in keep[t]:
                    keep[t].add(img)
                    changed = True
    return subdiagram(x, keep)


def random_mono(c: FinCategory, rng: random.Random, cfg: GenConfig = GenConfig(), variance: str = CO) -> SetNatTrans:
    y = random_diagram(c, rng, cfg, variance)
    return random_subdiagram(y, rng)[1]


def random_set(rng: random.Random, max_size: int = 3, prefix: str = "s") -> FinSet:
    return FinSet([f"{prefix}{i}" for i in range(rng.randint(0, max_size))])


def random_set_map(rng: random.Random, max_size: int = 3, injective: bool | None = None) -> SetNatTrans:
    a = random_set(rng, max_size, "a")
    b = random_set(rng, max_size, "b")
    if injective:
        extra = [f"b{len(b.elements) + i}" for i in range(max(0, len(a.elements) - len(b.elements)))]
        b = FinSet(list(b.elements) + extra)
        imgs = rng.sample(list(b.elements), len(a.elements))
        return set_map(a, b, dict(zip(a.elements, imgs)))
    if a.elements and not b.elements:
        b = FinSet(["b0"])
    return set_map(a, b, {x: rng.choice(list(b.elements)) for x in a.elements})


# simplicial sets


def random_simplicial_set(n: int, rng: random.Random, max_generators: int = 3, max_relations: int = 3) -> SetValuedFunctor:
    """Contravariant functor on Delta_{<=n}: a quotient of a coproduct of standard simplices."""
    c = delta_reedy(n).base
    gens = [rng.choice(c.objects) for _ in range(rng.randint(1, max_generators))]
    x = free_diagram(c, gens, CONTRA)
    q, _ = quotient(x, _random_pairs(x, rng, rng.randint(0, max_relations)))
    return q


def random_simplicial_mono(n: int, rng: random.Random) -> SetNatTrans:
    y = random_simplicial_set(n, rng)
    return random_subdiagram(y, rng)[1]


def random_simplicial_map(n: int, rng: random.Random) -> SetNatTrans:
    c = delta_reedy(n).base
    y = random_simplicial_set(n, rng)
    return random_map(c, rng, GenConfig(2, 2, 3), CONTRA, target=y)


# poset Reedy structures


def random_poset_reedy(rng: random.Random, size: int = 4, density: float = 0.4) -> ReedyStructure:
    """A random finite poset as a category, every arrow raising; degree = height."""
    objs = [f"p{i}" for i in range(size)]
    less = {(i, j) for i in range(size) for j in range(i + 1, size) if rng.random() < density}
    # transitive closure
    changed = True
    while changed:
        changed = False
        for (a, b) in list(less):
            for (b2, c) in list(less):
                if b == b2 and (a, c) not in less:
                    less.add((a, c))
                    changed = True
    rel = less | {(i, i) for i in range(size)}
    mor = {}
    ident = {}
    for (i, j) in rel:
        name = f"id_{objs[i]}" if i == j else f"{objs[i]}<{objs[j]}"
        mor[name] = (objs[i], objs[j])
        if i == j:
            ident[objs[i]] = name
    by_pair = {(s, t): m for m, (s, t) in mor.items()}
    comp = {}
    for g, (b, c) in mor.items():
        for f, (a, b2) in mor.items():
            if b == b2:
                comp[(g, f)] = by_pair[(a, c)]
    cat = FinCategory(objs, mor, ident, comp, name=f"poset{size}")
    height = {}
    for j in range(size):
        height[objs[j]] = max((height[objs[i]] + 1 for (i, k) in less if k == j), default=0)
    return ReedyStructure(cat, height, list(mor), list(ident.values()), name=f"poset{size}")
