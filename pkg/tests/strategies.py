"""Hypothesis strategies: random objects are drawn from the package's
seeded generators, so hypothesis only has to shrink an integer seed."""

import random

from hypothesis import strategies as st

from finreedy import builtin
from finreedy.gen import GenConfig, random_diagram, random_map

SMALL_STRUCTURES = ("parpair", "parpair-op", "span", "span-alt", "omega:2", "delta:1", "dual(delta:1)", "discrete:2")
TINY = GenConfig(max_generators=2, max_relations=2)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
structure_names = st.sampled_from(SMALL_STRUCTURES)


def bounded(x, bound: int) -> bool:
    return max((len(v) for v in x.carrier.values()), default=0) <= bound


def diagram(name: str, seed: int, bound: int = 4, variance="co"):
    r = builtin(name)
    rng = random.Random(seed)
    while True:
        x = random_diagram(r.base, rng, TINY, variance)
        if bounded(x, bound):
            return r, x


def nat_map(name: str, seed: int, bound: int = 4, variance="co"):
    r = builtin(name)
    rng = random.Random(seed)
    while True:
        f = random_map(r.base, rng, TINY, variance)
        if bounded(f.source, bound) and bounded(f.target, bound):
            return r, f
