import random

from hypothesis import given, settings

from finreedy import builtin, validate_reedy
from finreedy.gen import (
    GenConfig,
    free_diagram,
    quotient,
    random_diagram,
    random_map,
    random_mono,
    random_poset_reedy,
    random_set_map,
    random_simplicial_map,
    random_simplicial_set,
)
from finreedy.setfun import CONTRA, is_epi, is_mono
from strategies import seeds, structure_names


@given(structure_names, seeds)
@settings(max_examples=40, deadline=None)
def test_generated_data_is_valid(name, seed):
    r = builtin(name)
    rng = random.Random(seed)
    assert random_diagram(r.base, rng).validate()
    f = random_map(r.base, rng)
    assert f.validate() and f.source.validate() and f.target.validate()
    assert is_mono(random_mono(r.base, rng))


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_quotient_map_is_epi_and_respects_pairs(seed):
    rng = random.Random(seed)
    r = builtin("span")
    x = free_diagram(r.base, ["a", "a", "b"])
    pairs = [("b", rng.choice(list(x.carrier["b"])), rng.choice(list(x.carrier["b"])))]
    q, m = quotient(x, pairs)
    assert q.validate() and m.validate() and is_epi(m)
    for o, a, b in pairs:
        assert m.components[o][a] == m.components[o][b]


def test_same_seed_same_output():
    r = builtin("parpair")
    a = random_map(r.base, random.Random(5), GenConfig())
    b = random_map(r.base, random.Random(5), GenConfig())
    assert a == b


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_simplicial_generators(seed):
    rng = random.Random(seed)
    x = random_simplicial_set(2, rng)
    assert x.variance == CONTRA and x.validate()
    f = random_simplicial_map(2, rng)
    assert f.validate()


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_set_maps(seed):
    rng = random.Random(seed)
    assert is_mono(random_set_map(rng, 3, injective=True))
    assert random_set_map(rng, 3).validate()


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_poset_structures_validate(seed):
    assert validate_reedy(random_poset_reedy(random.Random(seed), 5)).ok
