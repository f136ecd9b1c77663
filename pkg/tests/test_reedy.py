import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from finreedy import builtin, validate_reedy
from finreedy.fincat import CategoryError
from finreedy.gen import random_poset_reedy
from finreedy.library import ACCEPTANCE_BUILTINS, builtin_names
from finreedy.reedy import (
    ReedyStructure,
    dual_reedy,
    factorization_category,
    product_reedy,
    reedy_factorize,
    reedy_from_json,
    reedy_to_json,
    truncate,
)


@pytest.mark.parametrize("spec", ACCEPTANCE_BUILTINS + ("terminal", "delta:0", "omega:0"))
def test_builtins_validate(spec):
    assert validate_reedy(builtin(spec)).ok


def test_builtin_parser_rejects_unknown():
    with pytest.raises(CategoryError):
        builtin("cube:3")
    with pytest.raises(CategoryError):
        builtin("prod(omega:1)")
    assert "prod(A,B)" in builtin_names()


def test_constant_map_factors_through_a_point():
    r = builtin("delta:1")
    fac = reedy_factorize(r, "d1s0@1")
    assert (fac.left, fac.mid, fac.right, fac.degree) == ("s0@1", "[0]", "d1@0", 0)


@pytest.mark.parametrize("spec", ["delta:2", "span-alt", "prod(omega:1,parpair)", "dual(delta:2)"])
def test_factorization_matches_bruteforce_count(spec):
    r = builtin(spec)
    for f in r.base.morphisms:
        assert O.factorization_count(r, f) == 1
        fac = reedy_factorize(r, f)
        assert fac.left in r.lowering and fac.right in r.raising
        assert r.base.comp(fac.right, fac.left) == f


def test_fact_category_of_constant_map():
    r = builtin("delta:2")
    fc = factorization_category(r, "d1s0@1")
    assert fc.is_connected()
    assert fc.min_degree() == 0
    assert len(fc.minimizers()) == 1
    cat = fc.category
    assert len(cat.objects) == len(fc.objects)


def test_dual_is_involutive_and_swaps_classes():
    r = builtin("delta:2")
    d = dual_reedy(r)
    assert validate_reedy(d).ok
    assert d.raising == r.lowering and d.lowering == r.raising
    assert dual_reedy(d) == r


def test_product_degrees_add():
    r = product_reedy(builtin("omega:1"), builtin("delta:1"))
    assert validate_reedy(r).ok
    for o, (a, b) in r.base.obj_pairs.items():
        assert r.degree[o] == int(a) + int(b[1:-1])


def test_truncation_keeps_low_degrees():
    t, _ = truncate(builtin("delta:3"), 1)
    assert validate_reedy(t).ok
    assert set(t.base.objects) == {"[0]", "[1]"}


def test_json_overlay_roundtrip():
    r = builtin("span-alt")
    back = reedy_from_json(r.base, reedy_to_json(r))
    assert back == r


def test_degree_bound_is_enforced():
    r = builtin("omega:2")
    rep = validate_reedy(ReedyStructure(r.base, {o: 40 + i for i, o in enumerate(r.base.objects)}, r.raising, r.lowering))
    assert not rep.ok and rep.clause == "degree-bound"


@given(st.integers(0, 10_000), st.integers(2, 5))
@settings(max_examples=40, deadline=None)
def test_random_posets_are_reedy(seed, size):
    r = random_poset_reedy(random.Random(seed), size)
    assert validate_reedy(r).ok
    for f in r.base.morphisms:
        assert O.factorization_count(r, f) == 1


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_zigzags_stay_within_bounds(seed):
    r = builtin("delta:2")
    rng = random.Random(seed)
    f = rng.choice(sorted(r.base.morphisms))
    fc = factorization_category(r, f)
    goal = fc.objects.index((reedy_factorize(r, f).left, reedy_factorize(r, f).right))
    lo = fc.min_degree()
    for i, d in enumerate(fc.degrees):
        path = fc.zigzag(i, goal, lo, d)
        assert path is not None and path[0] == i and path[-1] == goal
        assert all(lo <= fc.degrees[k] <= d for k in path)
