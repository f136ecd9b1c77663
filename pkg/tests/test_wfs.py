import random

import pytest
from hypothesis import given, settings

import oracles as O
from finreedy import builtin
from finreedy.gen import quotient, random_subdiagram
from finreedy.reedy import dual_reedy
from finreedy.setfun import CO, CONTRA, DiagramError, SetNatTrans, compose
from finreedy.wfs import (
    ALL_ISO,
    FLAVORS,
    ISO_ALL,
    MONO_EPI,
    all_lifts_bruteforce,
    base_system,
    constants_classification,
    is_reedy_left,
    is_reedy_right,
    leibniz_left_preservation,
    reedy_factor,
    reedy_lift,
)
from strategies import diagram, nat_map, seeds, structure_names


@pytest.mark.parametrize("b", [MONO_EPI, ISO_ALL, ALL_ISO])
def test_base_systems_factor(b):
    rng = random.Random(1)
    from finreedy.gen import random_set_map

    for _ in range(30):
        f = random_set_map(rng, 3)
        l, rt = b.factor(f)
        assert b.left(l) and b.right(rt) and compose(rt, l) == f


def test_unknown_base_system():
    with pytest.raises(DiagramError):
        base_system("nope")


@given(structure_names, seeds)
@settings(max_examples=40, deadline=None)
def test_reedy_factor_classes(name, seed):
    r, f = nat_map(name, seed, 3)
    for flavor in FLAVORS:
        fac = reedy_factor(r, f, flavor=flavor)
        assert compose(fac.right, fac.left) == f
        assert all(O.relative_latching_injective(r, o, fac.left) for o in r.base.objects)
        assert all(O.relative_matching_surjective(r, o, fac.right) for o in r.base.objects)


@given(structure_names, seeds)
@settings(max_examples=40, deadline=None)
def test_membership_matches_oracles(name, seed):
    r, f = nat_map(name, seed, 3)
    assert is_reedy_left(r, f).member == all(O.relative_latching_injective(r, o, f) for o in r.base.objects)
    assert is_reedy_right(r, f).member == all(O.relative_matching_surjective(r, o, f) for o in r.base.objects)


def _problem(name, seed):
    r, b = diagram(name, seed, 3)
    rng = random.Random(seed)
    _, x = diagram(name, seed + 17, 3)
    maps = O.all_nat_maps(b, x, r.base, cap=5000)
    if not maps:
        x = b
        maps = [{n: {e: e for e in b.carrier[n]} for n in r.base.objects}]
    h = SetNatTrans(b, x, rng.choice(maps))
    _, i = random_subdiagram(b, rng)
    pairs = [(o, a, c) for o in r.base.objects for a in x.carrier[o] for c in x.carrier[o] if a != c]
    _, p = quotient(x, rng.sample(pairs, min(1, len(pairs))))
    return r, i, p, compose(h, i), compose(p, h)


@given(structure_names, seeds)
@settings(max_examples=40, deadline=None)
def test_solvable_lifts_are_found(name, seed):
    r, i, p, u, v = _problem(name, seed)
    res = reedy_lift(r, i, p, u, v)
    assert res.status == "LIFT"
    h = res.lift
    assert compose(h, i) == u and compose(p, h) == v
    assert all_lifts_bruteforce(i, p, u, v) >= 1


def test_commuting_and_non_commuting_squares():
    r = builtin("omega:0")
    from finreedy.setfun import SetValuedFunctor

    one = SetValuedFunctor(r.base, CO, {"0": [0]}, {})
    two = SetValuedFunctor(r.base, CO, {"0": [0, 1]}, {})
    i = SetNatTrans(one, one, {"0": {0: 0}})
    p = SetNatTrans(two, one, {"0": {0: 0, 1: 0}})
    u = SetNatTrans(one, two, {"0": {0: 0}})
    v = SetNatTrans(one, one, {"0": {0: 0}})
    assert reedy_lift(r, i, p, u, v).status == "LIFT"
    # p2 u2 = u2 differs from v2 i2, which sends both points to 0
    i2 = SetNatTrans(two, one, {"0": {0: 0, 1: 0}})
    p2 = SetNatTrans(two, two, {"0": {0: 0, 1: 1}})
    u2 = SetNatTrans(two, two, {"0": {0: 0, 1: 1}})
    v2 = SetNatTrans(one, two, {"0": {0: 0}})
    assert reedy_lift(r, i2, p2, u2, v2).status == "NOT_COMMUTATIVE"


def test_strict_mode_reports_preconditions():
    r = builtin("omega:0")
    from finreedy.setfun import SetValuedFunctor

    one = SetValuedFunctor(r.base, CO, {"0": [0]}, {})
    two = SetValuedFunctor(r.base, CO, {"0": [0, 1]}, {})
    i = SetNatTrans(two, one, {"0": {0: 0, 1: 0}})  # not injective
    p = SetNatTrans(one, one, {"0": {0: 0}})
    u = SetNatTrans(two, one, {"0": {0: 0, 1: 0}})
    v = SetNatTrans(one, one, {"0": {0: 0}})
    res = reedy_lift(r, i, p, u, v, strict=True)
    assert res.status == "PRECONDITION"
    assert not res.preconditions["left_is_reedy_left"]
    assert reedy_lift(r, i, p, u, v).status == "LIFT"


def test_unsolvable_square_has_witness():
    r = builtin("omega:0")
    from finreedy.setfun import SetValuedFunctor

    one = SetValuedFunctor(r.base, CO, {"0": [0]}, {})
    two = SetValuedFunctor(r.base, CO, {"0": [0, 1]}, {})
    i = SetNatTrans(two, one, {"0": {0: 0, 1: 0}})
    p = SetNatTrans(two, one, {"0": {0: 0, 1: 0}})
    u = SetNatTrans(two, two, {"0": {0: 0, 1: 1}})
    v = SetNatTrans(one, one, {"0": {0: 0}})
    res = reedy_lift(r, i, p, u, v)
    assert res.status == "UNSOLVABLE" and res.witness
    assert all_lifts_bruteforce(i, p, u, v) == 0


@pytest.mark.parametrize("spec,cof,fib", [
    ("omega:3", True, True),
    ("parpair", False, True),
    ("parpair-op", True, False),
    ("span", True, True),
    ("span-alt", True, True),
    ("delta:2", False, True),
    ("dual(delta:2)", True, False),
])
def test_constants_flags(spec, cof, fib):
    rep = constants_classification(builtin(spec))
    assert (rep.cofibrant, rep.fibrant) == (cof, fib)
    assert rep.consistent
    d = constants_classification(dual_reedy(builtin(spec)))
    assert (d.cofibrant, d.fibrant) == (fib, cof)


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_leibniz_preservation_on_omega(seed):
    r = builtin("omega:2")
    rng = random.Random(seed)
    _, w = diagram("omega:2", seed, 3, variance=CONTRA)
    from finreedy.gen import random_subdiagram as sub

    _, f = sub(w, rng)
    _, y = diagram("omega:2", seed + 1, 3)
    _, i = sub(y, rng)
    cert = leibniz_left_preservation(r, f, i)
    if cert.preconditions["weight_left"] and cert.preconditions["map_left"]:
        assert cert.holds
