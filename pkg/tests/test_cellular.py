import random

import pytest
from hypothesis import given, settings

import oracles as O
from finreedy import builtin
from finreedy.cellular import (
    boundary_cell_presentation,
    building_up,
    canonical_hom_presentation,
    degenerate_simplices,
    double_transfer,
    ez_decompose,
    is_relative_cell,
    nondegenerate,
    presentation_to_opposite,
    replay,
    sequentialize,
    stage_objects_independent,
    transfer_first,
    transfer_second,
)
from finreedy.gen import random_set_map, random_simplicial_set, random_subdiagram
from finreedy.leibniz import leibniz
from finreedy.setfun import CO, SetNatTrans, hom_bifunctor
from strategies import diagram, nat_map, seeds, structure_names


@pytest.mark.parametrize("spec", ["omega:3", "parpair", "span", "discrete:2", "dual(delta:2)", "delta:2"])
def test_canonical_presentation_cells_by_degree(spec):
    r = builtin(spec)
    p = canonical_hom_presentation(r)
    assert replay(p).ok
    assert p.cell_counts() == [len(r.objects_of_degree(n)) for n in range(r.max_degree + 1)]
    assert all(st.is_pushout and st.is_pullback for st in p.stages)
    assert p.target.target == hom_bifunctor(r.base)


@given(structure_names, seeds)
@settings(max_examples=40, deadline=None)
def test_building_up_replays(name, seed):
    r, f = nat_map(name, seed, 3)
    p = building_up(r, f)
    assert replay(p).ok
    ind = stage_objects_independent(r, f)
    for st, obj in zip(p.stages, ind):
        assert st.obj == obj
    assert p.stabilization_index <= r.max_degree


def _corruptible(seed):
    r, f = nat_map("span-alt", seed, 3)
    p = building_up(r, f)
    for idx, st in enumerate(p.stages):
        for cell in st.cells:
            for n, m in cell.characteristic.components.items():
                for k, v in m.items():
                    alt = [e for e in st.obj.carrier[n] if e != v]
                    if alt:
                        return p, idx, cell, n, k, alt[0]
    return None


def test_replay_localizes_a_corrupted_cell():
    from finreedy.cellular import _finish_stage

    found = next(filter(None, (_corruptible(s) for s in range(200))))
    p, idx, cell, n, k, wrong = found
    comps = {m: dict(v) for m, v in cell.characteristic.components.items()}
    comps[n][k] = wrong
    cell.characteristic = SetNatTrans(cell.characteristic.source, cell.characteristic.target, comps)
    st = p.stages[idx]
    prev = p.stages[idx - 1].obj if idx else p.start
    p.stages[idx] = _finish_stage(st.index, st.cells, prev, st.obj, st.connecting)
    res = replay(p)
    assert not res.ok
    assert res.failed_stage == st.index
    assert res.failed_cell is not None


@given(structure_names, seeds)
@settings(max_examples=40, deadline=None)
def test_cell_criterion_matches_relative_latching(name, seed):
    r, y = diagram(name, seed, 3)
    _, f = random_subdiagram(y, random.Random(seed))
    v = is_relative_cell(r, f)
    assert v.is_cell == all(O.relative_latching_injective(r, o, f) for o in r.base.objects)
    if v.is_cell:
        assert v.replay.ok
        new = sum(len(f.target.carrier[o]) - len(f.source.carrier[o]) for o in r.base.objects)
        assert len(v.presentation.cells()) <= new
    else:
        assert v.witness["object"] in r.base.objects


def test_non_mono_is_never_a_cell():
    r = builtin("omega:1")
    from finreedy.setfun import SetValuedFunctor

    x = SetValuedFunctor(r.base, CO, {"0": [0, 1], "1": [0, 1]}, {"0->1": {0: 0, 1: 1}})
    y = SetValuedFunctor(r.base, CO, {"0": [0], "1": [0]}, {"0->1": {0: 0}})
    f = SetNatTrans(x, y, {"0": {0: 0, 1: 0}, "1": {0: 0, 1: 0}})
    v = is_relative_cell(r, f)
    assert not v.is_cell and v.witness["object"] == "0"


@given(seeds)
@settings(max_examples=15, deadline=None)
def test_transfers_replay(seed):
    rng = random.Random(seed)
    _, f = nat_map("parpair", seed, 3)
    p = building_up(builtin("parpair"), f)
    g = random_set_map(rng, 2)
    t = transfer_first(p, g, "tensor")
    assert replay(t).ok and t.target == leibniz("tensor", f, g).map
    _, g2 = nat_map("omega:1", seed + 1, 2)
    q = building_up(builtin("omega:1"), g2)
    t2 = transfer_second(f, q, "exterior")
    assert replay(t2).ok
    d = double_transfer(p, q, "exterior")
    assert replay(d).ok
    assert len(d.cells()) == len(p.cells()) * len(q.cells())


def test_sequentialize_one_cell_per_stage():
    r, f = nat_map("span", 7, 3)
    p = building_up(r, f)
    s = sequentialize(p)
    assert all(len(st.cells) <= 1 for st in s.stages)
    assert len(s.cells()) == len(p.cells())
    assert replay(s).ok


def test_opposite_presentation_replays():
    r = builtin("dual(delta:1)")
    _, f = nat_map("dual(delta:1)", 3, 3)
    p = boundary_cell_presentation(r, f) if is_relative_cell(r, f).is_cell else building_up(r, f)
    assert replay(presentation_to_opposite(p)).ok


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_eilenberg_zilber(seed):
    rng = random.Random(seed)
    n = 1 + seed % 3
    x = random_simplicial_set(n, rng)
    for level in x.base.objects:
        assert degenerate_simplices(x, level) == O.degenerate_naive(x, level)
        nd = set(nondegenerate(x, level))
        for e in x.carrier[level]:
            res = ez_decompose(x, level, e)
            assert res.candidates == 1
            if e in nd:
                assert res.simplex == (level, e)


def test_ez_of_standard_simplex():
    from finreedy.setfun import CONTRA, representable

    c = builtin("delta:2").base
    x = representable(c, "[1]", CONTRA)
    assert nondegenerate(x, "[2]") == []
    assert len(nondegenerate(x, "[1]")) == 1
    assert len(nondegenerate(x, "[0]")) == 2
