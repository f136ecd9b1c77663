import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finreedy.fincat import (
    CategoryError,
    FinCategory,
    category_from_json,
    category_to_json,
    delta_trunc,
    delta_values,
    delta_word,
    discrete,
    full_subcategory,
    omega_trunc,
    opposite,
    parallel_pair,
    product,
    span,
    validate_category,
)


def _binom(n, k):
    from math import comb

    return comb(n, k)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_delta_hom_counts_match_monotone_map_count(n):
    c = delta_trunc(n)
    assert validate_category(c)
    for i in range(n + 1):
        for j in range(n + 1):
            # monotone maps [i] -> [j]: choose i+1 values with repetition from j+1
            assert len(c.hom(f"[{i}]", f"[{j}]")) == _binom(i + j + 1, i + 1)


def test_delta3_has_121_morphisms():
    assert len(delta_trunc(3).morphisms) == 121


@given(st.integers(0, 3), st.data())
@settings(max_examples=30, deadline=None)
def test_delta_composition_is_composition_of_functions(n, data):
    c = delta_trunc(n)
    f = data.draw(st.sampled_from(sorted(c.morphisms)))
    g = data.draw(st.sampled_from(sorted(c.out_of(c.dst(f)))))
    fv, gv = delta_values(f), delta_values(g)
    assert delta_values(c.comp(g, f)) == tuple(gv[i] for i in fv)


def test_delta_word_roundtrip():
    c = delta_trunc(2)
    for m in c.morphisms:
        k = int(c.dst(m)[1:-1])
        assert delta_word(delta_values(m), k).split("@")[0] == m.split("@")[0]


@pytest.mark.parametrize("c", [parallel_pair(), span(), omega_trunc(4), discrete(3), delta_trunc(2)])
def test_builtin_categories_and_opposites_validate(c):
    assert validate_category(c)
    op = opposite(c)
    assert validate_category(op)
    assert opposite(op) == c


def test_product_category():
    p = product(parallel_pair(), span())
    assert validate_category(p)
    assert len(p.objects) == 6
    assert len(p.morphisms) == 4 * 5
    assert p.obj("a", "b") in p.objects


def test_full_subcategory_inclusion():
    c = omega_trunc(3)
    sub, inc = full_subcategory(c, ["1", "3"])
    assert validate_category(sub)
    assert set(sub.objects) == {"1", "3"}
    assert len(sub.morphisms) == 3


def _broken():
    return FinCategory(["a", "b"], {"id_a": ("a", "a"), "id_b": ("b", "b"), "f": ("a", "b")},
                       {"a": "id_a", "b": "id_b"},
                       {("id_a", "id_a"): "id_a", ("id_b", "id_b"): "id_b", ("f", "id_a"): "f"})


def test_missing_composite_is_reported():
    rep = validate_category(_broken())
    assert not rep
    assert rep.clause == "compose-domain"
    assert rep.witness["pair"] == ["id_b", "f"]


def test_non_neutral_identity_is_reported():
    c = parallel_pair()
    table = dict(c.compose_table)
    table[("f", "id_a")] = "g"
    bad = FinCategory(c.objects, c.morphisms, c.identity, table)
    rep = validate_category(bad)
    assert not rep and rep.clause == "unit"


def test_json_roundtrip():
    c = delta_trunc(2)
    assert category_from_json(category_to_json(c)) == c


def test_malformed_json_raises():
    with pytest.raises(CategoryError):
        category_from_json({"objects": [{"id": "a"}]})
