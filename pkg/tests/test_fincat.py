from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intmodel.fincat import (
    CategoryError,
    CycleError,
    FinCat,
    FinFunctor,
    arrow_category,
    bicompleteness,
    bounded_shape_bicompleteness,
    build_poset,
    chain,
    compose_functors,
    coslice_category,
    discrete,
    enumerate_retracts,
    find_colimit,
    find_limit,
    find_natural_iso,
    identity_functor,
    opposite,
    parallel_pair,
    point,
    product,
    slice_category,
    validate_category,
    validate_functor,
    diagram_from_objects,
)


@st.composite
def dags(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    objs = [f"x{i}" for i in range(n)]
    return build_poset([(f"x{i}", f"x{j}") for i, j in edges], objs, "P")


def one_object(table_ab: dict, name: str = "E") -> FinCat:
    arrows = [("1", "*", "*"), ("a", "*", "*"), ("b", "*", "*")]
    table = {("1", x): x for x in "1ab"} | {(x, "1"): x for x in "1ab"} | table_ab
    return FinCat(["*"], arrows, {"*": "1"}, table, name)


# left-zero semigroup with a unit adjoined: x∘y = x
LEFT_ZERO = {("a", "a"): "a", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "b"}
# (b∘b)∘b = a∘b = a but b∘(b∘b) = b∘a = b
BROKEN = {("a", "a"): "a", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "a"}


def test_chain_shape():
    C = chain(3)
    assert C.objects == ("0", "1", "2")
    assert len(C.morphisms) == 6
    assert C.comp(("1", "2"), ("0", "1")) == ("0", "2")
    assert C.is_thin and validate_category(C).ok


def test_poset_cycle_reports_cycle():
    with pytest.raises(CycleError) as e:
        build_poset([("a", "b"), ("b", "c"), ("c", "a")])
    assert "a" in str(e.value)


def test_monoid_valid_and_broken():
    assert validate_category(one_object(LEFT_ZERO)).ok
    rep = validate_category(one_object(BROKEN))
    assert rep.first_failure().name == "composition is associative"
    assert rep.first_failure().witness is not None


def test_missing_composite_is_reported():
    C = chain(3)
    table = dict(C.table)
    del table[(("1", "2"), ("0", "1"))]
    bad = FinCat(C.objects, C.arrows(), C.identity, table, "bad")
    rep = validate_category(bad)
    assert rep.first_failure().name == "composition is total on composable pairs"
    assert rep.first_failure().witness == (("1", "2"), ("0", "1"))


def test_terminal_and_initial():
    C = build_poset([("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    assert C.initial() == "0" and C.terminal() == "1"
    assert discrete(["a", "b"]).terminal() is None


def test_parallel_pair_not_thin_and_no_coequalizer_in_itself():
    P = parallel_pair()
    assert not P.is_thin and validate_category(P).ok
    assert not bicompleteness(P).ok


def test_limits_in_lattice():
    C = build_poset([("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    D = diagram_from_objects(C, ["a", "b"])
    assert find_limit(C, D).apex == "0"
    assert find_colimit(C, D).apex == "1"


def test_constructions_sizes():
    C = chain(2)
    assert len(arrow_category(C).objects) == 3
    assert len(arrow_category(C).morphisms) == 6
    assert len(product(C, C).objects) == 4
    assert [len(slice_category(C, x).objects) for x in C.objects] == [1, 2]
    assert [len(coslice_category(C, x).objects) for x in C.objects] == [2, 1]
    with pytest.raises(CategoryError):
        slice_category(C, "nope")


def test_retracts_in_poset_are_trivial():
    C = chain(3)
    for f in C.morphisms:
        assert {r.g for r in enumerate_retracts(C, f)} == {f}


@settings(max_examples=40, deadline=None)
@given(dags())
def test_random_posets_are_categories(P):
    assert validate_category(P).ok
    assert validate_category(opposite(P)).ok
    assert opposite(opposite(P)) == P


@settings(max_examples=25, deadline=None)
@given(dags(4), dags(3))
def test_derived_constructions_are_categories(P, Q):
    for C in (product(P, Q), arrow_category(P), slice_category(P, P.objects[-1]), coslice_category(Q, Q.objects[0])):
        assert validate_category(C).ok


@settings(max_examples=30, deadline=None)
@given(dags(4))
def test_bicompleteness_agrees_with_brute_force(P):
    assert bicompleteness(P).ok == bounded_shape_bicompleteness(P, len(P.objects)).ok


@st.composite
def monotone_maps(draw):
    P = draw(dags(4))
    Q = chain(draw(st.integers(1, 3)))
    # a monotone map into a chain: a level function that never decreases along arrows
    for _ in range(50):
        levels = {x: draw(st.integers(0, len(Q.objects) - 1)) for x in P.objects}
        if all(levels[P.src(f)] <= levels[P.tgt(f)] for f in P.morphisms):
            break
    else:
        levels = {x: 0 for x in P.objects}
    obj = {x: Q.objects[levels[x]] for x in P.objects}
    mor = {f: (obj[P.src(f)], obj[P.tgt(f)]) for f in P.morphisms}
    return FinFunctor(P, Q, obj, mor, "F")


@settings(max_examples=40, deadline=None)
@given(monotone_maps())
def test_functor_laws(F):
    assert validate_functor(F).ok
    G = compose_functors(identity_functor(F.target), F)
    assert G == F and compose_functors(F, identity_functor(F.source)) == F
    assert find_natural_iso(F, F) is not None


def test_non_functor_is_rejected():
    C = chain(2)
    F = FinFunctor(C, C, {"0": "1", "1": "0"}, {("0", "0"): ("1", "1"), ("1", "1"): ("0", "0"),
                                                  ("0", "1"): ("1", "1")}, "bad")
    assert not validate_functor(F).ok


def test_point_and_hom():
    P = point()
    assert P.objects == ("*",) and P.hom("*", "*") == (("*", "*"),)
    C = chain(3)
    assert all(len(C.hom(a, b)) == (a <= b) for a, b in itertools.product(C.objects, C.objects))
