from __future__ import annotations

import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from intmodel.corpus import B2, ex44_model, left_proper, right_proper
from intmodel.fincat import build_poset, chain, parallel_pair
from intmodel.modelstruct import (
    ModelError,
    PreModel,
    check_model,
    check_model_axioms,
    check_quillen,
    enumerate_model_structures,
    llp,
    make_model,
    rlp,
    search_functorial_factorization,
    trivial_model,
    validate_premodel,
)
from intmodel.adjunction import identity_adjunction

# frozen from tests/oracles.py (independent brute force over all class triples)
ORACLE_COUNTS = {"I1": 3, "chain3": 10, "chain4": 35, "B2": 23}


def _as_oracle(C):
    return oracles.poset(list(C.objects), [m for m in C.morphisms if m[0] != m[1]])


def _non_id(K):
    return frozenset(m for m in K if m[0] != m[1])


CATS = {"I1": lambda: chain(2, "I1"), "chain3": lambda: chain(3, "chain3"), "chain4": lambda: chain(4, "chain4"),
        "B2": B2}


@pytest.mark.parametrize("name", sorted(ORACLE_COUNTS))
def test_enumeration_matches_oracle(name):
    C = CATS[name]()
    found = enumerate_model_structures(C)
    got = {(_non_id(m.W), _non_id(m.Cof), _non_id(m.Fib)) for m in found}
    expected = set(oracles.model_structures(_as_oracle(C)))
    assert got == expected
    assert len(found) == ORACLE_COUNTS[name]


def test_oracle_counts_are_what_we_froze():
    for name, n in ORACLE_COUNTS.items():
        assert len(oracles.model_structures(_as_oracle(CATS[name]()))) == n


def test_unpruned_enumeration_agrees_on_i1():
    C = chain(2, "I1")
    a = [(m.W, m.Cof, m.Fib) for m in enumerate_model_structures(C)]
    b = [(m.W, m.Cof, m.Fib) for m in enumerate_model_structures(C, prune=False)]
    assert sorted(a, key=repr) == sorted(b, key=repr)


def test_i1_enumeration_is_fast():
    t = time.perf_counter()
    enumerate_model_structures(chain(2, "I1"))
    assert time.perf_counter() - t < 1.0


def test_ex44_classes():
    mc = ex44_model()
    f = ("0", "1")
    assert f in mc.W and f in mc.Cof and f not in mc.Fib
    assert check_model(mc).ok
    assert mc.cofibrant_objects() == ["0", "1"]
    assert mc.fibrant_objects() == ["1"]


def test_non_lattice_has_no_structures():
    V = build_poset([("a", "c"), ("b", "c")], name="V")
    assert enumerate_model_structures(V) == []
    assert not check_model(trivial_model(V)).ok


def test_two_out_of_three_violation_has_witness():
    C = chain(3)
    pm = PreModel.make(C, [("0", "1"), ("1", "2")], "all", "all", "bad")
    rep = check_model_axioms(pm)
    c = rep.get("classes: W is a subcategory")
    assert not c.passed


def test_lifting_failure_witness():
    C = chain(2)
    # everything is a weak equivalence, cofibration and fibration: (0,1) cannot lift against itself
    pm = PreModel.make(C, "all", "all", "all", "everything")
    rep = check_model_axioms(pm)
    c = rep.get("MC4 trivial cofibrations lift against fibrations")
    assert not c.passed and c.witness[0] == ("0", "1")


def test_make_model_raises_without_factorization():
    C = chain(2)
    pm = PreModel.make(C, (), (), (), "none")
    assert not validate_premodel(pm).ok or search_functorial_factorization(C, pm.Cof, pm.trivfib) is None
    with pytest.raises(ModelError):
        make_model(pm)


def test_factorization_constraints():
    C = chain(3)
    # every class is everything, so any middle object works
    loose = PreModel.make(C, "all", "all", "all")
    mc = make_model(loose, constraints1={("0", "2"): ("1", None, None)})
    assert mc.fact_cof_trivfib.middle[("0", "2")] == "1"
    # in the trivial structure the first factorization is forced through the target
    with pytest.raises(ModelError):
        make_model(PreModel.make(C, (), "all", "all"), constraints1={("0", "2"): ("1", None, None)})


def test_lifting_closures_on_ex44():
    mc = ex44_model()
    C = mc.base
    assert llp(C, mc.structure.trivfib) == mc.Cof
    assert rlp(C, mc.structure.trivcof) == mc.Fib


def test_identity_is_quillen_equivalence():
    mc = ex44_model()
    cert = check_quillen(identity_adjunction(mc.base), mc, mc, "equivalence")
    assert cert.is_adjunction_quillen and cert.is_equivalence


def test_non_thin_bicompleteness_failure():
    assert enumerate_model_structures(parallel_pair()) == []


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["I1", "chain3", "B2"]), st.data())
def test_enumerated_structures_pass_axioms_and_lifting_closure(name, data):
    from intmodel.corpus import structures

    mc = data.draw(st.sampled_from(structures(name)))
    assert check_model(mc).ok
    C = mc.base
    assert llp(C, mc.structure.trivfib) == mc.Cof
    assert rlp(C, mc.structure.trivcof) == mc.Fib
    assert llp(C, mc.Fib) == mc.structure.trivcof


def test_properness_of_small_structures():
    from intmodel.corpus import structures

    # every structure on a chain is proper: pullbacks and pushouts are meets and joins
    for mc in structures("chain3"):
        assert right_proper(mc) is None and left_proper(mc) is None
