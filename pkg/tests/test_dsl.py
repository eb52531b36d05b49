from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intmodel.corpus import coslice_functor, ex44_model, slice_functor, structures
from intmodel.dsl import DSLError, emit_object, emit_workspace, parse_spec, show_id, tokenize
from intmodel.fincat import chain
from intmodel.integral import build_integral
from intmodel.modelstruct import ModelCat, PreModel, check_model


def test_poset_example():
    ws = parse_spec("poset I1 { order: 0 < 1 }")
    C = ws.get("I1", "category")
    assert C.objects == ("0", "1") and C.hom("0", "1")


def test_model_example_loads_and_passes():
    ws = parse_spec("poset I1 { order: 0 < 1 }\nmodel ex44 on I1 { weq: all  cof: all  fib: none }")
    mc = ws.get("ex44", "model")
    assert isinstance(mc, ModelCat) and check_model(mc).ok
    assert (mc.W, mc.Cof, mc.Fib) == (ex44_model().W, ex44_model().Cof, ex44_model().Fib)


def test_compose_with_undeclared_arrow_points_at_its_line():
    text = "category C {\n  objects: a b\n  arrow f: a -> b\n  compose h . f = f\n}\n"
    with pytest.raises(DSLError) as e:
        parse_spec(text)
    assert e.value.line == 4 and "h" in e.value.message


def test_unresolved_reference():
    with pytest.raises(DSLError) as e:
        parse_spec("model M on Q { weq: all cof: all fib: all }")
    assert e.value.line == 1 and "Q" in e.value.message


def test_poset_cycle_is_a_parse_error():
    with pytest.raises(DSLError):
        parse_spec("poset P { order: a < b, b < a }")


def test_comments_and_quoted_identifiers():
    text = 'poset P { # trailing comment\n  order: "x y" < z#1\n}\n'
    C = parse_spec(text).get("P")
    assert set(C.objects) == {"x y", "z#1"}
    toks = [t.value for t in tokenize("a#b # gone")]
    assert "a#b" in toks and "gone" not in toks


def test_show_id_inverts_the_identifier_grammar():
    assert show_id(("0", "1")) == "(0, 1)"
    assert show_id(("a",)) == "(a,)"
    assert show_id("all").startswith('"')
    for x in ["plain", "with space", ("a", ("b", "c")), ("x",), "order", "all", "via"]:
        ws = parse_spec(f"poset C {{ objects: {show_id(x)} }}")
        assert ws.get("C").objects == (x,)


def test_unsatisfiable_classes_fall_back_to_premodel():
    # no functorial factorization exists when no arrow is a cofibration
    ws = parse_spec("poset I1 { order: 0 < 1 }\nmodel M on I1 { weq: all  cof: none  fib: none }")
    assert ws.kind("M") == "premodel" and isinstance(ws.get("M"), PreModel)


def test_given_factorization_that_fails_is_an_error():
    with pytest.raises(DSLError):
        parse_spec("poset I1 { order: 0 < 1 }\nmodel M on I1 { weq: all  cof: all  fib: none  factor1 (0, 1) = 0 }")


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["I1", "chain3", "B2"]), st.data())
def test_model_emit_parse_roundtrip(name, data):
    mc = data.draw(st.sampled_from(structures(name)))
    ws = parse_spec(emit_object("model", mc, "M"))
    back = ws.get("M")
    assert back.base == mc.base
    assert (back.W, back.Cof, back.Fib) == (mc.W, mc.Cof, mc.Fib)
    assert back.fact_cof_trivfib.middle == mc.fact_cof_trivfib.middle


@pytest.mark.parametrize("make", [slice_functor, coslice_functor])
def test_modcat_functor_roundtrip(make):
    FM = make(ex44_model())
    back = parse_spec(emit_object("modcat-functor", FM, "F")).get("F")
    assert back.underlying.fiber == FM.underlying.fiber
    assert back.underlying.comp_iso == FM.underlying.comp_iso


def test_workspace_roundtrip_is_a_fixed_point():
    text = open("workspaces/ex44.fcat", encoding="utf-8").read()
    once = emit_workspace(parse_spec(text))
    assert emit_workspace(parse_spec(once)) == once


def test_emitted_integral_reparses_with_equal_classes():
    I = build_integral(slice_functor(ex44_model()))
    ws = parse_spec(emit_object("integral", I, "T"))
    M = ws.get("T")
    assert M.base == I.total
    assert (M.W, M.Cof, M.Fib) == (I.classes.W, I.classes.Cof, I.classes.Fib)


def test_derived_forms():
    ws = parse_spec("poset I1 { order: 0 < 1 }\ncategory A = arrow(I1)\ncategory P = product(I1, I1)")
    assert len(ws.get("A").objects) == 3 and len(ws.get("P").objects) == 4
    assert ws.get("P").is_thin
    assert chain(2).objects == ws.get("I1").objects
