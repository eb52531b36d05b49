from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intmodel.adjunction import identity_adjunction
from intmodel.corpus import base_change_setups, example_4_4, ex44_model, fubini_instances, slice_functor, structures
from intmodel.integral import (
    IntegralError,
    QuillenTransformation,
    base_change,
    build_integral,
    check_modcat_functor,
    check_proper,
    check_relative,
    classify_integral,
    constant_modcat,
    default_cells,
    fubini,
    integrate_quillen_transformation,
    product_model,
    projection_quillen,
    verify_trivial_characterization,
    verify_weq_symmetry,
)
from intmodel.modelstruct import check_model


def _product_classes(Mm, Nm):
    """Classes of the product structure, keyed like integral morphisms ``(f, phi)``."""
    P = product_model(Mm, Nm)
    return {label: {m for m in P.base.morphisms if m in getattr(P, label)} for label in ("W", "Cof", "Fib")}


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["I1", "chain3"]), st.sampled_from(["I1", "chain3"]), st.data())
def test_constant_integral_is_product_structure(bname, fname, data):
    # with every fiber object cofibrant and identity adjunctions, the
    # integral classes are the product classes
    Mm = data.draw(st.sampled_from(structures(bname)))
    cands = [n for n in structures(fname) if all(n.is_cofibrant(x) for x in n.base.objects)]
    Nm = data.draw(st.sampled_from(cands))
    FM = constant_modcat(Mm, Nm)
    I = build_integral(FM, "force", check_axioms=False)
    expected = _product_classes(Mm, Nm)
    for label in ("W", "Cof", "Fib"):
        got = {(m[0], m[2]) for m in I.total.morphisms if m in getattr(I.classes, label)}
        assert got == expected[label], label


def test_slice_ex44_integral():
    FM = slice_functor(ex44_model())
    assert check_modcat_functor(FM).ok
    I = build_integral(FM)
    assert I.axioms.ok
    assert verify_trivial_characterization(FM, I).ok
    assert verify_weq_symmetry(FM, I).ok
    assert projection_quillen(I).ok
    flags = {m: classify_integral(FM, m) for m in I.total.morphisms}
    assert sum(f["weq"] for f in flags.values()) == len(I.total.morphisms)


def test_require_mode_rejects_non_relative(triv_i1):
    FM = example_4_4(triv_i1)
    assert check_proper(FM).ok and not check_relative(FM).ok
    with pytest.raises(IntegralError) as e:
        build_integral(FM)
    assert "relative" in str(e.value)
    I = build_integral(FM, "force")
    assert I.axioms.ok


def test_identity_transformation_integrates_to_equivalence():
    FM = slice_functor(ex44_model())
    comps = {A: identity_adjunction(FM.underlying.fiber[A]) for A in FM.base.objects}
    t = QuillenTransformation(FM, FM, comps, default_cells(FM, FM, comps))
    cert = integrate_quillen_transformation(t, mode="equivalence")
    assert cert.report.ok and cert.is_quillen and cert.is_equivalence


def test_broken_transformation_cells_are_reported():
    FM = slice_functor(ex44_model())
    comps = {A: identity_adjunction(FM.underlying.fiber[A]) for A in FM.base.objects}
    cells = default_cells(FM, FM, comps)
    f = ("0", "1")
    cells = {k: dict(v) for k, v in cells.items()}
    cells[f].pop(next(iter(cells[f])))
    cert = integrate_quillen_transformation(QuillenTransformation(FM, FM, comps, cells))
    assert not cert.is_quillen
    assert cert.report.first_failure().name == "cells are natural isomorphisms"


def test_base_change_setups_and_mutations():
    setups = base_change_setups()
    assert len(setups) >= 5
    for s in setups:
        c = base_change(s.source, s.target, s.adjunction, s.kind, s.family)
        assert c.predicted_equivalence and c.is_equivalence, s.name
        if s.mutated is not None:
            m = base_change(s.source, s.target, s.adjunction, s.kind, s.mutated)
            assert not m.is_equivalence and m.report.first_failure() is not None, s.name


def test_base_change_kind_validation():
    s = base_change_setups()[0]
    with pytest.raises(ValueError):
        base_change(s.source, s.target, s.adjunction, "middle", s.family)


def test_product_model_axioms():
    P = product_model(ex44_model(), ex44_model())
    assert check_model(P).ok


@pytest.mark.parametrize("idx", [0, 1, 4])
def test_fubini_instances(idx):
    name, FM, Mm, Nm = fubini_instances()[idx]
    r = fubini(FM, Mm, Nm)
    assert r.report.ok, r.report.summary()
    for side in ("first", "second"):
        assert len(r.iterated[side].total.objects) == len(r.product_structure.total.objects)
