from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intmodel.corpus import ex44_model, slice_functor, structures
from intmodel.fincat import FinFunctor, chain, discrete
from intmodel.integral import build_integral
from intmodel.modelfib import (
    FibrationCandidate,
    StraighteningError,
    candidate_from_integral,
    check_cartesian_transfer,
    check_model_fibration,
    check_square_transfer,
    check_wfs_composition,
    compose_candidates,
    is_pi_cofibrant,
    projection_adjoints,
    roundtrip_fibration,
    roundtrip_functor,
    straighten_modelfib,
    terminal_candidate,
)
from intmodel.modelstruct import PreModel


@pytest.fixture(scope="module")
def slice_candidate():
    return candidate_from_integral(build_integral(slice_functor(ex44_model())))


def test_integral_projection_is_model_fibration(slice_candidate):
    assert check_model_fibration(slice_candidate).ok
    assert check_cartesian_transfer(slice_candidate).ok
    assert check_square_transfer(slice_candidate).ok
    assert projection_adjoints(slice_candidate).ok


def test_model_category_over_point_is_model_fibration():
    for mc in structures("chain3"):
        fc = terminal_candidate(mc)
        assert check_model_fibration(fc).ok
        assert all(is_pi_cofibrant(fc, x) == mc.is_cofibrant(x) for x in mc.base.objects)


def test_removing_a_weak_equivalence_breaks_the_fibration(slice_candidate):
    fc = slice_candidate
    up = fc.upstairs
    victim = next(m for m in fc.N.morphisms if m[0] != m[1] and m in up.W)
    bad = FibrationCandidate(fc.pi, PreModel(fc.N, up.W - {victim}, up.Cof, up.Fib, "bad"), fc.downstairs, "bad")
    rep = check_model_fibration(bad)
    assert not rep.ok and rep.first_failure().witness is not None
    with pytest.raises(StraighteningError):
        straighten_modelfib(bad)


def test_non_bicartesian_projection_is_rejected():
    D, I1 = discrete(["a", "b"]), chain(2)
    pi = FinFunctor(D, I1, {"a": "0", "b": "1"}, {("a", "a"): ("0", "0"), ("b", "b"): ("1", "1")}, "p")
    allD, allI = frozenset(D.morphisms), frozenset(I1.morphisms)
    fc = FibrationCandidate(pi, PreModel(D, allD, allD, allD), PreModel(I1, allI, allI, frozenset(
        m for m in I1.morphisms if m[0] == m[1])))
    assert not check_model_fibration(fc).ok
    with pytest.raises(StraighteningError):
        straighten_modelfib(fc)


def test_roundtrips_on_slice():
    FM = slice_functor(ex44_model())
    I = build_integral(FM)
    assert roundtrip_functor(FM, I).ok
    assert roundtrip_fibration(candidate_from_integral(I)).ok


def test_composing_with_terminal_projection(slice_candidate):
    outer = terminal_candidate(slice_candidate.downstairs)
    comp = compose_candidates(slice_candidate, outer)
    assert comp.M.objects == ("*",)
    assert check_wfs_composition(slice_candidate, outer).ok
    with pytest.raises(ValueError):
        compose_candidates(outer, slice_candidate)


@settings(max_examples=12, deadline=None)
@given(st.data())
def test_straightening_recovers_slice_functors(data):
    mc = data.draw(st.sampled_from(structures("chain3")))
    FM = slice_functor(mc)
    I = build_integral(FM, "force", check_axioms=False)
    fc = candidate_from_integral(I)
    if check_model_fibration(fc).ok:
        assert roundtrip_fibration(fc).ok
