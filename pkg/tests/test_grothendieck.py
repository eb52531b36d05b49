from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from intmodel.corpus import coslice_functor, ex44_model, slice_functor, structures
from intmodel.fincat import FinFunctor, build_poset, chain, discrete, product
from intmodel.grothendieck import (
    AdjCatFunctor,
    brute_relative_colimit,
    check_adjcat_functor,
    check_bicartesian,
    constant_adjcat,
    integrate_cat,
    is_cartesian,
    is_cocartesian,
    relative_colimit,
    roundtrip_integrate_straighten,
    roundtrip_straighten_integrate,
    total_isomorphism,
    validate_groth,
)
from intmodel.theorems import relative_colimit_oracle


def _count_total(F: AdjCatFunctor) -> tuple[int, int]:
    """Independent count: objects are pairs, morphisms are (f, phi: f_! x -> y)."""
    B = F.base
    n_obj = sum(len(F.fiber[A].objects) for A in B.objects)
    n_mor = 0
    for f in B.morphisms:
        A, Bo = B.src(f), B.tgt(f)
        push = F.on_arrow[f].left
        for x in F.fiber[A].objects:
            for y in F.fiber[Bo].objects:
                n_mor += len(F.fiber[Bo].hom(push.ob(x), y))
    return n_obj, n_mor


def test_slice_integral_sizes():
    FM = slice_functor(ex44_model())
    G = integrate_cat(FM.underlying)
    assert validate_groth(G).ok
    assert (len(G.total.objects), len(G.total.morphisms)) == _count_total(FM.underlying) == (3, 6)


def test_every_corpus_slice_total_has_the_counted_size():
    for mc in structures("chain3") + structures("B2"):
        for FM in (slice_functor(mc), coslice_functor(mc)):
            G = integrate_cat(FM.underlying)
            assert (len(G.total.objects), len(G.total.morphisms)) == _count_total(FM.underlying)


@st.composite
def small_posets(draw, max_n=3):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return build_poset([(f"p{i}", f"p{j}") for i, j in edges], [f"p{i}" for i in range(n)])


@settings(max_examples=25, deadline=None)
@given(small_posets(), small_posets())
def test_constant_integral_is_the_product(B, Fc):
    G = integrate_cat(constant_adjcat(B, Fc))
    assert validate_groth(G).ok
    P = product(B, Fc)
    assert len(G.total.objects) == len(P.objects) and len(G.total.morphisms) == len(P.morphisms)
    assert check_bicartesian(G.projection).ok
    assert roundtrip_integrate_straighten(G.functor).ok


def test_projection_is_bicartesian_and_lifts_are_classified():
    FM = slice_functor(ex44_model())
    G = integrate_cat(FM.underlying)
    p = G.projection
    assert check_bicartesian(p).ok
    # (0,1) lifted at the only object over 0 with identity second component is coCartesian
    lift = (("0", "1"), ("0", "0"), (("0", "0"), ("0", "1")))
    assert is_cocartesian(p, lift)
    # the fiber over 0 is a point, so every arrow over (0,1) is Cartesian
    assert is_cartesian(p, (("0", "1"), ("0", "0"), (("0", "1"), ("1", "1"))))
    # a non-invertible arrow over an identity is neither
    inner = (("1", "1"), ("0", "1"), (("0", "1"), ("1", "1")))
    assert not is_cocartesian(p, inner) and not is_cartesian(p, inner)


def test_non_fibration_is_rejected_with_witness():
    D = discrete(["a", "b"])
    I1 = chain(2)
    p = FinFunctor(D, I1, {"a": "0", "b": "1"}, {("a", "a"): ("0", "0"), ("b", "b"): ("1", "1")}, "p")
    rep = check_bicartesian(p)
    assert not rep.ok and rep.first_failure().witness is not None


def test_bad_coherence_cell_detected():
    F = slice_functor(ex44_model()).underlying
    comp = {k: dict(v) for k, v in F.comp_iso.items()}
    key = next(k for k, v in comp.items() if v)
    x = next(iter(comp[key]))
    comp[key].pop(x)
    bad = AdjCatFunctor(F.base, F.fiber, F.on_arrow, comp, F.id_iso, "bad")
    assert not check_adjcat_functor(bad).ok


def test_straighten_then_integrate_on_arrow_projection():
    from intmodel.fincat import arrow_category, arrow_functors

    C = chain(3)
    _, cod = arrow_functors(C, arrow_category(C))
    assert roundtrip_straighten_integrate(cod).ok


def test_total_isomorphism_detects_mismatch():
    A = integrate_cat(slice_functor(ex44_model()).underlying)
    B = integrate_cat(coslice_functor(ex44_model()).underlying)
    assert total_isomorphism(A.projection, A.projection) is not None
    assert total_isomorphism(A.projection, B.projection) is None


def test_relative_colimits_against_brute_force_on_small_totals():
    for mc in structures("chain3")[:4]:
        p = integrate_cat(slice_functor(mc).underlying).projection
        cases, fail = relative_colimit_oracle(p, 2)
        assert fail is None and cases > 0
        cases, fail = relative_colimit_oracle(p.op(), 2)
        assert fail is None and cases > 0


def test_relative_colimit_reports_missing_lift():
    D = discrete(["a", "b"])
    I1 = chain(2)
    p = FinFunctor(D, I1, {"a": "0", "b": "1"}, {("a", "a"): ("0", "0"), ("b", "b"): ("1", "1")}, "p")
    delta = FinFunctor(discrete(["j"]), D, {"j": "a"}, {("j", "j"): ("a", "a")})
    from intmodel.fincat import Cone

    r = relative_colimit(p, delta, Cone("1", (("j", ("0", "1")),)))
    assert not r.certified and r.witness[0] == "no coCartesian lift"
    assert brute_relative_colimit(p, delta, Cone("1", (("j", ("0", "1")),))) is None
