"""Theorem-level reports over single functors and over the generated corpus.

Each function returns a :class:`Report` whose checks are in a fixed order, so
serialized reports are reproducible across runs.
"""

from __future__ import annotations

import itertools

from .corpus import (
    BaseChangeSetup,
    arrow_structures,
    base_change_setups,
    example_4_4,
    example_4_4_base_changes,
    fubini_instances,
    generate_corpus,
    slice_functor,
    slice_total_to_arrow,
)
from .fincat import FinFunctor, arrow_functors, discrete, opposite, compose_functors, enumerate_cones, validate_functor
from .grothendieck import brute_relative_colimit, relative_colimit
from .integral import (
    IntegralStructure,
    ModCatFunctor,
    base_change,
    build_integral,
    check_proper,
    check_relative,
    fubini,
    projection_quillen,
    verify_trivial_characterization,
    verify_weq_symmetry,
)
from .modelfib import (
    FibrationCandidate,
    candidate_from_integral,
    check_cartesian_transfer,
    check_model_fibration,
    check_square_transfer,
    projection_adjoints,
    roundtrip_fibration,
    roundtrip_functor,
)
from .modelstruct import ModelCat, check_model
from .report import Report, fmt

THEOREMS = ("integral", "invariance", "fubini", "correspondence", "example44", "slice")


def proper_relative(FM: ModCatFunctor, prefix: str = "") -> Report:
    rep = Report(title=f"proper and relative: {FM.name}")
    rep.extend(check_proper(FM), prefix)
    rep.extend(check_relative(FM), prefix)
    return rep


def integral_theorem(FM: ModCatFunctor, prefix: str = "", shape_bound: int | None = None) -> tuple[Report, IntegralStructure]:
    """Model axioms on the integral, the trivial-class characterization, the
    weak-equivalence symmetry and the projection's Quillen property."""
    rep = Report(title=f"integral model structure: {FM.name}")
    I = build_integral(FM, "force", check_axioms=False)
    rep.extend(check_model(I.as_model_cat(), shape_bound), prefix + "axioms: ")
    rep.extend(verify_trivial_characterization(FM, I), prefix + "characterization: ")
    rep.extend(verify_weq_symmetry(FM, I), prefix + "symmetry: ")
    rep.extend(projection_quillen(I), prefix + "projection: ")
    return rep, I


def correspondence(FM: ModCatFunctor, I: IntegralStructure | None = None, prefix: str = "",
                   shape_bound: int = 2) -> Report:
    """Both roundtrips between functors and model fibrations, plus the
    transfer lemmas for (co)Cartesian arrows."""
    I = I or build_integral(FM, "force", check_axioms=False)
    fc = candidate_from_integral(I)
    rep = Report(title=f"correspondence: {FM.name}")
    rep.extend(check_model_fibration(fc, shape_bound), prefix + "model fibration: ")
    rep.extend(roundtrip_functor(FM, I), prefix + "straighten∘integrate: ")
    rep.extend(roundtrip_fibration(fc), prefix + "integrate∘straighten: ")
    rep.extend(check_cartesian_transfer(fc), prefix + "cartesian transfer: ")
    rep.extend(check_square_transfer(fc), prefix + "square transfer: ")
    rep.extend(projection_adjoints(fc), prefix + "projection adjoints: ")
    return rep


def fibration_correspondence(fc: FibrationCandidate, prefix: str = "", shape_bound: int = 2) -> Report:
    rep = Report(title=f"correspondence: {fc.name}")
    mf = check_model_fibration(fc, shape_bound)
    rep.extend(mf, prefix + "model fibration: ")
    if mf.ok:
        rep.extend(roundtrip_fibration(fc), prefix + "integrate∘straighten: ")
        rep.extend(check_cartesian_transfer(fc), prefix + "cartesian transfer: ")
        rep.extend(check_square_transfer(fc), prefix + "square transfer: ")
    return rep


def invariance(setup: BaseChangeSetup, prefix: str = "") -> Report:
    """The base change is an equivalence; the mutated family (when given) is not."""
    rep = Report(title=f"base-change invariance: {setup.name}")
    c = base_change(setup.source, setup.target, setup.adjunction, setup.kind, setup.family)
    rep.extend(c.hypotheses, prefix + "hypotheses: ")
    first = c.report.first_failure()
    rep.add(prefix + "induced adjunction is a Quillen equivalence", c.is_equivalence,
            first and (first.name, first.witness))
    if setup.mutated is not None:
        m = base_change(setup.source, setup.target, setup.adjunction, setup.kind, setup.mutated)
        fail = m.report.first_failure()
        rep.add(prefix + "mutated family: equivalence lost with a witness",
                not m.is_equivalence and fail is not None,
                fail and (fail.name, fail.witness))
    return rep


def example44(fiber: ModelCat, prefix: str = "") -> Report:
    """The two-object example: axioms hold for any fiber; the collapse factor
    is always an equivalence and the include factor is one exactly when the
    functor is relative."""
    rep = Report(title=f"two-object example with fiber {fiber.name}")
    FM = example_4_4(fiber)
    rel = check_relative(FM).ok
    rep.add(prefix + "functor is proper", check_proper(FM).ok)
    rep.add(prefix + f"functor is relative: {'yes' if rel else 'no'}", True)
    I = build_integral(FM, "force", check_axioms=False)
    rep.extend(check_model(I.as_model_cat()), prefix + "axioms: ")
    for key, (F1, G1, bc, fam) in example_4_4_base_changes(fiber).items():
        c = base_change(F1, G1, bc, "left", fam)
        rep.add(prefix + f"{key}: Quillen adjunction", c.is_quillen)
        fail = c.report.first_failure()
        if key == "collapse":
            rep.add(prefix + "collapse: Quillen equivalence", c.is_equivalence, fail and (fail.name, fail.witness))
        else:
            verdict = "Quillen equivalence" if rel else "not a Quillen equivalence"
            rep.add(prefix + f"include: {verdict}", c.is_equivalence == rel,
                    fail and (fail.name, fail.witness))
    return rep


def slice_arrow(mc: ModelCat, prefix: str = "") -> Report:
    """The injective structure on the arrow category against the integral of
    the slice functor, and the codomain projection as a model fibration."""
    rep = Report(title=f"slice integral vs arrow category: {mc.name}")
    FM = slice_functor(mc)
    I = build_integral(FM, "force", check_axioms=False)
    inj = arrow_structures(mc).injective
    Phi = slice_total_to_arrow(I)
    vf = validate_functor(Phi)
    bij = (vf.ok and Phi.target == inj.base
           and len(set(Phi.obj.values())) == len(I.total.objects) == len(inj.base.objects)
           and len(set(Phi.mor.values())) == len(I.total.morphisms) == len(inj.base.morphisms))
    rep.add(prefix + "canonical map is an isomorphism of categories", bij,
            None if vf.ok else vf.first_failure().witness)
    if bij:
        for label in ("W", "Cof", "Fib"):
            K1, K2 = getattr(I.classes, label), getattr(inj, label)
            bad = next((m for m in I.total.morphisms if (m in K1) != (Phi.ar(m) in K2)), None)
            rep.add(prefix + f"{label} matches the injective structure", bad is None, bad)
    _, cod = arrow_functors(mc.base, inj.base)
    fc = FibrationCandidate(cod, inj.structure, mc, "cod")
    rep.extend(fibration_correspondence(fc), prefix + "cod: ")
    return rep


# ---------------------------------------------------------------------------
# relative colimits against brute force


def _discrete(N, k: int):
    for objs in itertools.combinations_with_replacement(N.objects, k):
        J = discrete([f"j{i}" for i in range(k)])
        yield FinFunctor(J, N, {f"j{i}": o for i, o in enumerate(objs)},
                         {J.id(f"j{i}"): N.id(o) for i, o in enumerate(objs)}, "δ")


def relative_colimit_oracle(p: FinFunctor, shape_bound: int = 2) -> tuple[int, tuple | None]:
    """Every discrete diagram of at most ``shape_bound`` objects and every base
    cocone: the constructed relative colimit is certified initial and agrees
    with brute-force search up to the apex. Returns (cases, first failure)."""
    M = p.target
    n = 0
    for k in range(shape_bound + 1):
        for delta in _discrete(p.source, k):
            pd = compose_functors(p, delta)
            for cone in enumerate_cones(opposite(M), pd.op()):
                n += 1
                r = relative_colimit(p, delta, cone)
                brute = brute_relative_colimit(p, delta, cone)
                if brute is None or not r.certified or r.cocone.apex != brute.apex:
                    return n, (fmt(delta.obj), cone.apex, r.witness)
    return n, None


# ---------------------------------------------------------------------------
# corpus-wide runs


def corpus_instances():
    return generate_corpus()


def corpus_report(theorem: str, shape_bound: int | None = None) -> Report:
    """Run one theorem over its default instances."""
    rep = Report(title=f"{theorem} over the corpus")
    if theorem == "all":
        for th in THEOREMS:
            rep.extend(corpus_report(th, shape_bound), f"{th}: ")
        return rep
    sb = 2 if shape_bound is None else shape_bound
    if theorem == "integral":
        for inst in corpus_instances():
            r, _ = integral_theorem(inst.functor, f"{inst.name}: ", shape_bound)
            _collapse(rep, r, inst.name)
    elif theorem == "correspondence":
        for inst in corpus_instances():
            _collapse(rep, correspondence(inst.functor, None, f"{inst.name}: ", sb), inst.name)
    elif theorem == "invariance":
        for s in base_change_setups():
            rep.extend(invariance(s, f"{s.name}: "))
    elif theorem == "fubini":
        for name, FM, Mm, Nm in fubini_instances():
            rep.extend(fubini(FM, Mm, Nm).report, f"{name}: ")
    elif theorem == "example44":
        from .corpus import ex44_model, I1
        from .modelstruct import trivial_model

        rep.extend(example44(ex44_model(), "ex44: "))
        rep.extend(example44(trivial_model(I1(), "triv(I1)"), "triv(I1): "))
    elif theorem == "slice":
        from .corpus import ex44_model

        rep.extend(slice_arrow(ex44_model(), "ex44: "))
    else:
        raise ValueError(f"unknown theorem {theorem}")
    return rep


def _collapse(into: Report, r: Report, label: str) -> None:
    """One check per instance; the first failing sub-check is the witness."""
    first = r.first_failure()
    into.add(f"{label}: {len(r)} checks", r.ok, first and (first.name, first.witness))
