"""Relative weak factorization systems, relative model categories, model
fibrations, and straightening a model fibration back into a
model-category-valued functor."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .adjunction import find_adjoint
from .fincat import (
    Cone,
    FinCat,
    FinFunctor,
    Mor,
    Obj,
    bicompleteness,
    compose_functors,
    discrete,
    enumerate_cones,
    enumerate_retracts,
    lattice_report,
    opposite,
    point,
)
from .grothendieck import (
    brute_relative_colimit,
    check_bicartesian,
    compare_adjcat,
    fiber_category,
    fiber_renaming,
    integrate_cat,
    is_cartesian,
    is_cocartesian,
    relative_colimit,
    straighten_cat,
    total_isomorphism,
)
from .integral import IntegralStructure, ModCatFunctor, _pm, build_integral, check_proper, check_relative
from .modelstruct import ModelCat, ModelError, PreModel, make_model
from .report import Report, fmt


@dataclass
class FibrationCandidate:
    pi: FinFunctor
    upstairs: PreModel
    downstairs: PreModel | ModelCat
    name: str = field(default="", compare=False)

    @property
    def N(self) -> FinCat:
        return self.pi.source

    @property
    def M(self) -> FinCat:
        return self.pi.target

    @property
    def down(self) -> PreModel:
        return _pm(self.downstairs)


def candidate_from_integral(I: IntegralStructure) -> FibrationCandidate:
    return FibrationCandidate(I.groth.projection, I.classes, I.functor.base_model, f"π:{I.total.name}")


def terminal_candidate(pm: PreModel | ModelCat) -> FibrationCandidate:
    """``C -> pt``, with every class on the point being the identity."""
    pm = _pm(pm)
    P = point()
    pi = FinFunctor(pm.base, P, {x: "*" for x in pm.base.objects}, {m: P.id("*") for m in pm.base.morphisms}, "!")
    allp = frozenset(P.morphisms)
    return FibrationCandidate(pi, pm, PreModel(P, allp, allp, allp, "pt"), f"{pm.name}→pt")


def compose_candidates(inner: FibrationCandidate, outer: FibrationCandidate) -> FibrationCandidate:
    if inner.M != outer.N:
        raise ValueError("candidates are not composable")
    return FibrationCandidate(compose_functors(outer.pi, inner.pi), inner.upstairs, outer.downstairs,
                              f"{outer.name}∘{inner.name}")


def _ordered(C: FinCat, K) -> list:
    return [m for m in C.morphisms if m in K]


def _image_report(fc: FibrationCandidate, L_N, R_N, L_M, R_M) -> Report:
    rep = Report()
    w = next((m for m in _ordered(fc.N, L_N) if fc.pi.ar(m) not in L_M), None)
    rep.add("left class maps into the base left class", w is None, w)
    w = next((m for m in _ordered(fc.N, R_N) if fc.pi.ar(m) not in R_M), None)
    rep.add("right class maps into the base right class", w is None, w)
    return rep


def check_pi_wfs(fc: FibrationCandidate, pair_N: tuple, pair_M: tuple) -> Report:
    """Retract closure over the base, lifted factorizations, lifted lifts."""
    L_N, R_N = (frozenset(k) for k in pair_N)
    L_M, R_M = (frozenset(k) for k in pair_M)
    N, M, pi = fc.N, fc.M, fc.pi
    rep = Report(title="relative weak factorization system")
    rep.extend(_image_report(fc, L_N, R_N, L_M, R_M))
    if not rep.ok:
        return rep
    # (1) retracts
    w = None
    for K, KM, label in ((L_N, L_M, "left"), (R_N, R_M, "right")):
        for f in N.morphisms:
            if f in K or pi.ar(f) not in KM:
                continue
            r = enumerate_retracts(N, f, among=sorted(K, key=N.mor_index.get))
            if r:
                w = (label, f, r[0].g)
                break
        if w:
            break
    rep.add("retract closure over the base", w is None, w, "relative retract axiom")
    # (2) factorizations
    w = None
    over = {A: [x for x in N.objects if pi.ob(x) == A] for A in M.objects}
    for phi in N.morphisms:
        x, y = N.src(phi), N.tgt(phi)
        pphi = pi.ar(phi)
        for h in M.out_of(pi.ob(x)):
            if h not in L_M:
                continue
            for g in M.hom(M.tgt(h), pi.ob(y)):
                if g not in R_M or M.comp(g, h) != pphi:
                    continue
                found = False
                for z in over[M.tgt(h)]:
                    for eta in N.hom(x, z):
                        if eta not in L_N or pi.ar(eta) != h:
                            continue
                        for psi in N.hom(z, y):
                            if psi in R_N and pi.ar(psi) == g and N.comp(psi, eta) == phi:
                                found = True
                                break
                        if found:
                            break
                    if found:
                        break
                if not found:
                    w = (phi, h, g)
                    break
            if w:
                break
        if w:
            break
    rep.add("factorizations lift", w is None, w, "relative factorization axiom")
    # (3) lifts
    w = None
    R_list = _ordered(N, R_N)
    for psi in _ordered(N, L_N):
        x, y = N.src(psi), N.tgt(psi)
        for eta in R_list:
            z, wo = N.src(eta), N.tgt(eta)
            for a in N.hom(x, z):
                for b in N.hom(y, wo):
                    if N.comp(eta, a) != N.comp(b, psi):
                        continue
                    for u in M.hom(pi.ob(y), pi.ob(z)):
                        if M.comp(u, pi.ar(psi)) != pi.ar(a) or M.comp(pi.ar(eta), u) != pi.ar(b):
                            continue
                        ok = any(pi.ar(gm) == u and N.comp(gm, psi) == a and N.comp(eta, gm) == b
                                 for gm in N.hom(y, z))
                        if not ok:
                            w = (psi, eta, a, b, u)
                            break
                    if w:
                        break
                if w:
                    break
            if w:
                break
        if w:
            break
    rep.add("lifts lift", w is None, w, "relative lifting axiom")
    return rep


def _fiber_bicomplete(F: FinCat) -> bool:
    return (lattice_report(F) if F.is_thin else bicompleteness(F)).ok


def _discrete_diagrams(N: FinCat, bound: int):
    for k in range(bound + 1):
        for objs in itertools.combinations_with_replacement(N.objects, k):
            J = discrete([f"j{i}" for i in range(k)])
            yield FinFunctor(J, N, {f"j{i}": o for i, o in enumerate(objs)},
                             {J.id(f"j{i}"): N.id(o) for i, o in enumerate(objs)}, "δ")


def _base_cocones(pi: FinFunctor, delta: FinFunctor):
    M = pi.target
    pd = compose_functors(pi, delta)
    yield from enumerate_cones(opposite(M), pd.op())


def relative_bicompleteness(pi: FinFunctor, shape_bound: int = 2) -> Report:
    """Through fiber bicompleteness when ``pi`` is biCartesian (with spot
    checks of the constructed relative colimits), otherwise by searching
    discrete diagrams of at most ``shape_bound`` objects."""
    rep = Report(title="relative bicompleteness")
    bc = check_bicartesian(pi)
    N, M = pi.source, pi.target
    if bc.ok:
        bad = next((A for A in M.objects if not _fiber_bicomplete(fiber_category(pi, A))), None)
        rep.add("fibers are bicomplete", bad is None, bad, "bicomplete fibers")
        w = None
        for p in (pi, pi.op()):
            for delta in _discrete_diagrams(p.source, 1):
                for cone in _base_cocones(p, delta):
                    r = relative_colimit(p, delta, cone)
                    if not r.certified:
                        w = (fmt(delta.obj), cone.apex, r.witness)
                        break
                if w:
                    break
            if w:
                break
        rep.add("constructed relative (co)limits are initial", w is None, w, "relative colimit")
        return rep
    w = None
    for p, label in ((pi, "colimit"), (pi.op(), "limit")):
        for delta in _discrete_diagrams(p.source, shape_bound):
            for cone in _base_cocones(p, delta):
                if brute_relative_colimit(p, delta, cone) is None:
                    w = (label, tuple(delta.obj.values()), cone.apex)
                    break
            if w:
                break
        if w:
            break
    rep.add(f"relative (co)limits of shapes up to {shape_bound} objects", w is None, w, "bicomplete functor")
    return rep


def check_relative_model(fc: FibrationCandidate, shape_bound: int = 2) -> Report:
    N, M, pi = fc.N, fc.M, fc.pi
    up, down = fc.upstairs, fc.down
    rep = Report(title="relative model category")
    rep.extend(relative_bicompleteness(pi, shape_bound))
    w = None
    W = up.W
    for g, f in N.composable_pairs():
        gf = N.comp(g, f)
        trip = ((f, f in W), (g, g in W), (gf, gf in W))
        if sum(b for _, b in trip) == 2:
            third = next(m for m, b in trip if not b)
            if pi.ar(third) in down.W:
                w = (g, f)
                break
    rep.add("relative two-out-of-three", w is None, w, "relative 2-out-of-3")
    rep.extend(check_pi_wfs(fc, (up.trivcof, up.Fib), (down.trivcof, down.Fib)), "(trivcof, fib) ")
    rep.extend(check_pi_wfs(fc, (up.Cof, up.trivfib), (down.Cof, down.trivfib)), "(cof, trivfib) ")
    return rep


def fiber_initial(pi: FinFunctor, A: Obj) -> Obj | None:
    return fiber_category(pi, A).initial()


def fiber_terminal(pi: FinFunctor, A: Obj) -> Obj | None:
    return fiber_category(pi, A).terminal()


def _over_identity(pi: FinFunctor, x: Obj, y: Obj) -> Mor:
    idA = pi.target.id(pi.ob(x))
    return next(m for m in pi.source.hom(x, y) if pi.ar(m) == idA)


def is_pi_cofibrant(fc: FibrationCandidate, x: Obj) -> bool:
    e = fiber_initial(fc.pi, fc.pi.ob(x))
    return e is not None and _over_identity(fc.pi, e, x) in fc.upstairs.Cof


def is_pi_fibrant(fc: FibrationCandidate, x: Obj) -> bool:
    t = fiber_terminal(fc.pi, fc.pi.ob(x))
    return t is not None and _over_identity(fc.pi, x, t) in fc.upstairs.Fib


def check_model_fibration(fc: FibrationCandidate, shape_bound: int = 2) -> Report:
    rep = Report(title="model fibration")
    bc = check_bicartesian(fc.pi)
    rep.extend(bc)
    rep.extend(check_relative_model(fc, shape_bound))
    N, pi = fc.N, fc.pi
    W, WM = fc.upstairs.W, fc.down.W
    if bc.ok:
        w = next((f for f in N.morphisms if pi.ar(f) in WM and f not in W and is_cocartesian(pi, f)
                  and is_pi_cofibrant(fc, N.src(f))), None)
        rep.add("coCartesian lifts of weak equivalences at π-cofibrant sources", w is None, w,
                "model fibration (cofibrant)")
        w = next((f for f in N.morphisms if pi.ar(f) in WM and f not in W and is_cartesian(pi, f)
                  and is_pi_fibrant(fc, N.tgt(f))), None)
        rep.add("Cartesian lifts of weak equivalences at π-fibrant targets", w is None, w,
                "model fibration (fibrant)")
    return rep


# ---------------------------------------------------------------------------
# the lemmas on (co)Cartesian arrows


def _preserves(pi: FinFunctor, K, KM) -> bool:
    return all(pi.ar(m) in KM for m in K)


def check_cartesian_transfer(fc: FibrationCandidate) -> Report:
    """CoCartesian arrows over (trivial) cofibrations are (trivial)
    cofibrations when ``pi`` is right Quillen; dually for Cartesian arrows."""
    rep = Report(title="(co)Cartesian transfer")
    N, pi = fc.N, fc.pi
    up, down = fc.upstairs, fc.down
    if _preserves(pi, up.Fib, down.Fib) and _preserves(pi, up.trivfib, down.trivfib):
        w = None
        for f in N.morphisms:
            if not is_cocartesian(pi, f):
                continue
            pf = pi.ar(f)
            if (pf in down.Cof and f not in up.Cof) or (pf in down.trivcof and f not in up.trivcof):
                w = f
                break
        rep.add("coCartesian over cofibration", w is None, w, "coCartesian transfer")
    if _preserves(pi, up.Cof, down.Cof) and _preserves(pi, up.trivcof, down.trivcof):
        w = None
        for f in N.morphisms:
            if not is_cartesian(pi, f):
                continue
            pf = pi.ar(f)
            if (pf in down.Fib and f not in up.Fib) or (pf in down.trivfib and f not in up.trivfib):
                w = f
                break
        rep.add("Cartesian over fibration", w is None, w, "Cartesian transfer")
    return rep


def check_square_transfer(fc: FibrationCandidate) -> Report:
    """In a square ``phi'∘psi == eta∘phi`` with ``psi, eta`` coCartesian,
    ``phi`` a (trivial) cofibration and ``pi(phi')`` one downstairs, ``phi'``
    is one upstairs; dually with Cartesian arrows and fibrations."""
    rep = Report(title="square transfer")
    N, pi = fc.N, fc.pi
    up, down = fc.upstairs, fc.down
    coc = [m for m in N.morphisms if is_cocartesian(pi, m)]
    car = [m for m in N.morphisms if is_cartesian(pi, m)]
    w = None
    for K, KM in ((up.Cof, down.Cof), (up.trivcof, down.trivcof)):
        for phi in _ordered(N, K):
            x, x2 = N.src(phi), N.tgt(phi)
            for psi in (m for m in coc if N.src(m) == x):
                for eta in (m for m in coc if N.src(m) == x2):
                    for ph2 in N.hom(N.tgt(psi), N.tgt(eta)):
                        if N.comp(ph2, psi) == N.comp(eta, phi) and pi.ar(ph2) in KM and ph2 not in K:
                            w = (phi, psi, eta, ph2)
                            break
                    if w:
                        break
                if w:
                    break
            if w:
                break
        if w:
            break
    rep.add("coCartesian squares transfer cofibrations", w is None, w, "coCartesian square transfer")
    w = None
    for K, KM in ((up.Fib, down.Fib), (up.trivfib, down.trivfib)):
        for phi in _ordered(N, K):
            x, x2 = N.src(phi), N.tgt(phi)
            # psi: Y -> X and eta: Y' -> X' Cartesian, phi': Y -> Y'
            for psi in (m for m in car if N.tgt(m) == x):
                for eta in (m for m in car if N.tgt(m) == x2):
                    for ph2 in N.hom(N.src(psi), N.src(eta)):
                        if N.comp(eta, ph2) == N.comp(phi, psi) and pi.ar(ph2) in KM and ph2 not in K:
                            w = (phi, psi, eta, ph2)
                            break
                    if w:
                        break
                if w:
                    break
            if w:
                break
        if w:
            break
    rep.add("Cartesian squares transfer fibrations", w is None, w, "Cartesian square transfer")
    return rep


def projection_adjoints(fc: FibrationCandidate) -> Report:
    """``pi`` is left and right Quillen, with adjoints picking fiberwise initial
    and terminal objects."""
    rep = Report(title="projection adjoints")
    pi = fc.pi
    up, down = fc.upstairs, fc.down
    right = find_adjoint(pi, "right")
    left = find_adjoint(pi, "left")
    ok_r = right is not None and all(right.right.ob(A) == fiber_terminal(pi, A) for A in fc.M.objects)
    ok_l = left is not None and all(left.left.ob(A) == fiber_initial(pi, A) for A in fc.M.objects)
    rep.add("right adjoint picks fiberwise terminal objects", ok_r)
    rep.add("left adjoint picks fiberwise initial objects", ok_l)
    rep.add("left Quillen", _preserves(pi, up.Cof, down.Cof) and _preserves(pi, up.trivcof, down.trivcof))
    rep.add("right Quillen", _preserves(pi, up.Fib, down.Fib) and _preserves(pi, up.trivfib, down.trivfib))
    return rep


def check_wfs_composition(inner: FibrationCandidate, outer: FibrationCandidate) -> Report:
    """If both stages are relative weak factorization systems, so is the composite."""
    rep = Report(title="composite of relative weak factorization systems")
    comp = compose_candidates(inner, outer)
    a, b, c = inner.upstairs, inner.down, outer.down
    for label, pa, pb, pc in (("(trivcof, fib)", (a.trivcof, a.Fib), (b.trivcof, b.Fib), (c.trivcof, c.Fib)),
                              ("(cof, trivfib)", (a.Cof, a.trivfib), (b.Cof, b.trivfib), (c.Cof, c.trivfib))):
        r1 = check_pi_wfs(inner, pa, pb).ok
        r2 = check_pi_wfs(outer, pb, pc).ok
        r3 = check_pi_wfs(comp, pa, pc).ok
        rep.add(f"{label} composes", (not (r1 and r2)) or r3, (r1, r2, r3), "composition of relative systems")
    return rep


# ---------------------------------------------------------------------------
# straightening


class StraighteningError(ValueError):
    pass


def restricted_fiber_model(fc: FibrationCandidate, A: Obj) -> ModelCat:
    Fb = fiber_category(fc.pi, A)
    ms = frozenset(Fb.morphisms)
    up = fc.upstairs
    pm = PreModel(Fb, up.W & ms, up.Cof & ms, up.Fib & ms, f"{fc.N.name}|{fmt(A)}")
    return make_model(pm)


def straighten_modelfib(fc: FibrationCandidate, certified: bool = False) -> ModCatFunctor:
    """Fibers with the restricted classes, adjunctions from chosen lifts."""
    if not certified:
        rep = check_model_fibration(fc)
        if not rep.ok:
            c = rep.first_failure()
            raise StraighteningError(f"not a model fibration: {c.name} (witness {fmt(c.witness)})")
    U = straighten_cat(fc.pi, check=False, name=f"St({fc.name})")
    try:
        fibers = {A: restricted_fiber_model(fc, A) for A in fc.M.objects}
    except ModelError as e:
        raise StraighteningError(f"restricted fiber is not a model category: {e}") from e
    return ModCatFunctor(U, fc.downstairs, fibers, U.name)


def compare_modcat(FM: ModCatFunctor, GM: ModCatFunctor, renaming: dict) -> Report:
    """Compare underlying functors and fiber classes through a per-object renaming
    ``renaming[A] = (obj, mor)`` from ``FM``'s fibers to ``GM``'s."""
    rep = compare_adjcat(FM.underlying, GM.underlying, renaming)
    w = None
    for A in FM.base.objects:
        _, mor = renaming[A]
        a, b = FM.fiber(A), GM.fiber(A)
        for label in ("W", "Cof", "Fib"):
            Ka, Kb = getattr(a, label), getattr(b, label)
            bad = next((m for m in a.base.morphisms if (m in Ka) != (mor[m] in Kb)), None)
            if bad is not None:
                w = (A, label, bad)
                break
        if w:
            break
    rep.add("fiber classes agree", w is None, w)
    return rep


def roundtrip_functor(FM: ModCatFunctor, I: IntegralStructure | None = None) -> Report:
    """Straightening the integral recovers the functor."""
    I = I or build_integral(FM)
    fc = candidate_from_integral(I)
    S = straighten_modelfib(fc)
    rep = Report(title="straighten after integrate")
    rep.extend(compare_modcat(FM, S, fiber_renaming(I.groth)))
    rep.add("straightened functor is proper", check_proper(S).ok)
    rep.add("straightened functor is relative", check_relative(S).ok)
    return rep


def roundtrip_fibration(fc: FibrationCandidate) -> Report:
    """Integrating the straightening recovers the fibration with its classes."""
    rep = Report(title="integrate after straighten")
    S = straighten_modelfib(fc)
    J = build_integral(S, "force", check_axioms=False)
    iso = total_isomorphism(fc.pi, J.groth.projection)
    rep.add("totals isomorphic over the base", iso is not None)
    if iso is None:
        return rep
    if fc.N.is_thin:
        rep.add("isomorphism is the canonical one",
                all(iso["obj"][x] == (fc.pi.ob(x), x) for x in fc.N.objects))
    w = None
    for label in ("W", "Cof", "Fib"):
        K1, K2 = getattr(fc.upstairs, label), getattr(J.classes, label)
        bad = next((m for m in fc.N.morphisms if (m in K1) != (iso["mor"][m] in K2)), None)
        if bad is not None:
            w = (label, bad)
            break
    rep.add("classes agree", w is None, w)
    return rep
