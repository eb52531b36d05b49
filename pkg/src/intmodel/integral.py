"""The integral model structure on the Grothendieck construction of a
model-category-valued pseudo-functor, with its supporting checks, base change
and the Fubini comparison."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .adjunction import Adjunction, check_adjunction, from_counit, identity_adjunction
from .fincat import (
    CategoryError,
    FinCat,
    FinFunctor,
    Mor,
    Obj,
    extend_to_functor,
    find_natural_iso,
    compose_functors,
    product,
    validate_functor,
)
from .grothendieck import (
    AdjCatFunctor,
    GrothCat,
    check_adjcat_functor,
    integrate_cat,
)
from .modelstruct import (
    FunctorialFactorization,
    ModelCat,
    PreModel,
    QuillenAdjunctionCert,
    check_model,
    check_model_axioms,
    check_quillen,
    complete_middle_map,
    replacement,
)
from .report import Report, fmt


class IntegralError(ValueError):
    pass


def _pm(m: ModelCat | PreModel) -> PreModel:
    return m.structure if isinstance(m, ModelCat) else m


@dataclass
class ModCatFunctor:
    underlying: AdjCatFunctor
    base_model: ModelCat | PreModel
    fiber_models: dict
    name: str = field(default="", compare=False)

    @property
    def base(self) -> FinCat:
        return self.underlying.base

    def fiber(self, A: Obj) -> ModelCat:
        return self.fiber_models[A]

    def adj(self, f: Mor) -> Adjunction:
        return self.underlying.on_arrow[f]

    def __repr__(self) -> str:
        return f"ModCatFunctor({self.name or '?'} over {self.base.name})"


def check_modcat_functor(FM: ModCatFunctor) -> Report:
    rep = Report(title=f"model-category-valued functor {FM.name}")
    rep.extend(check_adjcat_functor(FM.underlying))
    if not rep.ok:
        return rep
    B = FM.base
    rep.add("base model lives on the base", _pm(FM.base_model).base == B)
    w = next((A for A in B.objects if FM.fiber(A).base != FM.underlying.fiber[A]), None)
    rep.add("fiber models live on the fibers", w is None, w)
    if w is not None:
        return rep
    w = None
    for f in B.morphisms:
        cert = check_quillen(FM.adj(f), FM.fiber(B.src(f)), FM.fiber(B.tgt(f)))
        if not cert.is_adjunction_quillen:
            w = (f, cert.report.first_failure().witness)
            break
    rep.add("every arrow gives a Quillen adjunction", w is None, w)
    return rep


def constant_modcat(base_model: ModelCat | PreModel, fiber: ModelCat, name: str = "") -> ModCatFunctor:
    from .grothendieck import constant_adjcat

    B = _pm(base_model).base
    F = constant_adjcat(B, fiber.base, name)
    return ModCatFunctor(F, base_model, {A: fiber for A in B.objects}, name or f"const({fiber.name})")


# ---------------------------------------------------------------------------
# classification


def _cof_repl(FM: ModCatFunctor, A: Obj, x: Obj) -> Mor:
    return replacement(FM.fiber(A), x, "cofibrant")[1]


def weq_composite(FM: ModCatFunctor, m: tuple) -> Mor:
    """``f_!(X^cof) -> f_! X -> Y`` for ``m = (f, X, phi)``."""
    f, x, phi = m
    B = FM.base
    q = _cof_repl(FM, B.src(f), x)
    return FM.underlying.fiber[B.tgt(f)].comp(phi, FM.adj(f).left.ar(q))


def adjoint_map(FM: ModCatFunctor, m: tuple) -> Mor:
    """``phi^ad = f^*(phi)∘unit: X -> f^* Y``."""
    f, x, phi = m
    return FM.adj(f).transpose(phi, x)


def classify_integral(FM: ModCatFunctor, m: tuple) -> dict:
    f, x, phi = m
    B = FM.base
    bm = _pm(FM.base_model)
    FA, FB = FM.fiber(B.src(f)), FM.fiber(B.tgt(f))
    return {
        "weq": f in bm.W and weq_composite(FM, m) in FB.W,
        "fib": f in bm.Fib and adjoint_map(FM, m) in FA.Fib,
        "cof": f in bm.Cof and phi in FB.Cof,
    }


def integral_classes(FM: ModCatFunctor, G: GrothCat, name: str = "") -> PreModel:
    W, Cof, Fib = set(), set(), set()
    for m in G.total.morphisms:
        fl = classify_integral(FM, m)
        if fl["weq"]:
            W.add(m)
        if fl["cof"]:
            Cof.add(m)
        if fl["fib"]:
            Fib.add(m)
    return PreModel(G.total, frozenset(W), frozenset(Cof), frozenset(Fib), name)


# ---------------------------------------------------------------------------
# relative and proper


def check_relative(FM: ModCatFunctor) -> Report:
    rep = Report(title="relative")
    B = FM.base
    w = None
    for f in B.morphisms:
        if f not in _pm(FM.base_model).W:
            continue
        cert = check_quillen(FM.adj(f), FM.fiber(B.src(f)), FM.fiber(B.tgt(f)), "equivalence")
        if not cert.is_equivalence:
            c = cert.report.first_failure()
            w = (f, c.name, c.witness)
            break
    rep.add("weak equivalences give Quillen equivalences", w is None, w, "relative functor")
    return rep


def check_proper(FM: ModCatFunctor) -> Report:
    """Left: trivial cofibrations ``f`` have ``f_!`` preserving weak equivalences.
    Right: trivial fibrations ``f: A -> B`` have ``f^*`` carrying weak
    equivalences of ``F(B)`` into those of ``F(A)``."""
    rep = Report(title="proper")
    B = FM.base
    bm = _pm(FM.base_model)
    w = None
    for f in B.morphisms:
        if f not in bm.trivcof:
            continue
        FA, FB = FM.fiber(B.src(f)), FM.fiber(B.tgt(f))
        L = FM.adj(f).left
        bad = next((a for a in FA.base.morphisms if a in FA.W and L.ar(a) not in FB.W), None)
        if bad is not None:
            w = (f, bad)
            break
    rep.add("left proper", w is None, w, "left proper functor")
    w = None
    for f in B.morphisms:
        if f not in bm.trivfib:
            continue
        FA, FB = FM.fiber(B.src(f)), FM.fiber(B.tgt(f))
        R = FM.adj(f).right
        bad = next((b for b in FB.base.morphisms if b in FB.W and R.ar(b) not in FA.W), None)
        if bad is not None:
            w = (f, bad)
            break
    rep.add("right proper", w is None, w, "right proper functor")
    return rep


def is_proper_relative(FM: ModCatFunctor) -> bool:
    return check_proper(FM).ok and check_relative(FM).ok


# ---------------------------------------------------------------------------
# the integral structure


@dataclass
class IntegralStructure:
    groth: GrothCat
    classes: PreModel
    fact_cof_trivfib: FunctorialFactorization
    fact_trivcof_fib: FunctorialFactorization
    functor: ModCatFunctor
    axioms: Report = field(default_factory=Report)

    @property
    def total(self) -> FinCat:
        return self.groth.total

    def as_model_cat(self) -> ModelCat:
        return ModelCat(self.classes, self.fact_cof_trivfib, self.fact_trivcof_fib, self.classes.name)


def _base_fact(FM: ModCatFunctor, which: str) -> FunctorialFactorization:
    bm = FM.base_model
    if not isinstance(bm, ModelCat):
        raise IntegralError("the base needs stored factorizations")
    return bm.fact_cof_trivfib if which == "cof" else bm.fact_trivcof_fib


def integral_factorization(FM: ModCatFunctor, G: GrothCat, which: str) -> FunctorialFactorization:
    """Factor ``f`` in the base as ``f''∘f'``, factor the transpose
    ``psi: f'_! X -> f''^* Y`` in the middle fiber and transpose back."""
    F = FM.underlying
    B = FM.base
    bf = _base_fact(FM, which)
    middle, first, second = {}, {}, {}
    for m in G.total.morphisms:
        f, x, phi = m
        mid, f1, f2 = bf.middle[f], bf.first[f], bf.second[f]
        FB = F.fiber[B.tgt(f)]
        Cc = F.fiber[mid]
        c = F.comp_iso[(f2, f1)][x]
        phi_split = FB.comp(phi, FB.inverse(c))  # f''_! f'_! X -> Y
        a2 = F.on_arrow[f2]
        y1 = F.push(f1).ob(x)
        psi = a2.transpose(phi_split, y1)
        ff = FM.fiber(mid)
        fact = ff.fact_cof_trivfib if which == "cof" else ff.fact_trivcof_fib
        z, phi1, psi1 = fact.middle[psi], fact.first[psi], fact.second[psi]
        phi2 = a2.untranspose(psi1, G.total.tgt(m)[1])
        middle[m] = (mid, z)
        first[m] = (f1, x, phi1)
        second[m] = (f2, z, phi2)
        if G.total.comp(second[m], first[m]) != m:
            raise IntegralError(f"constructed factorization does not compose back to {fmt(m)}")
    mm = complete_middle_map(G.total, middle, first, second)
    if mm is None:
        raise IntegralError("no functorial middle map for the constructed factorization")
    return FunctorialFactorization(middle, first, second, mm)


def build_integral(FM: ModCatFunctor, mode: str = "require", name: str = "",
                   check_axioms: bool = True) -> IntegralStructure:
    """Integral structure on the total. ``mode="require"`` insists on a proper
    relative functor; ``mode="force"`` builds anyway and reports the axioms."""
    if mode not in ("require", "force"):
        raise ValueError("mode must be 'require' or 'force'")
    if mode == "require":
        pr = Report()
        pr.extend(check_proper(FM))
        pr.extend(check_relative(FM))
        if not pr.ok:
            c = pr.first_failure()
            raise IntegralError(f"functor is not proper and relative: {c.name} (witness {fmt(c.witness)})")
    G = integrate_cat(FM.underlying, name)
    classes = integral_classes(FM, G, name or f"∫{FM.name}")
    f1 = integral_factorization(FM, G, "cof")
    f2 = integral_factorization(FM, G, "trivcof")
    I = IntegralStructure(G, classes, f1, f2, FM)
    if check_axioms:
        I.axioms = check_model(I.as_model_cat())
    return I


def verify_trivial_characterization(FM: ModCatFunctor, I: IntegralStructure) -> Report:
    rep = Report(title="trivial (co)fibrations")
    B = FM.base
    bm = _pm(FM.base_model)
    w1 = w2 = None
    for m in I.total.morphisms:
        f, x, phi = m
        FA, FB = FM.fiber(B.src(f)), FM.fiber(B.tgt(f))
        lhs = m in I.classes.trivcof
        rhs = f in bm.trivcof and phi in FB.structure.trivcof
        if lhs != rhs and w1 is None:
            w1 = (m, lhs, rhs)
        lhs = m in I.classes.trivfib
        rhs = f in bm.trivfib and adjoint_map(FM, m) in FA.structure.trivfib
        if lhs != rhs and w2 is None:
            w2 = (m, lhs, rhs)
    rep.add("trivial cofibrations are fiberwise", w1 is None, w1, "trivial cofibration characterization")
    rep.add("trivial fibrations are fiberwise", w2 is None, w2, "trivial fibration characterization")
    return rep


def symmetric_weq(FM: ModCatFunctor, m: tuple) -> bool:
    """``f`` in W and ``X -> f^* Y -> f^*(Y^fib)`` in W."""
    f, x, phi = m
    B = FM.base
    Bo = B.tgt(f)
    y = FM.underlying.fiber[Bo].tgt(phi)
    _, j = replacement(FM.fiber(Bo), y, "fibrant")
    FA = FM.fiber(B.src(f))
    comp = FA.base.comp(FM.adj(f).right.ar(j), adjoint_map(FM, m))
    return f in _pm(FM.base_model).W and comp in FA.W


def verify_weq_symmetry(FM: ModCatFunctor, I: IntegralStructure) -> Report:
    rep = Report(title="weak equivalence symmetry")
    w = None
    for m in I.total.morphisms:
        a, b = m in I.classes.W, symmetric_weq(FM, m)
        if a != b:
            w = (m, a, b)
            break
    rep.add("fibrant-replacement description agrees", w is None, w, "symmetric weak equivalences")
    return rep


def projection_quillen(I: IntegralStructure) -> Report:
    """The projection to the base is left and right Quillen."""
    from .adjunction import find_adjoint

    rep = Report(title="projection")
    FM = I.functor
    bm = FM.base_model
    if not isinstance(bm, ModelCat):
        rep.fail("base is a model category")
        return rep
    p = I.groth.projection
    mc = I.as_model_cat()
    right = find_adjoint(p, "right")
    left = find_adjoint(p, "left")
    rep.add("projection has a right adjoint", right is not None)
    rep.add("projection has a left adjoint", left is not None)
    if right is not None:
        rep.add("projection is left Quillen", check_quillen(right, mc, bm).is_adjunction_quillen)
    if left is not None:
        rep.add("projection is right Quillen", check_quillen(left, bm, mc).is_adjunction_quillen)
    return rep


# ---------------------------------------------------------------------------
# Quillen transformations


@dataclass
class QuillenTransformation:
    """Per-object adjunctions ``sigma_A ⊣ tau_A: F(A) -> G(A)`` with cells
    ``cells[f][X]: g_!(sigma_A X) -> sigma_B(f_! X)`` (``g_!`` from ``G``)."""

    source: ModCatFunctor
    target: ModCatFunctor
    components: dict
    cells: dict


def default_cells(FM: ModCatFunctor, GM: ModCatFunctor, components: Mapping) -> dict:
    """Identity cells where the square commutes strictly, searched isos otherwise."""
    B = FM.base
    cells = {}
    for f in B.morphisms:
        A, Bo = B.src(f), B.tgt(f)
        lhs = compose_functors(GM.adj(f).left, components[A].left)
        rhs = compose_functors(components[Bo].left, FM.adj(f).left)
        if lhs.obj == rhs.obj and lhs.mor == rhs.mor:
            GB = GM.underlying.fiber[Bo]
            cells[f] = {x: GB.id(lhs.ob(x)) for x in FM.underlying.fiber[A].objects}
        else:
            iso = find_natural_iso(lhs, rhs)
            if iso is None:
                raise IntegralError(f"family is not pseudo-natural at {fmt(f)}")
            cells[f] = iso.components
    return cells


def check_quillen_transformation(t: QuillenTransformation) -> Report:
    FM, GM = t.source, t.target
    B = FM.base
    F, G = FM.underlying, GM.underlying
    rep = Report(title="Quillen transformation")
    w = None
    for A in B.objects:
        a = t.components[A]
        if a.C != F.fiber[A] or a.D != G.fiber[A] or not check_adjunction(a).ok:
            w = ("not an adjunction", A)
            break
        if not check_quillen(a, FM.fiber(A), GM.fiber(A)).is_adjunction_quillen:
            w = ("not Quillen", A)
            break
    rep.add("components are Quillen adjunctions", w is None, w)
    if w:
        return rep
    w = None
    for f in B.morphisms:
        A, Bo = B.src(f), B.tgt(f)
        GB = G.fiber[Bo]
        cell = t.cells[f]
        sA, sB = t.components[A].left, t.components[Bo].left
        for x in F.fiber[A].objects:
            m = cell.get(x)
            if m is None or GB.src(m) != G.push(f).ob(sA.ob(x)) or GB.tgt(m) != sB.ob(F.push(f).ob(x)) \
                    or not GB.is_iso(m):
                w = ("cell", f, x)
                break
        for a in F.fiber[A].morphisms:
            if w:
                break
            x, y = F.fiber[A].src(a), F.fiber[A].tgt(a)
            if GB.comp(cell[y], G.push(f).ar(sA.ar(a))) != GB.comp(sB.ar(F.push(f).ar(a)), cell[x]):
                w = ("cell not natural", f, a)
        if w:
            break
    rep.add("cells are natural isomorphisms", w is None, w)
    if w:
        return rep
    w = None
    for g, f in B.composable_pairs():
        A, Cc = B.src(f), B.tgt(g)
        GC = G.fiber[Cc]
        gf = B.comp(g, f)
        for x in F.fiber[A].objects:
            lhs = GC.comp(t.components[Cc].left.ar(F.comp_iso[(g, f)][x]), t.cells[gf][x])
            rhs = GC.chain(t.cells[g][F.push(f).ob(x)], G.push(g).ar(t.cells[f][x]),
                           G.comp_iso[(g, f)][t.components[A].left.ob(x)])
            if lhs != rhs:
                w = (g, f, x)
                break
        if w:
            break
    for A in B.objects:
        if w:
            break
        GA = G.fiber[A]
        for x in F.fiber[A].objects:
            sx = t.components[A].left.ob(x)
            if GA.comp(t.cells[B.id(A)][x], G.id_iso[A][sx]) != t.components[A].left.ar(F.id_iso[A][x]):
                w = ("unit", A, x)
                break
    rep.add("cells are coherent", w is None, w)
    return rep


def induced_left(t: QuillenTransformation, GF: GrothCat, GG: GrothCat) -> FinFunctor:
    """``sigma_*(A, X) = (A, sigma_A X)``, ``(f, X, phi) -> (f, sigma X, sigma(phi)∘cell)``."""
    B = t.source.base
    obj = {(A, x): (A, t.components[A].left.ob(x)) for (A, x) in GF.total.objects}
    mor = {}
    for m in GF.total.morphisms:
        f, x, phi = m
        A, Bo = B.src(f), B.tgt(f)
        GB = GG.functor.fiber[Bo]
        mor[m] = (f, t.components[A].left.ob(x), GB.comp(t.components[Bo].left.ar(phi), t.cells[f][x]))
    return FinFunctor(GF.total, GG.total, obj, mor, "σ_*")


def induced_right(t: QuillenTransformation, GF: GrothCat, GG: GrothCat) -> FinFunctor:
    """``tau_*(A, Y) = (A, tau_A Y)``; a morphism ``(f, Y, psi)`` goes to
    ``(f, tau Y, chi)`` with ``chi`` the transpose of
    ``psi∘g_!(counit)∘cell^{-1}``."""
    B = t.source.base
    F, G = t.source.underlying, t.target.underlying
    obj = {(A, y): (A, t.components[A].right.ob(y)) for (A, y) in GG.total.objects}
    mor = {}
    for m in GG.total.morphisms:
        f, y, psi = m
        A, Bo = B.src(f), B.tgt(f)
        GB = G.fiber[Bo]
        ty = t.components[A].right.ob(y)
        fx = F.push(f).ob(ty)
        inv = GB.inverse(t.cells[f][ty])
        k = GB.chain(psi, G.push(f).ar(t.components[A].counit[y]), inv)
        chi = t.components[Bo].transpose(k, fx)
        mor[m] = (f, ty, chi)
    return FinFunctor(GG.total, GF.total, obj, mor, "τ_*")


@dataclass
class TotalAdjunctionCert:
    adjunction: Adjunction | None
    cert: QuillenAdjunctionCert | None
    report: Report

    @property
    def is_quillen(self) -> bool:
        return self.cert is not None and self.cert.is_adjunction_quillen

    @property
    def is_equivalence(self) -> bool:
        return self.cert is not None and bool(self.cert.is_equivalence)


def integrate_quillen_transformation(t: QuillenTransformation, IF: IntegralStructure | None = None,
                                     IG: IntegralStructure | None = None, mode: str = "adjunction") -> TotalAdjunctionCert:
    rep = Report(title="induced adjunction on totals")
    rep.extend(check_quillen_transformation(t))
    if not rep.ok:
        return TotalAdjunctionCert(None, None, rep)
    IF = IF or build_integral(t.source, "force")
    IG = IG or build_integral(t.target, "force")
    L = induced_left(t, IF.groth, IG.groth)
    R = induced_right(t, IF.groth, IG.groth)
    rep.extend(validate_functor(L), "left: ")
    rep.extend(validate_functor(R), "right: ")
    if not rep.ok:
        return TotalAdjunctionCert(None, None, rep)
    B = t.source.base
    G = t.target.underlying
    counit = {}
    for (A, y) in IG.total.objects:
        GA = G.fiber[A]
        z = t.components[A].left.ob(t.components[A].right.ob(y))
        counit[(A, y)] = (B.id(A), z, GA.comp(t.components[A].counit[y], GA.inverse(G.id_iso[A][z])))
    try:
        adj = from_counit(L, R.obj, counit, "σ_*⊣τ_*")
    except CategoryError as e:
        rep.fail("counit is universal", str(e))
        return TotalAdjunctionCert(None, None, rep)
    rep.add("right functor matches the explicit formula", adj.right.mor == R.mor)
    rep.extend(check_adjunction(adj), "adjunction: ")
    cert = check_quillen(adj, IF.as_model_cat(), IG.as_model_cat(), mode)
    rep.extend(cert.report)
    return TotalAdjunctionCert(adj, cert, rep)


# ---------------------------------------------------------------------------
# base change


@dataclass
class BaseChangeCert:
    adjunction: Adjunction | None
    cert: QuillenAdjunctionCert | None
    hypotheses: Report
    report: Report

    @property
    def is_quillen(self) -> bool:
        return self.cert is not None and self.cert.is_adjunction_quillen

    @property
    def is_equivalence(self) -> bool:
        return self.cert is not None and bool(self.cert.is_equivalence)

    @property
    def predicted_equivalence(self) -> bool:
        return self.hypotheses.ok


def _family_report(FM, GM, bc, kind, family, cells) -> Report:
    """Componentwise Quillen and pseudo-naturality checks for a base-change family."""
    rep = Report(title="base-change family")
    M, N = FM.base, GM.base
    L = bc.left
    F, G = FM.underlying, GM.underlying
    idx = M.objects if kind == "left" else N.objects
    w = None
    for k in idx:
        a = family[k]
        src = F.fiber[k] if kind == "left" else F.fiber[bc.right.ob(k)]
        tgt = G.fiber[L.ob(k)] if kind == "left" else G.fiber[k]
        if a.C != src or a.D != tgt or not check_adjunction(a).ok:
            w = ("not an adjunction", k)
            break
        sm = FM.fiber(k if kind == "left" else bc.right.ob(k))
        tm = GM.fiber(L.ob(k) if kind == "left" else k)
        if not check_quillen(a, sm, tm).is_adjunction_quillen:
            w = ("not Quillen", k)
            break
    rep.add("components are Quillen adjunctions", w is None, w)
    if w:
        return rep
    # pseudo-naturality: cell[f][X]: (Lf)_! sigma_A X -> sigma_B f_! X (left kind)
    w = None
    base = M if kind == "left" else N
    for f in base.morphisms:
        A, Bo = base.src(f), base.tgt(f)
        if kind == "left":
            outer, inner = G.push(L.ar(f)), F.push(f)
            GB = G.fiber[L.ob(Bo)]
            srcfib = F.fiber[A]
        else:
            outer, inner = G.push(f), F.push(bc.right.ar(f))
            GB = G.fiber[Bo]
            srcfib = F.fiber[bc.right.ob(A)]
        sA, sB = family[A].left, family[Bo].left
        for x in srcfib.objects:
            m = cells[f].get(x)
            if m is None or GB.src(m) != outer.ob(sA.ob(x)) or GB.tgt(m) != sB.ob(inner.ob(x)) or not GB.is_iso(m):
                w = (f, x)
                break
        for a in srcfib.morphisms:
            if w:
                break
            x, y = srcfib.src(a), srcfib.tgt(a)
            if GB.comp(cells[f][y], outer.ar(sA.ar(a))) != GB.comp(sB.ar(inner.ar(a)), cells[f][x]):
                w = (f, a)
        if w:
            break
    rep.add("family is pseudo-natural", w is None, w)
    return rep


def base_change_cells(FM, GM, bc, kind, family) -> dict:
    """Identity cells where the family commutes strictly, searched isos otherwise."""
    M, N = FM.base, GM.base
    F, G = FM.underlying, GM.underlying
    base = M if kind == "left" else N
    out = {}
    for f in base.morphisms:
        A, Bo = base.src(f), base.tgt(f)
        if kind == "left":
            outer, inner = G.push(bc.left.ar(f)), F.push(f)
        else:
            outer, inner = G.push(f), F.push(bc.right.ar(f))
        lhs = compose_functors(outer, family[A].left)
        rhs = compose_functors(family[Bo].left, inner)
        if lhs.obj == rhs.obj and lhs.mor == rhs.mor:
            out[f] = {x: rhs.target.id(lhs.ob(x)) for x in lhs.source.objects}
        else:
            iso = find_natural_iso(lhs, rhs)
            if iso is None:
                raise IntegralError(f"base-change family is not pseudo-natural at {fmt(f)}")
            out[f] = iso.components
    return out


def base_change(FM: ModCatFunctor, GM: ModCatFunctor, bc: Adjunction, kind: str, family: Mapping,
                cells: Mapping | None = None, IF: IntegralStructure | None = None,
                IG: IntegralStructure | None = None) -> BaseChangeCert:
    """Adjunction between integral totals induced by a base adjunction
    ``L ⊣ R: M -> N`` and a compatible family.

    ``kind="left"``: ``family[A]: F(A) -> G(L A)`` for ``A`` in ``M``.
    ``kind="right"``: ``family[B]: F(R B) -> G(B)`` for ``B`` in ``N``.
    """
    if kind not in ("left", "right"):
        raise ValueError("kind must be 'left' or 'right'")
    family = dict(family)
    cells = dict(cells) if cells is not None else base_change_cells(FM, GM, bc, kind, family)
    rep = Report(title=f"{kind} base change")
    fam = _family_report(FM, GM, bc, kind, family, cells)
    rep.extend(fam)
    hyp = Report(title="equivalence hypotheses")
    M, N = FM.base, GM.base
    bmM, bmN = FM.base_model, GM.base_model
    if not (isinstance(bmM, ModelCat) and isinstance(bmN, ModelCat)):
        raise IntegralError("base change needs model categories as bases")
    bcert = check_quillen(bc, bmM, bmN, "equivalence")
    rep.add("base adjunction is Quillen", bcert.is_adjunction_quillen, bcert.report.first_failure() and
            bcert.report.first_failure().witness)
    hyp.add("base adjunction is a Quillen equivalence", bool(bcert.is_equivalence))
    hyp.add("source functor proper and relative", is_proper_relative(FM))
    hyp.add("target functor proper and relative", is_proper_relative(GM))
    w = None
    if kind == "left":
        for A in bmM.cofibrant_objects():
            c = check_quillen(family[A], FM.fiber(A), GM.fiber(bc.left.ob(A)), "equivalence")
            if not c.is_equivalence:
                w = A
                break
        hyp.add("family is a Quillen equivalence at cofibrant objects", w is None and fam.ok, w)
    else:
        for Bo in bmN.fibrant_objects():
            c = check_quillen(family[Bo], FM.fiber(bc.right.ob(Bo)), GM.fiber(Bo), "equivalence")
            if not c.is_equivalence:
                w = Bo
                break
        hyp.add("family is a Quillen equivalence at fibrant objects", w is None and fam.ok, w)
    if not fam.ok:
        return BaseChangeCert(None, None, hyp, rep)
    IF = IF or build_integral(FM, "force")
    IG = IG or build_integral(GM, "force")
    try:
        adj = (_left_base_change if kind == "left" else _right_base_change)(FM, GM, bc, family, cells, IF, IG)
    except CategoryError as e:
        rep.fail("induced adjunction exists", str(e))
        return BaseChangeCert(None, None, hyp, rep)
    rep.extend(check_adjunction(adj), "adjunction: ")
    cert = check_quillen(adj, IF.as_model_cat(), IG.as_model_cat(), "equivalence")
    rep.extend(cert.report)
    return BaseChangeCert(adj, cert, hyp, rep)


def _left_base_change(FM, GM, bc, family, cells, IF, IG) -> Adjunction:
    M = FM.base
    F, G = FM.underlying, GM.underlying
    L, R = bc.left, bc.right
    obj = {(A, x): (L.ob(A), family[A].left.ob(x)) for (A, x) in IF.total.objects}
    mor = {}
    for m in IF.total.morphisms:
        f, x, phi = m
        A, Bo = M.src(f), M.tgt(f)
        GB = G.fiber[L.ob(Bo)]
        mor[m] = (L.ar(f), family[A].left.ob(x), GB.comp(family[Bo].left.ar(phi), cells[f][x]))
    PhiL = FinFunctor(IF.total, IG.total, obj, mor, "Φ^L")
    r_obj, counit = {}, {}
    for (Bo, y) in IG.total.objects:
        RB = R.ob(Bo)
        eps = bc.counit[Bo]
        e_adj = G.on_arrow[eps]
        ey = e_adj.right.ob(y)
        sig = family[RB]
        r_obj[(Bo, y)] = (RB, sig.right.ob(ey))
        z = sig.left.ob(sig.right.ob(ey))
        GB = G.fiber[Bo]
        phi = GB.comp(e_adj.counit[y], e_adj.left.ar(sig.counit[ey]))
        counit[(Bo, y)] = (eps, z, phi)
    return from_counit(PhiL, r_obj, counit, "Φ^L⊣Φ^R")


def _right_base_change(FM, GM, bc, family, cells, IF, IG) -> Adjunction:
    """Dual construction: the right functor and the unit are explicit and the
    left functor is forced by universality."""
    N = GM.base
    F, G = FM.underlying, GM.underlying
    L, R = bc.left, bc.right
    r_obj = {(Bo, y): (R.ob(Bo), family[Bo].right.ob(y)) for (Bo, y) in IG.total.objects}
    r_mor = {}
    for m in IG.total.morphisms:
        g, y, psi = m
        Bo, B2 = N.src(g), N.tgt(g)
        GB2 = G.fiber[B2]
        ty = family[Bo].right.ob(y)
        # Θ_{B'}^L (Rg)_! Θ^R_B y  ->  g_! Θ^L_B Θ^R_B y  ->  g_! y  ->  y'
        inv = GB2.inverse(cells[g][ty])
        k = GB2.chain(psi, G.push(g).ar(family[Bo].counit[y]), inv)
        chi = family[B2].transpose(k, F.push(R.ar(g)).ob(ty))
        r_mor[m] = (R.ar(g), ty, chi)
    PsiR = FinFunctor(IG.total, IF.total, r_obj, r_mor, "Ψ^R")
    l_obj, unit = {}, {}
    for (A, x) in IF.total.objects:
        eta = bc.unit[A]
        e_adj = F.on_arrow[eta]
        ex = e_adj.left.ob(x)
        LA = L.ob(A)
        th = family[LA]
        l_obj[(A, x)] = (LA, th.left.ob(ex))
        unit[(A, x)] = (eta, x, th.unit[ex])
    # build the adjunction in opposite categories, where the unit is a counit
    from .fincat import opposite

    Rop = FinFunctor(opposite(IG.total), opposite(IF.total), PsiR.obj, PsiR.mor)
    dual = from_counit(Rop, l_obj, unit)
    Lf = FinFunctor(IF.total, IG.total, dual.right.obj, dual.right.mor, "Ψ^L")
    return Adjunction(Lf, PsiR, unit, dual.unit, "Ψ^L⊣Ψ^R")


# ---------------------------------------------------------------------------
# product bases and Fubini


def product_model(Mm: ModelCat, Nm: ModelCat, name: str = "") -> ModelCat:
    C = product(Mm.base, Nm.base, name or f"{Mm.base.name}×{Nm.base.name}")

    def cls(K1, K2):
        return frozenset((f, g) for f in K1 for g in K2)

    pm = PreModel(C, cls(Mm.W, Nm.W), cls(Mm.Cof, Nm.Cof), cls(Mm.Fib, Nm.Fib), name or f"{Mm.name}×{Nm.name}")

    def fact(a: FunctorialFactorization, b: FunctorialFactorization) -> FunctorialFactorization:
        middle = {(f, g): (a.middle[f], b.middle[g]) for f, g in C.morphisms}
        first = {(f, g): (a.first[f], b.first[g]) for f, g in C.morphisms}
        second = {(f, g): (a.second[f], b.second[g]) for f, g in C.morphisms}
        mm = complete_middle_map(C, middle, first, second)
        return FunctorialFactorization(middle, first, second, mm)

    return ModelCat(pm, fact(Mm.fact_cof_trivfib, Nm.fact_cof_trivfib),
                    fact(Mm.fact_trivcof_fib, Nm.fact_trivcof_fib), pm.name)


def restrict(FM: ModCatFunctor, side: str, fixed: Obj, other_model: ModelCat) -> ModCatFunctor:
    """``side="first"``: ``B -> F(fixed, B)`` over the second factor;
    ``side="second"``: ``A -> F(A, fixed)`` over the first factor."""
    F = FM.underlying
    P = FM.base
    base = other_model.base
    if side == "first":
        emb_o = {b: (fixed, b) for b in base.objects}
        emb_m = {g: (P.id((fixed, base.src(g)))[0], g) for g in base.morphisms}
    else:
        emb_o = {a: (a, fixed) for a in base.objects}
        emb_m = {f: (f, P.id((base.src(f), fixed))[1]) for f in base.morphisms}
    fiber = {b: F.fiber[emb_o[b]] for b in base.objects}
    on_arrow = {g: F.on_arrow[emb_m[g]] for g in base.morphisms}
    comp = {(h, g): F.comp_iso[(emb_m[h], emb_m[g])] for h, g in base.composable_pairs()}
    ident = {b: F.id_iso[emb_o[b]] for b in base.objects}
    U = AdjCatFunctor(base, fiber, on_arrow, comp, ident, f"{F.name}|{fmt(fixed)}")
    return ModCatFunctor(U, other_model, {b: FM.fiber(emb_o[b]) for b in base.objects}, U.name)


def inner_transformation(FM: ModCatFunctor, side: str, f: Mor, outer: ModelCat, inner: ModelCat,
                         restricted: dict) -> QuillenTransformation:
    """For ``f: A -> A'`` in the outer factor, the Quillen transformation
    ``F^A => F^{A'}`` with components ``F(f, id_B)`` (or the mirror image)."""
    F = FM.underlying
    P = FM.base
    Nb = inner.base
    A, A2 = outer.base.src(f), outer.base.tgt(f)
    S, T = restricted[A], restricted[A2]

    def pair(o, i):
        return (o, i) if side == "first" else (i, o)

    comps, cells = {}, {}
    for b in Nb.objects:
        comps[b] = F.on_arrow[pair(f, Nb.id(b))]
    for g in Nb.morphisms:
        b, b2 = Nb.src(g), Nb.tgt(g)
        # (id_{A'}, g)∘(f, id_b) == (f, id_{b2})∘(id_A, g) == (f, g)
        ga = pair(outer.base.id(A2), g)
        fb = pair(f, Nb.id(b))
        fb2 = pair(f, Nb.id(b2))
        gA = pair(outer.base.id(A), g)
        tgt_fib = F.fiber[pair(A2, b2)]
        cells[g] = {}
        for x in F.fiber[pair(A, b)].objects:
            c1 = F.comp_iso[(ga, fb)][x]    # (f,g)_! x -> (id,g)_! (f,id)_! x
            c2 = F.comp_iso[(fb2, gA)][x]   # (f,g)_! x -> (f,id)_! (id,g)_! x
            cells[g][x] = tgt_fib.comp(c2, tgt_fib.inverse(c1))
    return QuillenTransformation(S, T, comps, cells)


def iterated_functor(FM: ModCatFunctor, Mm: ModelCat, Nm: ModelCat, side: str) -> tuple[ModCatFunctor, dict]:
    """``A -> ∫_N F^A`` (``side="first"``) or ``B -> ∫_M F_B`` (``side="second"``)
    as a model-category-valued functor over the outer factor."""
    outer, inner = (Mm, Nm) if side == "first" else (Nm, Mm)
    restricted = {a: restrict(FM, side, a, inner) for a in outer.base.objects}
    integrals = {a: build_integral(restricted[a], "force", check_axioms=False) for a in outer.base.objects}
    on_arrow = {}
    for f in outer.base.morphisms:
        t = inner_transformation(FM, side, f, outer, inner, restricted)
        A, A2 = outer.base.src(f), outer.base.tgt(f)
        c = integrate_quillen_transformation(t, integrals[A], integrals[A2])
        if c.adjunction is None:
            raise IntegralError(f"inner transformation failed at {fmt(f)}: {c.report.first_failure().name}")
        on_arrow[f] = c.adjunction
    fibers = {a: integrals[a].total for a in outer.base.objects}
    U = AdjCatFunctor(outer.base, fibers, on_arrow, name=f"∫{FM.name}[{side}]")
    H = ModCatFunctor(U, outer, {a: integrals[a].as_model_cat() for a in outer.base.objects}, U.name)
    return H, integrals


def _fubini_map(FM: ModCatFunctor, I: IntegralStructure, J: IntegralStructure, side: str) -> FinFunctor:
    """Canonical bijection from the product total to an iterated total."""
    F = FM.underlying
    P = FM.base

    def split(fg):
        f, g = fg
        return (f, g) if side == "first" else (g, f)

    obj = {}
    for ((a, b), x) in I.total.objects:
        o, i = (a, b) if side == "first" else (b, a)
        obj[((a, b), x)] = (o, (i, x))
    mor = {}
    for m in I.total.morphisms:
        (fg, x, phi) = m
        f, g = fg
        (a, b) = P.src(fg)
        (a2, b2) = P.tgt(fg)
        if side == "first":
            outer_arrow, inner_src = f, b
            first_leg, second_leg = (f, P.id((a, b))[1]), (P.id((a2, b))[0], g)
        else:
            outer_arrow, inner_src = g, a
            first_leg, second_leg = (P.id((a, b))[0], g), (f, P.id((a, b2))[1])
        # second_leg ∘ first_leg == (f, g)
        FB = F.fiber[(a2, b2)]
        c = F.comp_iso[(second_leg, first_leg)][x]
        inner_phi = FB.comp(phi, FB.inverse(c))
        y = F.push(first_leg).ob(x)
        inner_arrow = g if side == "first" else f
        mor[m] = (outer_arrow, (inner_src, x), (inner_arrow, y, inner_phi))
    return FinFunctor(I.total, J.total, obj, mor, f"fubini[{side}]")


@dataclass
class FubiniResult:
    product_structure: IntegralStructure
    iterated: dict
    report: Report


def fubini(FM: ModCatFunctor, Mm: ModelCat, Nm: ModelCat) -> FubiniResult:
    """Compare the integral over ``M×N`` with both iterated integrals."""
    rep = Report(title="Fubini")
    P = FM.base
    rep.add("base is the product", P == product(Mm.base, Nm.base))
    pr = Report()
    for a in Mm.base.objects:
        pr.extend(check_proper(restrict(FM, "first", a, Nm)), f"F^{fmt(a)} ")
        pr.extend(check_relative(restrict(FM, "first", a, Nm)), f"F^{fmt(a)} ")
    for b in Nm.base.objects:
        pr.extend(check_proper(restrict(FM, "second", b, Mm)), f"F_{fmt(b)} ")
        pr.extend(check_relative(restrict(FM, "second", b, Mm)), f"F_{fmt(b)} ")
    first_fail = pr.first_failure()
    rep.add("restrictions are proper and relative", pr.ok, first_fail and (first_fail.name, first_fail.witness))
    if not rep.ok:
        raise IntegralError("Fubini needs proper relative restrictions")
    I = build_integral(FM, "require")
    rep.add("product integral is a model category", I.axioms.ok)
    iterated = {}
    for side in ("first", "second"):
        H, _ = iterated_functor(FM, Mm, Nm, side)
        rep.add(f"iterated functor ({side}) is proper and relative", is_proper_relative(H))
        J = build_integral(H, "force")
        iterated[side] = J
        rep.add(f"iterated integral ({side}) is a model category", J.axioms.ok)
        Phi = _fubini_map(FM, I, J, side)
        vf = validate_functor(Phi)
        bij = (len(set(Phi.obj.values())) == len(J.total.objects) == len(I.total.objects)
               and len(set(Phi.mor.values())) == len(J.total.morphisms) == len(I.total.morphisms))
        rep.add(f"canonical map ({side}) is an isomorphism of categories", vf.ok and bij,
                None if vf.ok else vf.first_failure().witness)
        if vf.ok and bij:
            for label in ("W", "Cof", "Fib"):
                K1 = getattr(I.classes, label)
                K2 = getattr(J.classes, label)
                bad = next((m for m in I.total.morphisms if (m in K1) != (Phi.ar(m) in K2)), None)
                rep.add(f"{label} matches ({side})", bad is None, bad)
    return FubiniResult(I, iterated, rep)
