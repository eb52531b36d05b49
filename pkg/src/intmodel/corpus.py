"""Named categories, model structures and model-category-valued functors used
as a test corpus: slices, coslices, constants, arrow categories and the
two-object example with a varying fiber."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .adjunction import Adjunction, find_adjoint, identity_adjunction
from .fincat import (
    FinCat,
    FinFunctor,
    Obj,
    arrow_category,
    build_poset,
    chain,
    constant_functor,
    coslice_category,
    find_limit,
    find_colimit,
    point,
    slice_category,
)
from .grothendieck import AdjCatFunctor
from .integral import (
    IntegralStructure,
    ModCatFunctor,
    build_integral,
    check_proper,
    check_relative,
    constant_modcat,
)
from .modelstruct import (
    FunctorialFactorization,
    ModelCat,
    PreModel,
    complete_middle_map,
    enumerate_model_structures,
    llp,
    make_model,
    rlp,
    trivial_model,
)
from .report import Report


# ---------------------------------------------------------------------------
# named categories and models


def I1() -> FinCat:
    return chain(2, "I1")


def B2() -> FinCat:
    """Subsets of a two-element set, ordered by inclusion."""
    return build_poset([("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")], name="B2")


def named_category(name: str) -> FinCat:
    if name == "pt":
        return point()
    if name == "I1":
        return I1()
    if name == "B2":
        return B2()
    if name.startswith("chain") and name[5:].isdigit():
        return chain(int(name[5:]), name)
    raise KeyError(name)


def ex44_model(name: str = "ex44") -> ModelCat:
    """Every map a weak equivalence and a cofibration, only isos fibrations."""
    return make_model(PreModel.make(I1(), "all", "all", "none", name))


@lru_cache(maxsize=None)
def _structures(cat_name: str) -> tuple:
    return tuple(enumerate_model_structures(named_category(cat_name)))


def structures(cat_name: str) -> list[ModelCat]:
    return list(_structures(cat_name))


# ---------------------------------------------------------------------------
# properness of a single model category


def _cospan_shape() -> FinCat:
    return build_poset([("x", "y"), ("z", "y")], name="cospan")


def right_proper(mc: ModelCat) -> tuple | None:
    """Witness ``(w, p)`` where the pullback of a weak equivalence ``w`` along a
    fibration ``p`` is not a weak equivalence, or None."""
    C = mc.base
    J = _cospan_shape()
    for p in C.morphisms:
        if p not in mc.Fib:
            continue
        for w in C.morphisms:
            if w not in mc.W or C.tgt(w) != C.tgt(p):
                continue
            D = FinFunctor(J, C, {"x": C.src(p), "y": C.tgt(p), "z": C.src(w)},
                           {("x", "y"): p, ("z", "y"): w, ("x", "x"): C.id(C.src(p)),
                            ("y", "y"): C.id(C.tgt(p)), ("z", "z"): C.id(C.src(w))})
            lim = find_limit(C, D)
            if lim is None:
                return (w, p, "no pullback")
            if lim.leg("x") not in mc.W:
                return (w, p)
    return None


def left_proper(mc: ModelCat) -> tuple | None:
    """Dual: pushouts of weak equivalences along cofibrations."""
    C = mc.base
    J = build_poset([("y", "x"), ("y", "z")], name="span")
    for i in C.morphisms:
        if i not in mc.Cof:
            continue
        for w in C.morphisms:
            if w not in mc.W or C.src(w) != C.src(i):
                continue
            D = FinFunctor(J, C, {"y": C.src(i), "x": C.tgt(i), "z": C.tgt(w)},
                           {("y", "x"): i, ("y", "z"): w, ("x", "x"): C.id(C.tgt(i)),
                            ("y", "y"): C.id(C.src(i)), ("z", "z"): C.id(C.tgt(w))})
            colim = find_colimit(C, D)
            if colim is None:
                return (w, i, "no pushout")
            if colim.leg("x") not in mc.W:
                return (w, i)
    return None


# ---------------------------------------------------------------------------
# slice and coslice model structures


def _induced_fact(C: FinCat, S: FinCat, base_fact: FunctorialFactorization, kind: str) -> FunctorialFactorization:
    """Factor the underlying arrow in ``C`` and equip the middle object with
    its structure map."""
    middle, first, second = {}, {}, {}
    for m in S.morphisms:
        h, g = m
        s, t = base_fact.second[h], base_fact.first[h]
        if kind == "slice":
            # m = (h, g): f -> g over x, with f == g∘h
            z = C.comp(g, s)
            middle[m], first[m], second[m] = z, (t, z), (s, g)
        else:
            # m = (h, f): f -> g under x, with g == h∘f
            z = C.comp(t, g)
            middle[m], first[m], second[m] = z, (t, g), (s, z)
    mm = complete_middle_map(S, middle, first, second)
    return FunctorialFactorization(middle, first, second, mm)


def _over_model(mc: ModelCat, S: FinCat, kind: str, name: str) -> ModelCat:
    """Model structure on a slice or coslice created by the forgetful functor."""
    def cls(K):
        return frozenset(m for m in S.morphisms if m[0] in K)

    pm = PreModel(S, cls(mc.W), cls(mc.Cof), cls(mc.Fib), name)
    f1 = _induced_fact(mc.base, S, mc.fact_cof_trivfib, kind)
    f2 = _induced_fact(mc.base, S, mc.fact_trivcof_fib, kind)
    return ModelCat(pm, f1, f2, name)


def slice_model(mc: ModelCat, x: Obj) -> ModelCat:
    S = slice_category(mc.base, x)
    return _over_model(mc, S, "slice", f"{mc.name}/{x}")


def coslice_model(mc: ModelCat, x: Obj) -> ModelCat:
    S = coslice_category(mc.base, x)
    return _over_model(mc, S, "coslice", f"{x}/{mc.name}")


def postcompose(mc: ModelCat, f, S: FinCat, T: FinCat) -> FinFunctor:
    """``M/A -> M/B`` by composing with ``f: A -> B``."""
    C = mc.base
    obj = {h: C.comp(f, h) for h in S.objects}
    mor = {m: (m[0], C.comp(f, m[1])) for m in S.morphisms}
    return FinFunctor(S, T, obj, mor, f"{f}∘-")


def precompose(mc: ModelCat, f, S: FinCat, T: FinCat) -> FinFunctor:
    """``B/M -> A/M`` by precomposing with ``f: A -> B``."""
    C = mc.base
    obj = {h: C.comp(h, f) for h in S.objects}
    mor = {m: (m[0], C.comp(m[1], f)) for m in S.morphisms}
    return FinFunctor(S, T, obj, mor, f"-∘{f}")


def slice_functor(mc: ModelCat, name: str = "") -> ModCatFunctor:
    """``A -> M/A`` with ``f_!`` given by composition and ``f^*`` by pullback."""
    C = mc.base
    fibers = {A: slice_model(mc, A) for A in C.objects}
    on_arrow = {}
    for f in C.morphisms:
        S, T = fibers[C.src(f)].base, fibers[C.tgt(f)].base
        adj = find_adjoint(postcompose(mc, f, S, T), "right")
        if adj is None:
            raise ValueError(f"no pullback functor along {f}")
        on_arrow[f] = adj
    U = AdjCatFunctor(C, {A: fibers[A].base for A in C.objects}, on_arrow, name=name or f"slice({mc.name})")
    return ModCatFunctor(U, mc, fibers, U.name)


def coslice_functor(mc: ModelCat, name: str = "") -> ModCatFunctor:
    """``A -> A/M`` with ``f_!`` given by pushout and ``f^*`` by precomposition."""
    C = mc.base
    fibers = {A: coslice_model(mc, A) for A in C.objects}
    on_arrow = {}
    for f in C.morphisms:
        S, T = fibers[C.tgt(f)].base, fibers[C.src(f)].base
        adj = find_adjoint(precompose(mc, f, S, T), "left")
        if adj is None:
            raise ValueError(f"no pushout functor along {f}")
        on_arrow[f] = adj
    U = AdjCatFunctor(C, {A: fibers[A].base for A in C.objects}, on_arrow, name=name or f"coslice({mc.name})")
    return ModCatFunctor(U, mc, fibers, U.name)


# ---------------------------------------------------------------------------
# the arrow category


@dataclass
class ArrowStructures:
    injective: ModelCat
    projective: ModelCat


def arrow_structures(mc: ModelCat) -> ArrowStructures:
    """Injective (levelwise W and Cof) and projective (levelwise W and Fib)
    structures on the arrow category."""
    C = mc.base
    A = arrow_category(C, f"{C.name}^[1]")

    def lw(K):
        return frozenset(m for m in A.morphisms if m[2] in K and m[3] in K)

    W = lw(mc.W)
    cof = lw(mc.Cof)
    inj = PreModel(A, W, cof, rlp(A, cof & W), f"{mc.name}^[1]_inj")
    fib = lw(mc.Fib)
    proj = PreModel(A, W, llp(A, fib & W), fib, f"{mc.name}^[1]_proj")
    return ArrowStructures(make_model(inj), make_model(proj))


def slice_total_to_arrow(I: IntegralStructure) -> FinFunctor:
    """``(A, h) -> h`` and ``(f, h, (u, h')) -> (h, h', u, f)``: the canonical
    identification of the integral of the slice functor with the arrow category."""
    C = I.functor.base_model.base
    A = arrow_category(C)
    obj = {o: o[1] for o in I.total.objects}
    mor = {m: (m[1], m[2][1], m[2][0], m[0]) for m in I.total.morphisms}
    return FinFunctor(I.total, A, obj, mor, "∫slice≅arrow")


# ---------------------------------------------------------------------------
# two-object example: a point over the initial object, a chosen fiber over
# the terminal one


def ex44_base() -> ModelCat:
    return ex44_model()


def example_4_4(fiber: ModelCat, name: str = "") -> ModCatFunctor:
    """Over ``0 -> 1`` with every map a weak equivalence and a cofibration:
    ``F(0) = pt``, ``F(1) = fiber``, the arrow acting by the initial object."""
    base = ex44_base()
    C = base.base
    P = point()
    N = fiber.base
    e = N.initial()
    if e is None:
        raise ValueError("fiber needs an initial object")
    t = N.terminal()
    L = constant_functor(P, N, e)
    R = constant_functor(N, P, "*")
    unit = {"*": P.id("*")}
    counit = {y: N.hom(e, y)[0] for y in N.objects}
    L_adj = Adjunction(L, R, unit, counit, "initial⊣const")
    f = C.hom("0", "1")[0]
    fibers = {"0": P, "1": N}
    on_arrow = {C.id("0"): identity_adjunction(P), C.id("1"): identity_adjunction(N), f: L_adj}
    U = AdjCatFunctor(C, fibers, on_arrow, name=name or f"ex44[{fiber.name}]")
    return ModCatFunctor(U, base, {"0": trivial_model(P), "1": fiber}, U.name)


def example_4_4_base_changes(fiber: ModelCat) -> dict:
    """The two base changes through which the fiber adjunction factors.

    ``"collapse"``: along ``I1 -> pt``; the total left adjoint sends
    ``(0, X)`` to the initial object and ``(1, X)`` to ``X``.
    ``"include"``: along ``{0} -> I1``; the total left adjoint is ``X -> (0, X)``.
    Each value is ``(FM, GM, bc, family)`` for a left-kind base change.
    """
    from .fincat import full_subcategory

    FM = example_4_4(fiber)
    base = FM.base_model
    C = base.base
    P = point()
    pt_model = trivial_model(P)
    f = C.hom("0", "1")[0]
    # collapse
    Lc = constant_functor(C, P, "*")
    Rc = constant_functor(P, C, "1")
    bc = Adjunction(Lc, Rc, {"0": f, "1": C.id("1")}, {"*": P.id("*")}, "collapse")
    GM = constant_modcat(pt_model, fiber, f"{fiber.name} over pt")
    family = {"0": FM.adj(f), "1": identity_adjunction(fiber.base)}
    collapse = (FM, GM, bc, family)
    # include
    S = full_subcategory(C, ["0"], "{0}")
    inc = FinFunctor(S, C, {"0": "0"}, {S.id("0"): C.id("0")}, "include")
    back = FinFunctor(C, S, {"0": "0", "1": "0"}, {m: S.id("0") for m in C.morphisms}, "collapse0")
    bc2 = Adjunction(inc, back, {"0": S.id("0")}, {"0": C.id("0"), "1": f}, "include")
    s_model = trivial_model(S)
    FM2 = constant_modcat(s_model, trivial_model(P), "pt over {0}")
    family2 = {"0": identity_adjunction(P)}
    include = (FM2, FM, bc2, family2)
    return {"collapse": collapse, "include": include}


# ---------------------------------------------------------------------------
# the corpus


@dataclass
class CorpusInstance:
    name: str
    kind: str
    functor: ModCatFunctor
    base_cat: str
    index: int


CORPUS_BASES = ("I1", "chain3", "chain4", "B2")


def _constant_fibers() -> list[ModelCat]:
    return [ex44_model("ex44"), trivial_model(I1(), "triv(I1)")]


def generate_corpus(bases=CORPUS_BASES, kinds=("slice", "coslice", "constant"),
                    limit: int | None = None) -> list[CorpusInstance]:
    """Proper relative functors over every enumerated model structure on the
    given bases, in canonical order."""
    out: list[CorpusInstance] = []
    for b in bases:
        for i, mc in enumerate(structures(b)):
            cands = []
            if "slice" in kinds:
                cands.append(("slice", lambda mc=mc: slice_functor(mc)))
            if "coslice" in kinds:
                cands.append(("coslice", lambda mc=mc: coslice_functor(mc)))
            if "constant" in kinds:
                for fib in _constant_fibers():
                    cands.append((f"constant[{fib.name}]", lambda mc=mc, fib=fib: constant_modcat(mc, fib)))
            for kind, make in cands:
                FM = make()
                if check_proper(FM).ok and check_relative(FM).ok:
                    out.append(CorpusInstance(f"{kind}@{mc.name}", kind, FM, b, i))
                    if limit is not None and len(out) >= limit:
                        return out
    return out


def corpus_summary(instances: list[CorpusInstance]) -> dict:
    counts: dict = {}
    for inst in instances:
        counts[inst.kind] = counts.get(inst.kind, 0) + 1
    return counts


# ---------------------------------------------------------------------------
# base-change setups


def collapse_adjunction(N: FinCat) -> Adjunction:
    """Constant-at-initial left adjoint to constant-at-terminal on a category
    with both; a Quillen adjunction for every model structure, usually not an
    equivalence."""
    e, t = N.initial(), N.terminal()
    if e is None or t is None:
        raise ValueError("needs initial and terminal objects")
    L = FinFunctor(N, N, {x: e for x in N.objects}, {m: N.id(e) for m in N.morphisms}, "const∅")
    R = FinFunctor(N, N, {x: t for x in N.objects}, {m: N.id(t) for m in N.morphisms}, "const*")
    unit = {x: N.hom(x, t)[0] for x in N.objects}
    counit = {y: N.hom(e, y)[0] for y in N.objects}
    return Adjunction(L, R, unit, counit, "collapse")


def initial_point_functor(base: ModelCat, fiber: ModelCat, name: str = "") -> ModCatFunctor:
    """Over a two-object chain: a point over ``0``, ``fiber`` over ``1``, the
    arrow acting by the initial object (the example functor with a chosen base)."""
    FM = example_4_4(fiber, name)
    return ModCatFunctor(FM.underlying, base, FM.fiber_models, FM.name)


@dataclass
class BaseChangeSetup:
    name: str
    source: ModCatFunctor
    target: ModCatFunctor
    adjunction: Adjunction
    kind: str
    family: dict
    mutated: dict | None = None


def base_change_setups() -> list[BaseChangeSetup]:
    """Setups whose family is a Quillen equivalence at every relevant object;
    where given, ``mutated`` swaps one component for a non-equivalence."""
    out = []
    P = point()
    ptm = trivial_model(P, "pt")
    idpt = identity_adjunction(P)
    for N in (trivial_model(I1(), "triv(I1)"), trivial_model(chain(3, "chain3"), "triv(chain3)"),
              trivial_model(B2(), "triv(B2)")):
        FM = constant_modcat(ptm, N, f"{N.name} over pt")
        out.append(BaseChangeSetup(f"identity over pt [{N.name}]", FM, FM, idpt, "left",
                                   {"*": identity_adjunction(N.base)}, {"*": collapse_adjunction(N.base)}))
    # chain3 with weak equivalences generated by the lower arrow
    mc = next(s for s in structures("chain3")
              if s.W == frozenset(s.base.hom(a, b)[0] for a, b in (("0", "0"), ("1", "1"), ("2", "2"), ("0", "1")))
              and s.Cof == frozenset(s.base.morphisms))
    FM = constant_modcat(ptm, mc, f"{mc.name} over pt")
    out.append(BaseChangeSetup(f"identity over pt [{mc.name}]", FM, FM, idpt, "left",
                               {"*": identity_adjunction(mc.base)}, {"*": collapse_adjunction(mc.base)}))
    # two-object base where only the top fiber is mutated
    tb = trivial_model(I1(), "triv(I1)")
    FM = initial_point_functor(tb, trivial_model(I1(), "triv(I1)"), "pt→triv(I1)")
    fam = {"0": identity_adjunction(P), "1": identity_adjunction(I1())}
    out.append(BaseChangeSetup("identity over triv(I1) [pt→triv(I1)]", FM, FM, identity_adjunction(I1()), "left",
                               fam, {"0": fam["0"], "1": collapse_adjunction(I1())}))
    # the two factors of the example adjunction with a relative fiber
    ex = ex44_model()
    for key, (F1, G1, bc, family) in example_4_4_base_changes(ex).items():
        out.append(BaseChangeSetup(f"example {key} [ex44]", F1, G1, bc, "left", family))
    # identity base change on a right-kind family
    FM = initial_point_functor(tb, trivial_model(I1(), "triv(I1)"), "pt→triv(I1)")
    out.append(BaseChangeSetup("identity over triv(I1), right kind", FM, FM, identity_adjunction(I1()), "right",
                               fam, {"0": fam["0"], "1": collapse_adjunction(I1())}))
    return out


def fubini_instances() -> list[tuple[str, ModCatFunctor, ModelCat, ModelCat]]:
    """Functors over a product of two-object bases, with the factor models."""
    from .integral import product_model

    ex, tr = ex44_model(), trivial_model(I1(), "triv(I1)")
    out = []
    for Mm, Nm in ((ex, ex), (ex, tr), (tr, ex)):
        P = product_model(Mm, Nm)
        out.append((f"constant[ex44] over {P.name}", constant_modcat(P, ex), Mm, Nm))
        out.append((f"slice over {P.name}", slice_functor(P), Mm, Nm))
        out.append((f"coslice over {P.name}", coslice_functor(P), Mm, Nm))
    return out
