"""Grothendieck construction of pseudo-functors into adjunctions, (co)Cartesian
morphisms, straightening of biCartesian fibrations and relative (co)limits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .adjunction import Adjunction, check_adjunction, identity_adjunction
from .fincat import (
    CategoryError,
    Cone,
    FinCat,
    FinFunctor,
    Mor,
    Obj,
    compose_functors,
    enumerate_cones,
    find_colimit,
    find_natural_iso,
    opposite,
    validate_category,
    validate_functor,
)
from .report import Report, fmt


class CoherenceError(CategoryError):
    pass


class AdjCatFunctor:
    """A pseudo-functor from ``base`` to finite categories and adjunctions.

    ``on_arrow[f]`` is ``f_! ⊣ f^*``. ``comp_iso[(g, f)][X]`` is the component
    ``(g∘f)_! X -> g_! f_! X`` and ``id_iso[A][X]`` is ``X -> (id_A)_! X``.
    """

    def __init__(self, base: FinCat, fiber: Mapping, on_arrow: Mapping,
                 comp_iso: Mapping | None = None, id_iso: Mapping | None = None, name: str = ""):
        self.base = base
        self.fiber = dict(fiber)
        self.on_arrow = dict(on_arrow)
        self.name = name
        if comp_iso is None or id_iso is None:
            c, u = canonical_cells(base, self.fiber, self.on_arrow)
            comp_iso = c if comp_iso is None else comp_iso
            id_iso = u if id_iso is None else id_iso
        self.comp_iso = {k: dict(v) for k, v in comp_iso.items()}
        self.id_iso = {k: dict(v) for k, v in id_iso.items()}

    def push(self, f: Mor) -> FinFunctor:
        return self.on_arrow[f].left

    def pull(self, f: Mor) -> FinFunctor:
        return self.on_arrow[f].right

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AdjCatFunctor):
            return NotImplemented
        return (self.base == other.base and self.fiber == other.fiber and self.on_arrow == other.on_arrow
                and self.comp_iso == other.comp_iso and self.id_iso == other.id_iso)

    __hash__ = None

    def __repr__(self) -> str:
        return f"AdjCatFunctor({self.name or '?'} over {self.base.name})"


def canonical_cells(base: FinCat, fiber: Mapping, on_arrow: Mapping) -> tuple[dict, dict]:
    """Coherence cells determined by the adjunctions.

    When the right adjoints compose strictly, ``(g∘f)_!`` and ``g_! f_!`` are
    both left adjoint to ``f^* g^*`` and the cell is the canonical comparison
    between two left adjoints of one functor. Otherwise a natural iso is searched.
    """
    comp: dict = {}
    for g, f in base.composable_pairs():
        A, C = base.src(f), base.tgt(g)
        FC = fiber[C]
        agf, af, ag = on_arrow[base.comp(g, f)], on_arrow[f], on_arrow[g]
        cells = {}
        rights_agree = all(agf.right.ob(z) == af.right.ob(ag.right.ob(z)) for z in FC.objects) and all(
            agf.right.ar(m) == af.right.ar(ag.right.ar(m)) for m in FC.morphisms)
        if rights_agree:
            for x in fiber[A].objects:
                # unit of g_! f_! ⊣ f^* g^* at x, transposed along (gf)_! ⊣ (gf)^*
                y = af.left.ob(x)
                eta = fiber[A].comp(af.right.ar(ag.unit[y]), af.unit[x])
                cells[x] = FC.comp(agf.counit[ag.left.ob(y)], agf.left.ar(eta))
        else:
            iso = find_natural_iso(agf.left, compose_functors(ag.left, af.left))
            if iso is None:
                raise CoherenceError(f"(g∘f)_! and g_! f_! are not isomorphic for {fmt((g, f))}")
            cells = iso.components
        comp[(g, f)] = cells
    ident: dict = {}
    for A in base.objects:
        a = on_arrow[base.id(A)]
        FA = fiber[A]
        if all(a.right.ob(z) == z for z in FA.objects) and all(a.right.ar(m) == m for m in FA.morphisms):
            ident[A] = {x: a.unit[x] for x in FA.objects}
        else:
            iso = find_natural_iso(FinFunctor(FA, FA, {x: x for x in FA.objects}, {m: m for m in FA.morphisms}), a.left)
            if iso is None:
                raise CoherenceError(f"(id_{fmt(A)})_! is not isomorphic to the identity")
            ident[A] = iso.components
    return comp, ident


def check_adjcat_functor(F: AdjCatFunctor) -> Report:
    B = F.base
    rep = Report(title=f"pseudo-functor {F.name}")
    miss = [A for A in B.objects if A not in F.fiber]
    rep.add("fiber for every object", not miss, miss[:1] or None)
    missa = [f for f in B.morphisms if f not in F.on_arrow]
    rep.add("adjunction for every morphism", not missa, missa[:1] or None)
    if miss or missa:
        return rep
    ends = next((f for f in B.morphisms
                 if F.on_arrow[f].C != F.fiber[B.src(f)] or F.on_arrow[f].D != F.fiber[B.tgt(f)]), None)
    rep.add("adjunctions between the right fibers", ends is None, ends)
    if ends is not None:
        return rep
    bad = next((f for f in B.morphisms if not check_adjunction(F.on_arrow[f]).ok), None)
    rep.add("each arrow gives an adjunction", bad is None, bad)

    # cells: type, invertibility, naturality
    wit = None
    for (g, f), cells in F.comp_iso.items():
        A, C = B.src(f), B.tgt(g)
        FC = F.fiber[C]
        gf_, g_, f_ = F.push(B.comp(g, f)), F.push(g), F.push(f)
        for x in F.fiber[A].objects:
            m = cells.get(x)
            if m is None or FC.src(m) != gf_.ob(x) or FC.tgt(m) != g_.ob(f_.ob(x)) or not FC.is_iso(m):
                wit = ("composition cell", g, f, x)
                break
        if wit:
            break
        for a in F.fiber[A].morphisms:
            x, y = F.fiber[A].src(a), F.fiber[A].tgt(a)
            if FC.comp(cells[y], gf_.ar(a)) != FC.comp(g_.ar(f_.ar(a)), cells[x]):
                wit = ("composition cell not natural", g, f, a)
                break
        if wit:
            break
    if wit is None and set(F.comp_iso) != set(B.composable_pairs()):
        wit = ("composition cells missing",)
    for A in B.objects:
        if wit:
            break
        FA = F.fiber[A]
        i_ = F.push(B.id(A))
        cells = F.id_iso.get(A, {})
        for x in FA.objects:
            m = cells.get(x)
            if m is None or FA.src(m) != x or FA.tgt(m) != i_.ob(x) or not FA.is_iso(m):
                wit = ("unit cell", A, x)
                break
        if wit:
            break
        for a in FA.morphisms:
            if FA.comp(cells[FA.tgt(a)], a) != FA.comp(i_.ar(a), cells[FA.src(a)]):
                wit = ("unit cell not natural", A, a)
                break
    rep.add("coherence cells are natural isomorphisms", wit is None, wit)
    if wit:
        return rep

    # associativity: h_!(c_{g,f,X}) ∘ c_{h,gf,X} == c_{h,g,f_!X} ∘ c_{hg,f,X}
    wit = None
    for g, f in B.composable_pairs():
        gf = B.comp(g, f)
        for h in B.out_of(B.tgt(g)):
            hg = B.comp(h, g)
            FD = F.fiber[B.tgt(h)]
            for x in F.fiber[B.src(f)].objects:
                lhs = FD.comp(F.push(h).ar(F.comp_iso[(g, f)][x]), F.comp_iso[(h, gf)][x])
                rhs = FD.comp(F.comp_iso[(h, g)][F.push(f).ob(x)], F.comp_iso[(hg, f)][x])
                if lhs != rhs:
                    wit = (h, g, f, x)
                    break
            if wit:
                break
        if wit:
            break
    rep.add("associativity coherence", wit is None, wit)

    wit = None
    for f in B.morphisms:
        A, Bo = B.src(f), B.tgt(f)
        FB = F.fiber[Bo]
        for x in F.fiber[A].objects:
            if F.comp_iso[(f, B.id(A))][x] != F.push(f).ar(F.id_iso[A][x]):
                wit = ("right unit", f, x)
                break
            if F.comp_iso[(B.id(Bo), f)][x] != F.id_iso[Bo][F.push(f).ob(x)]:
                wit = ("left unit", f, x)
                break
        if wit:
            break
    rep.add("unit coherence", wit is None, wit)
    return rep


def constant_adjcat(base: FinCat, fiber: FinCat, name: str = "") -> AdjCatFunctor:
    idadj = identity_adjunction(fiber)
    return AdjCatFunctor(base, {A: fiber for A in base.objects}, {f: idadj for f in base.morphisms}, name=name)


# ---------------------------------------------------------------------------
# the total category


@dataclass
class GrothCat:
    """Total category with objects ``(A, X)`` and morphisms ``(f, X, phi)``
    where ``phi: f_! X -> Y``. The source fiber object ``X`` is part of the
    morphism name so that names are unique."""

    total: FinCat
    projection: FinFunctor
    functor: AdjCatFunctor

    def fiber_objects(self, A: Obj) -> list:
        return [o for o in self.total.objects if o[0] == A]


def integrate_cat(F: AdjCatFunctor, name: str = "", check: bool = True) -> GrothCat:
    if check:
        rep = check_adjcat_functor(F)
        if not rep.ok:
            c = rep.first_failure()
            raise CoherenceError(f"{c.name} (witness {fmt(c.witness)})")
    B = F.base
    objs = [(A, x) for A in B.objects for x in F.fiber[A].objects]
    arrows = []
    for (A, x) in objs:
        for (Bo, y) in objs:
            for f in B.hom(A, Bo):
                fx = F.push(f).ob(x)
                for phi in F.fiber[Bo].hom(fx, y):
                    arrows.append(((f, x, phi), (A, x), (Bo, y)))
    identity = {}
    for (A, x) in objs:
        FA = F.fiber[A]
        inv = FA.inverse(F.id_iso[A][x])
        identity[(A, x)] = (B.id(A), x, inv)
    by_src: dict = {}
    for m in arrows:
        by_src.setdefault(m[1], []).append(m)
    table = {}
    for (m1, s1, t1) in arrows:
        f, x, phi = m1
        for (m2, _, t2) in by_src.get(t1, ()):
            g, _, psi = m2
            gf = B.comp(g, f)
            FC = F.fiber[t2[0]]
            comp = FC.comp(psi, FC.comp(F.push(g).ar(phi), F.comp_iso[(g, f)][x]))
            table[(m2, m1)] = (gf, x, comp)
    total = FinCat(objs, arrows, identity, table, name or f"∫{F.name}")
    proj = FinFunctor(total, B, {o: o[0] for o in objs}, {m: m[0] for m in total.morphisms}, "π")
    return GrothCat(total, proj, F)


def validate_groth(G: GrothCat) -> Report:
    rep = Report(title="Grothendieck construction")
    rep.extend(validate_category(G.total), "total: ")
    rep.extend(validate_functor(G.projection), "projection: ")
    return rep


def canonical_lift(G: GrothCat, f: Mor, x: Obj) -> Mor:
    """The lift ``(f, X, id)`` starting at ``(src f, X)``."""
    F = G.functor
    Bo = F.base.tgt(f)
    return (f, x, F.fiber[Bo].id(F.push(f).ob(x)))


# ---------------------------------------------------------------------------
# (co)Cartesian morphisms


def is_cocartesian(p: FinFunctor, phi: Mor) -> bool:
    D, C = p.source, p.target
    x, y = D.src(phi), D.tgt(phi)
    pphi = p.ar(phi)
    for psi in D.out_of(x):
        v = D.tgt(psi)
        for g in C.hom(p.ob(y), p.ob(v)):
            if C.comp(g, pphi) != p.ar(psi):
                continue
            n = sum(1 for gam in D.hom(y, v) if p.ar(gam) == g and D.comp(gam, phi) == psi)
            if n != 1:
                return False
    return True


def is_cartesian(p: FinFunctor, phi: Mor) -> bool:
    D, C = p.source, p.target
    x, y = D.src(phi), D.tgt(phi)
    pphi = p.ar(phi)
    for psi in D.into(y):
        u = D.src(psi)
        for g in C.hom(p.ob(u), p.ob(x)):
            if C.comp(pphi, g) != p.ar(psi):
                continue
            n = sum(1 for gam in D.hom(u, x) if p.ar(gam) == g and D.comp(phi, gam) == psi)
            if n != 1:
                return False
    return True


def classify_cartesian(p: FinFunctor | GrothCat, phi: Mor) -> dict:
    if isinstance(p, GrothCat):
        p = p.projection
    return {"cocartesian": is_cocartesian(p, phi), "cartesian": is_cartesian(p, phi)}


def cocartesian_lift(p: FinFunctor, x: Obj, f: Mor) -> Mor | None:
    """Least coCartesian ``phi`` out of ``x`` with ``p(phi) == f``."""
    return next((m for m in p.source.out_of(x) if p.ar(m) == f and is_cocartesian(p, m)), None)


def cartesian_lift(p: FinFunctor, y: Obj, f: Mor) -> Mor | None:
    """Least Cartesian ``phi`` into ``y`` with ``p(phi) == f``."""
    return next((m for m in p.source.into(y) if p.ar(m) == f and is_cartesian(p, m)), None)


def check_bicartesian(p: FinFunctor) -> Report:
    D, C = p.source, p.target
    rep = Report(title="biCartesian fibration")
    w = None
    for x in D.objects:
        for f in C.out_of(p.ob(x)):
            if cocartesian_lift(p, x, f) is None:
                w = (x, f)
                break
        if w:
            break
    rep.add("coCartesian lifts exist", w is None, w, "coCartesian fibration")
    w = None
    for y in D.objects:
        for f in C.into(p.ob(y)):
            if cartesian_lift(p, y, f) is None:
                w = (y, f)
                break
        if w:
            break
    rep.add("Cartesian lifts exist", w is None, w, "Cartesian fibration")
    return rep


def cocartesian_uniqueness_witness(p: FinFunctor) -> tuple | None:
    """Exhaustive check that ``gamma∘phi == gamma'∘phi`` and ``p gamma == p gamma'``
    force ``gamma == gamma'`` for coCartesian ``phi`` (and the Cartesian dual)."""
    D = p.source
    for phi in D.morphisms:
        flags = classify_cartesian(p, phi)
        if flags["cocartesian"]:
            outs = D.out_of(D.tgt(phi))
            for i, g1 in enumerate(outs):
                for g2 in outs[i + 1:]:
                    if D.tgt(g1) == D.tgt(g2) and p.ar(g1) == p.ar(g2) and D.comp(g1, phi) == D.comp(g2, phi):
                        return ("cocartesian", phi, g1, g2)
        if flags["cartesian"]:
            ins = D.into(D.src(phi))
            for i, g1 in enumerate(ins):
                for g2 in ins[i + 1:]:
                    if D.src(g1) == D.src(g2) and p.ar(g1) == p.ar(g2) and D.comp(phi, g1) == D.comp(phi, g2):
                        return ("cartesian", phi, g1, g2)
    return None


# ---------------------------------------------------------------------------
# straightening


def fiber_category(p: FinFunctor, A: Obj) -> FinCat:
    D = p.source
    idA = p.target.id(A)
    objs = [x for x in D.objects if p.ob(x) == A]
    arrows = [a for a in D.arrows() if p.ob(a[1]) == A and p.ob(a[2]) == A and p.ar(a[0]) == idA]
    keep = {a[0] for a in arrows}
    table = {k: v for k, v in D.table.items() if k[0] in keep and k[1] in keep}
    return FinCat(objs, arrows, {x: D.id(x) for x in objs}, table, f"{D.name}|{fmt(A)}")


def _unique_over(p: FinFunctor, src: Obj, tgt: Obj, g: Mor, cond) -> Mor:
    hits = [m for m in p.source.hom(src, tgt) if p.ar(m) == g and cond(m)]
    if len(hits) != 1:
        raise CategoryError(f"expected a unique factorization {fmt(src)} -> {fmt(tgt)}, found {len(hits)}")
    return hits[0]


def straighten_cat(p: FinFunctor, check: bool = True, name: str = "") -> AdjCatFunctor:
    """Fibers are the literal fibers; ``f_!`` and ``f^*`` come from the least
    coCartesian and Cartesian lifts."""
    if check:
        rep = check_bicartesian(p)
        if not rep.ok:
            raise CategoryError(f"not a biCartesian fibration: {rep.first_failure().name}")
    D, C = p.source, p.target
    fibers = {A: fiber_category(p, A) for A in C.objects}
    colift: dict = {}
    clift: dict = {}
    for f in C.morphisms:
        A, B = C.src(f), C.tgt(f)
        for x in fibers[A].objects:
            colift[(f, x)] = cocartesian_lift(p, x, f)
        for y in fibers[B].objects:
            clift[(f, y)] = cartesian_lift(p, y, f)
    on_arrow = {}
    for f in C.morphisms:
        A, B = C.src(f), C.tgt(f)
        FA, FB = fibers[A], fibers[B]
        idA, idB = C.id(A), C.id(B)
        lo = {x: D.tgt(colift[(f, x)]) for x in FA.objects}
        lm = {}
        for a in FA.morphisms:
            x, x2 = FA.src(a), FA.tgt(a)
            target = D.comp(colift[(f, x2)], a)
            lm[a] = _unique_over(p, lo[x], lo[x2], idB, lambda m: D.comp(m, colift[(f, x)]) == target)
        ro = {y: D.src(clift[(f, y)]) for y in FB.objects}
        rm = {}
        for b in FB.morphisms:
            y, y2 = FB.src(b), FB.tgt(b)
            target = D.comp(b, clift[(f, y)])
            rm[b] = _unique_over(p, ro[y], ro[y2], idA, lambda m: D.comp(clift[(f, y2)], m) == target)
        unit = {x: _unique_over(p, x, ro[lo[x]], idA, lambda m: D.comp(clift[(f, lo[x])], m) == colift[(f, x)])
                for x in FA.objects}
        counit = {y: _unique_over(p, lo[ro[y]], y, idB, lambda m: D.comp(m, colift[(f, ro[y])]) == clift[(f, y)])
                  for y in FB.objects}
        L = FinFunctor(FA, FB, lo, lm, f"{fmt(f)}_!")
        R = FinFunctor(FB, FA, ro, rm, f"{fmt(f)}^*")
        on_arrow[f] = Adjunction(L, R, unit, counit, fmt(f))
    comp = {}
    for g, f in C.composable_pairs():
        gf = C.comp(g, f)
        Cc = C.tgt(g)
        cells = {}
        for x in fibers[C.src(f)].objects:
            fx = D.tgt(colift[(f, x)])
            two = D.comp(colift[(g, fx)], colift[(f, x)])
            src = D.tgt(colift[(gf, x)])
            cells[x] = _unique_over(p, src, D.tgt(two), C.id(Cc), lambda m: D.comp(m, colift[(gf, x)]) == two)
        comp[(g, f)] = cells
    ident = {A: {x: colift[(C.id(A), x)] for x in fibers[A].objects} for A in C.objects}
    return AdjCatFunctor(C, fibers, on_arrow, comp, ident, name or f"St({D.name})")


def fiber_renaming(G: GrothCat) -> dict:
    """Canonical identification of ``F(A)`` with the fiber of the total over ``A``:
    objects ``X -> (A, X)`` and morphisms ``a -> (id_A, X, a∘u^{-1})``."""
    F = G.functor
    out = {}
    for A in F.base.objects:
        FA = F.fiber[A]
        obj = {x: (A, x) for x in FA.objects}
        mor = {}
        for a in FA.morphisms:
            x = FA.src(a)
            mor[a] = (F.base.id(A), x, FA.comp(a, FA.inverse(F.id_iso[A][x])))
        out[A] = (obj, mor)
    return out


def compare_adjcat(F: AdjCatFunctor, G: AdjCatFunctor, renaming: Mapping) -> Report:
    """Compare two pseudo-functors over the same base through fiberwise
    renamings ``renaming[A] = (obj_map, mor_map)`` from ``F(A)`` to ``G(A)``.
    Checks that the renamings are isomorphisms and that ``f_!``, ``f^*``, units,
    counits and coherence cells agree on the nose."""
    rep = Report(title="pseudo-functor comparison")
    B = F.base
    rep.add("same base", B == G.base)
    if not rep.ok:
        return rep
    w = None
    for A in B.objects:
        om, mm = renaming[A]
        FA, GA = F.fiber[A], G.fiber[A]
        Phi = FinFunctor(FA, GA, om, mm)
        if (not validate_functor(Phi).ok or len(set(om.values())) != len(GA.objects)
                or len(set(mm.values())) != len(GA.morphisms) or len(FA.morphisms) != len(GA.morphisms)):
            w = A
            break
    rep.add("fiber renamings are isomorphisms", w is None, w)
    if w is not None:
        return rep

    def m_of(A, a):
        return renaming[A][1][a]

    def o_of(A, x):
        return renaming[A][0][x]

    w = None
    for f in B.morphisms:
        A, Bo = B.src(f), B.tgt(f)
        fa, ga = F.on_arrow[f], G.on_arrow[f]
        for x in F.fiber[A].objects:
            if o_of(Bo, fa.left.ob(x)) != ga.left.ob(o_of(A, x)) or m_of(A, fa.unit[x]) != ga.unit[o_of(A, x)]:
                w = ("left adjoint or unit", f, x)
                break
        for a in F.fiber[A].morphisms:
            if w:
                break
            if m_of(Bo, fa.left.ar(a)) != ga.left.ar(m_of(A, a)):
                w = ("left adjoint on morphisms", f, a)
        for y in F.fiber[Bo].objects:
            if w:
                break
            if o_of(A, fa.right.ob(y)) != ga.right.ob(o_of(Bo, y)) or m_of(Bo, fa.counit[y]) != ga.counit[o_of(Bo, y)]:
                w = ("right adjoint or counit", f, y)
        for b in F.fiber[Bo].morphisms:
            if w:
                break
            if m_of(A, fa.right.ar(b)) != ga.right.ar(m_of(Bo, b)):
                w = ("right adjoint on morphisms", f, b)
        if w:
            break
    rep.add("adjunctions agree", w is None, w)
    w = None
    for (g, f), cells in F.comp_iso.items():
        Cc = B.tgt(g)
        for x, m in cells.items():
            if m_of(Cc, m) != G.comp_iso[(g, f)][o_of(B.src(f), x)]:
                w = (g, f, x)
                break
        if w:
            break
    for A, cells in F.id_iso.items():
        if w:
            break
        for x, m in cells.items():
            if m_of(A, m) != G.id_iso[A][o_of(A, x)]:
                w = (A, x)
                break
    rep.add("coherence cells agree", w is None, w)
    return rep


def roundtrip_integrate_straighten(F: AdjCatFunctor) -> Report:
    """``straighten(integrate(F))`` compared with ``F`` through the canonical renaming."""
    G = integrate_cat(F)
    S = straighten_cat(G.projection)
    return compare_adjcat(F, S, fiber_renaming(G))


def total_isomorphism(p: FinFunctor, q: FinFunctor) -> dict | None:
    """A bijection of totals over the base commuting with projections, if the
    obvious name-free search finds one (used for the second roundtrip)."""
    from .fincat import extend_to_functor

    D, E = p.source, q.source
    if len(D.objects) != len(E.objects) or len(D.morphisms) != len(E.morphisms):
        return None
    objs = list(D.objects)
    choice: dict = {}
    used: set = set()

    def go(i):
        if i == len(objs):
            F = extend_to_functor(D, E, choice, lambda m, h: q.ar(h) == p.ar(m))
            if F is None or len(set(F.mor.values())) != len(E.morphisms):
                return None
            return F
        x = objs[i]
        for y in E.objects:
            if y in used or q.ob(y) != p.ob(x):
                continue
            if any(len(D.hom(x, z)) != len(E.hom(y, choice[z])) or len(D.hom(z, x)) != len(E.hom(choice[z], y))
                   for z in choice):
                continue
            if len(D.hom(x, x)) != len(E.hom(y, y)):
                continue
            choice[x] = y
            used.add(y)
            r = go(i + 1)
            if r is not None:
                return r
            del choice[x]
            used.discard(y)
        return None

    F = go(0)
    return None if F is None else {"obj": F.obj, "mor": F.mor}


def roundtrip_straighten_integrate(p: FinFunctor) -> Report:
    rep = Report(title="integrate after straighten")
    S = straighten_cat(p)
    G = integrate_cat(S)
    iso = total_isomorphism(p, G.projection)
    rep.add("total isomorphic over the base", iso is not None)
    if iso is not None and p.source.is_thin:
        # on thin totals the comparison is forced: (A, x) is sent to x
        forced = all(iso["obj"][x] == (p.ob(x), x) for x in p.source.objects)
        rep.add("isomorphism is the canonical one", forced)
    return rep


# ---------------------------------------------------------------------------
# relative (co)limits


def _as_cocone(base_cocone) -> Cone:
    if isinstance(base_cocone, Cone):
        return base_cocone
    if isinstance(base_cocone, FinFunctor):
        # functor out of the cocone shape J^▷ built by add_terminal
        E = base_cocone
        pt = E.source.objects[-1]
        J = [j for j in E.source.objects if j != pt]
        return Cone(E.ob(pt), tuple((j, E.ar(("θ", j))) for j in J))
    raise TypeError("expected a Cone or a functor out of a cocone shape")


def lifted_cocones(p: FinFunctor, delta: FinFunctor, base_cocone: Cone) -> list[Cone]:
    """All cocones on ``delta`` lying over ``base_cocone``."""
    D = p.source
    legs_over = dict(base_cocone.legs)
    out = []
    Dop = opposite(D)
    for cone in enumerate_cones(Dop, delta.op(), [z for z in D.objects if p.ob(z) == base_cocone.apex]):
        if all(p.ar(m) == legs_over[j] for j, m in cone.legs):
            out.append(cone)
    return out


def is_initial_lift(p: FinFunctor, cand: Cone, lifts: list[Cone], base_apex: Obj) -> tuple | None:
    """Witness lift through which ``cand`` does not factor uniquely over the identity."""
    D = p.source
    idB = p.target.id(base_apex)
    legs = dict(cand.legs)
    for other in lifts:
        n = sum(1 for h in D.hom(cand.apex, other.apex)
                if p.ar(h) == idB and all(D.comp(h, legs[j]) == m for j, m in other.legs))
        if n != 1:
            return (other.apex, n)
    return None


@dataclass
class RelativeColimit:
    cocone: Cone | None
    certified: bool
    competitors: int
    witness: tuple | None = None


def relative_colimit(p: FinFunctor, delta: FinFunctor, base_cocone, certify: bool = True) -> RelativeColimit:
    """Push each ``delta(j)`` along its base leg, take the colimit in the target
    fiber and compose. Certified initial by enumerating every lift."""
    base_cocone = _as_cocone(base_cocone)
    D, C = p.source, p.target
    J = delta.source
    B = base_cocone.apex
    legs = dict(base_cocone.legs)
    fib = fiber_category(p, B)
    idB = C.id(B)
    pushed = {}
    for j in J.objects:
        phi = cocartesian_lift(p, delta.ob(j), legs[j])
        if phi is None:
            return RelativeColimit(None, False, 0, ("no coCartesian lift", j))
        pushed[j] = phi
    obj = {j: D.tgt(pushed[j]) for j in J.objects}
    mor = {}
    for a in J.morphisms:
        j, k = J.src(a), J.tgt(a)
        target = D.comp(pushed[k], delta.ar(a))
        mor[a] = _unique_over(p, obj[j], obj[k], idB, lambda m: D.comp(m, pushed[j]) == target)
    diag = FinFunctor(J, fib, obj, mor)
    col = find_colimit(fib, diag)
    if col is None:
        return RelativeColimit(None, False, 0, ("no colimit in fiber", B))
    cl = dict(col.legs)
    cocone = Cone(col.apex, tuple((j, D.comp(cl[j], pushed[j])) for j in J.objects))
    if not certify:
        return RelativeColimit(cocone, False, 0)
    lifts = lifted_cocones(p, delta, base_cocone)
    w = is_initial_lift(p, cocone, lifts, B)
    return RelativeColimit(cocone, w is None, len(lifts), w)


def brute_relative_colimit(p: FinFunctor, delta: FinFunctor, base_cocone) -> Cone | None:
    """Oracle: first enumerated lift that is initial among all lifts."""
    base_cocone = _as_cocone(base_cocone)
    lifts = lifted_cocones(p, delta, base_cocone)
    for c in lifts:
        if is_initial_lift(p, c, lifts, base_cocone.apex) is None:
            return c
    return None


def relative_limit(p: FinFunctor, delta: FinFunctor, base_cone: Cone, certify: bool = True) -> RelativeColimit:
    """Dual of :func:`relative_colimit`, computed in opposite categories; the
    returned legs run from the apex to the diagram."""
    return relative_colimit(p.op(), delta.op(), base_cone, certify)
