"""Adjunctions between finite categories, adjoint transposes and
pseudo-transformations of adjunctions."""

from __future__ import annotations

from typing import Mapping

from .fincat import (
    CategoryError,
    FinCat,
    FinFunctor,
    Mor,
    NatTrans,
    Obj,
    compose_functors,
    identity_functor,
    is_nat_iso,
    validate_functor,
    validate_nat_trans,
)
from .report import Report, fmt


class Adjunction:
    """``left: C -> D`` left adjoint to ``right: D -> C``.

    ``unit[a]: a -> R L a`` and ``counit[b]: L R b -> b``.
    """

    def __init__(self, left: FinFunctor, right: FinFunctor, unit: Mapping, counit: Mapping, name: str = ""):
        self.left = left
        self.right = right
        self.unit = dict(unit.components if isinstance(unit, NatTrans) else unit)
        self.counit = dict(counit.components if isinstance(counit, NatTrans) else counit)
        self.name = name

    @property
    def C(self) -> FinCat:
        return self.left.source

    @property
    def D(self) -> FinCat:
        return self.left.target

    def unit_nat(self) -> NatTrans:
        return NatTrans(identity_functor(self.C), compose_functors(self.right, self.left), self.unit)

    def counit_nat(self) -> NatTrans:
        return NatTrans(compose_functors(self.left, self.right), identity_functor(self.D), self.counit)

    def transpose(self, phi: Mor, a: Obj | None = None) -> Mor:
        """``phi: L a -> b`` goes to ``R(phi)∘unit[a]: a -> R b``."""
        if a is None:
            a = self._preimage(self.D.src(phi))
        elif self.left.ob(a) != self.D.src(phi):
            raise CategoryError(f"{fmt(phi)} does not start at L({fmt(a)})")
        return self.C.comp(self.right.ar(phi), self.unit[a])

    def untranspose(self, psi: Mor, b: Obj | None = None) -> Mor:
        """``psi: a -> R b`` goes to ``counit[b]∘L(psi): L a -> b``."""
        if b is None:
            tgt = self.C.tgt(psi)
            cands = [y for y in self.D.objects if self.right.ob(y) == tgt]
            if len(cands) != 1:
                raise CategoryError(f"target of {fmt(psi)} is R of {len(cands)} objects; pass b explicitly")
            b = cands[0]
        elif self.right.ob(b) != self.C.tgt(psi):
            raise CategoryError(f"{fmt(psi)} does not end at R({fmt(b)})")
        return self.D.comp(self.counit[b], self.left.ar(psi))

    def _preimage(self, x: Obj) -> Obj:
        cands = [a for a in self.C.objects if self.left.ob(a) == x]
        if len(cands) != 1:
            raise CategoryError(f"{fmt(x)} is L of {len(cands)} objects; pass a explicitly")
        return cands[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Adjunction):
            return NotImplemented
        return (self.left == other.left and self.right == other.right
                and self.unit == other.unit and self.counit == other.counit)

    def __hash__(self) -> int:
        return hash((self.left, self.right))

    def __repr__(self) -> str:
        return f"Adjunction({self.name or '?'}: {self.C.name} <-> {self.D.name})"


def check_adjunction(adj: Adjunction) -> Report:
    rep = Report(title=f"adjunction {adj.name}")
    L, R = adj.left, adj.right
    C, D = adj.C, adj.D
    rep.add("directions match", R.source == D and R.target == C)
    if not rep.ok:
        return rep
    rep.extend(validate_functor(L), "left: ")
    rep.extend(validate_functor(R), "right: ")
    if not rep.ok:
        return rep
    rep.extend(validate_nat_trans(adj.unit_nat()), "unit: ")
    rep.extend(validate_nat_trans(adj.counit_nat()), "counit: ")
    if not rep.ok:
        return rep
    t1 = next((a for a in C.objects
               if D.comp(adj.counit[L.ob(a)], L.ar(adj.unit[a])) != D.id(L.ob(a))), None)
    rep.add("triangle identity on L", t1 is None, t1)
    t2 = next((b for b in D.objects
               if C.comp(R.ar(adj.counit[b]), adj.unit[R.ob(b)]) != C.id(R.ob(b))), None)
    rep.add("triangle identity on R", t2 is None, t2)
    rep.add("hom bijection", (w := hom_bijection_witness(adj)) is None, w)
    return rep


def hom_bijection_witness(adj: Adjunction) -> tuple | None:
    """First pair ``(a, b)`` where ``phi -> R(phi)∘unit[a]`` is not a bijection."""
    L, R, C, D = adj.left, adj.right, adj.C, adj.D
    for a in C.objects:
        for b in D.objects:
            src = D.hom(L.ob(a), b)
            tgt = C.hom(a, R.ob(b))
            image = {C.comp(R.ar(phi), adj.unit[a]) for phi in src}
            if len(image) != len(src) or len(src) != len(tgt):
                return (a, b)
    return None


def identity_adjunction(C: FinCat) -> Adjunction:
    I = identity_functor(C)
    ids = {a: C.id(a) for a in C.objects}
    return Adjunction(I, I, ids, ids, f"id_{C.name}")


def _is_universal_counit(L: FinFunctor, c: Obj, eps: Mor, b: Obj) -> bool:
    """Is ``eps: L c -> b`` a terminal arrow from ``L`` to ``b``?"""
    C, D = L.source, L.target
    for a in C.objects:
        for phi in D.hom(L.ob(a), b):
            n = sum(1 for psi in C.hom(a, c) if D.comp(eps, L.ar(psi)) == phi)
            if n != 1:
                return False
    return True


def from_counit(L: FinFunctor, r_obj: Mapping, counit: Mapping, name: str = "") -> Adjunction:
    """Complete ``L`` to an adjunction from the right adjoint's object map and
    universal counit components; the right functor's morphism map and the unit
    are forced by universality."""
    C, D = L.source, L.target
    r_mor = {}
    for g in D.morphisms:
        b, b2 = D.src(g), D.tgt(g)
        target = D.comp(g, counit[b])
        hits = [psi for psi in C.hom(r_obj[b], r_obj[b2]) if D.comp(counit[b2], L.ar(psi)) == target]
        if len(hits) != 1:
            raise CategoryError(f"counit is not universal at {fmt(b2)} (arrow {fmt(g)})")
        r_mor[g] = hits[0]
    R = FinFunctor(D, C, r_obj, r_mor, f"{L.name}^R")
    unit = {}
    for a in C.objects:
        la = L.ob(a)
        hits = [psi for psi in C.hom(a, r_obj[la]) if D.comp(counit[la], L.ar(psi)) == D.id(la)]
        if len(hits) != 1:
            raise CategoryError(f"counit is not universal at {fmt(la)}")
        unit[a] = hits[0]
    return Adjunction(L, R, unit, counit, name)


def find_adjoint(F: FinFunctor, side: str) -> Adjunction | None:
    """Canonically least adjoint partner of ``F``.

    ``side="right"`` treats ``F`` as the left adjoint and searches for its
    right adjoint; ``side="left"`` the other way round.
    """
    if side == "right":
        C, D = F.source, F.target
        r_obj, counit = {}, {}
        for b in D.objects:
            found = None
            for c in C.objects:
                for eps in D.hom(F.ob(c), b):
                    if _is_universal_counit(F, c, eps, b):
                        found = (c, eps)
                        break
                if found:
                    break
            if found is None:
                return None
            r_obj[b], counit[b] = found
        adj = from_counit(F, r_obj, counit, F.name and f"{F.name}⊣")
        return adj if check_adjunction(adj).ok else None
    if side == "left":
        dual = find_adjoint(F.op(), "right")
        if dual is None:
            return None
        # L ⊣ F corresponds to F^op ⊣ L^op with unit and counit swapped
        L = FinFunctor(F.target, F.source, dual.right.obj, dual.right.mor, f"⊣{F.name}" if F.name else "")
        return Adjunction(L, F, dual.counit, dual.unit, "")
    raise ValueError("side must be 'left' or 'right'")


def from_functors(L: FinFunctor, R: FinFunctor, name: str = "") -> Adjunction | None:
    """Find unit and counit making ``L ⊣ R``, or ``None`` if there are none."""
    C, D = L.source, L.target
    if R.source != D or R.target != C:
        return None
    objs = list(D.objects)
    cands = {b: [e for e in D.hom(L.ob(R.ob(b)), b) if _is_universal_counit(L, R.ob(b), e, b)] for b in objs}
    counit: dict = {}

    def natural_at(b):
        for g in D.morphisms:
            x, y = D.src(g), D.tgt(g)
            if x in counit and y in counit and b in (x, y):
                if D.comp(g, counit[x]) != D.comp(counit[y], L.ar(R.ar(g))):
                    return False
        return True

    def go(i):
        if i == len(objs):
            return True
        b = objs[i]
        for e in cands[b]:
            counit[b] = e
            if natural_at(b) and go(i + 1):
                return True
            del counit[b]
        return False

    if not go(0):
        return None
    try:
        adj = from_counit(L, R.obj, counit, name)
    except CategoryError:
        return None
    if adj.right.mor != R.mor:
        return None
    adj.right = R
    return adj if check_adjunction(adj).ok else None


def galois_check(L: FinFunctor, R: FinFunctor) -> tuple | None:
    """Thin categories: first ``(a, b)`` violating ``L a <= b iff a <= R b``."""
    C, D = L.source, L.target
    for a in C.objects:
        for b in D.objects:
            if D.leq(L.ob(a), b) != C.leq(a, R.ob(b)):
                return (a, b)
    return None


def compose_adjunctions(a1: Adjunction, a2: Adjunction, name: str = "") -> Adjunction:
    """``a1: C -> D`` then ``a2: D -> E`` gives ``L2 L1 ⊣ R1 R2``."""
    if a1.D != a2.C:
        raise CategoryError("adjunctions are not composable")
    L = compose_functors(a2.left, a1.left)
    R = compose_functors(a1.right, a2.right)
    C, E = a1.C, a2.D
    unit = {a: C.comp(a1.right.ar(a2.unit[a1.left.ob(a)]), a1.unit[a]) for a in C.objects}
    counit = {e: E.comp(a2.counit[e], a2.left.ar(a1.counit[a2.right.ob(e)])) for e in E.objects}
    return Adjunction(L, R, unit, counit, name or f"{a2.name}∘{a1.name}")


class AdjPseudoTrans:
    """``(sigma, tau): f ⊣ u => f' ⊣ u'`` with ``sigma: f => f'`` and
    ``tau: u' => u`` natural isomorphisms."""

    def __init__(self, source: Adjunction, target: Adjunction, sigma: Mapping, tau: Mapping):
        self.source = source
        self.target = target
        self.sigma = dict(sigma)
        self.tau = dict(tau)


def identity_pseudo_trans(adj: Adjunction) -> AdjPseudoTrans:
    return AdjPseudoTrans(adj, adj, {c: adj.D.id(adj.left.ob(c)) for c in adj.C.objects},
                          {d: adj.C.id(adj.right.ob(d)) for d in adj.D.objects})


def check_adj_pseudo_trans(t: AdjPseudoTrans) -> Report:
    s, s2 = t.source, t.target
    C, D = s.C, s.D
    rep = Report(title="pseudo-transformation of adjunctions")
    sig = NatTrans(s.left, s2.left, t.sigma)
    tau = NatTrans(s2.right, s.right, t.tau)
    rep.extend(validate_nat_trans(sig), "sigma: ")
    rep.extend(validate_nat_trans(tau), "tau: ")
    if not rep.ok:
        return rep
    rep.add("sigma invertible", is_nat_iso(sig))
    rep.add("tau invertible", is_nat_iso(tau))
    bad = None
    for c in C.objects:
        for d in D.objects:
            for psi in C.hom(c, s2.right.ob(d)):
                top = D.comp(D.comp(s2.counit[d], s2.left.ar(psi)), t.sigma[c])
                bottom = D.comp(s.counit[d], s.left.ar(C.comp(t.tau[d], psi)))
                if top != bottom:
                    bad = (c, d)
                    break
            if bad:
                break
        if bad:
            break
    rep.add("hom-set square commutes", bad is None, bad)
    return rep


def find_pseudo_trans(source: Adjunction, target: Adjunction) -> AdjPseudoTrans | None:
    """Search for a pseudo-transformation; ``sigma`` determines ``tau`` as its mate."""
    from .fincat import find_natural_iso

    sig = find_natural_iso(source.left, target.left)
    if sig is None:
        return None
    tau = mate_of_left(source, target, sig.components)
    if tau is None:
        return None
    t = AdjPseudoTrans(source, target, sig.components, tau)
    return t if check_adj_pseudo_trans(t).ok else None


def mate_of_left(source: Adjunction, target: Adjunction, sigma: Mapping) -> dict | None:
    """Components ``tau[d]: u' d -> u d`` determined by ``sigma`` via the hom square."""
    C, D = source.C, source.D
    tau = {}
    for d in D.objects:
        ud2 = target.right.ob(d)
        # tau_d is the transpose (for source) of counit'_d ∘ sigma_{u'd}
        phi = D.comp(target.counit[d], sigma[ud2])
        tau[d] = C.comp(source.right.ar(phi), source.unit[ud2])
    return tau
