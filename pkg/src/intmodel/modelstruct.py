"""Pre-model structures, lifting problems, the model category axioms,
functorial factorizations, replacements and Quillen adjunctions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .adjunction import Adjunction
from .fincat import (
    FinCat,
    Mor,
    Obj,
    arrow_category,
    bicompleteness,
    bounded_shape_bicompleteness,
    enumerate_retracts,
    extend_to_functor,
    lattice_report,
    squares,
)
from .report import Report, fmt


# ---------------------------------------------------------------------------
# classes


def closure(C: FinCat, gens: Iterable[Mor]) -> frozenset:
    """Smallest subcategory containing ``gens``, all identities and all isos."""
    out = set(gens) | set(C.identity.values()) | set(C.isos)
    frontier = list(out)
    while frontier:
        new = []
        for g in list(out):
            for f in frontier:
                for a, b in ((g, f), (f, g)):
                    h = C.table.get((a, b))
                    if h is not None and h not in out:
                        out.add(h)
                        new.append(h)
        frontier = new
    return frozenset(out)


def is_subcategory(C: FinCat, K: frozenset) -> tuple | None:
    """Witness that ``K`` is not a wide subcategory, or ``None``."""
    for a in C.objects:
        if C.id(a) not in K:
            return ("identity", a)
    ordered = [m for m in C.morphisms if m in K]
    for g in ordered:
        for f in ordered:
            h = C.table.get((g, f))
            if h is not None and h not in K:
                return ("composite", g, f)
    return None


@dataclass(frozen=True)
class PreModel:
    base: FinCat
    W: frozenset
    Cof: frozenset
    Fib: frozenset
    name: str = field(default="", compare=False)

    @classmethod
    def make(cls, base: FinCat, W, Cof, Fib, name: str = "", closed: bool = False) -> "PreModel":
        """Build from iterables; ``"all"``/``"none"`` are accepted. Isos are
        always inserted; with ``closed`` each class is closed under composition."""

        def norm(K):
            if K == "all":
                return frozenset(base.morphisms)
            if K == "none" or K is None:
                K = ()
            K = set(K) | set(base.isos)
            return closure(base, K) if closed else frozenset(K)

        return cls(base, norm(W), norm(Cof), norm(Fib), name)

    @property
    def trivcof(self) -> frozenset:
        return self.Cof & self.W

    @property
    def trivfib(self) -> frozenset:
        return self.Fib & self.W

    def classes(self) -> tuple[frozenset, frozenset, frozenset]:
        return self.W, self.Cof, self.Fib

    def flags(self, f: Mor) -> dict:
        return {"weq": f in self.W, "cof": f in self.Cof, "fib": f in self.Fib}

    def sorted_class(self, K: frozenset) -> list:
        return [f for f in self.base.morphisms if f in K]

    def __repr__(self) -> str:
        return f"PreModel({self.name or '?'} on {self.base.name})"


def validate_premodel(pm: PreModel) -> Report:
    rep = Report(title=f"pre-model {pm.name}")
    ids = set(pm.base.morphisms)
    for label, K in (("W", pm.W), ("Cof", pm.Cof), ("Fib", pm.Fib)):
        stray = sorted(K - ids, key=repr)
        rep.add(f"{label} consists of morphisms", not stray, stray[:1] or None)
        if not stray:
            w = is_subcategory(pm.base, K)
            rep.add(f"{label} is a subcategory", w is None, w)
    return rep


# ---------------------------------------------------------------------------
# lifting


def lifting_exists(C: FinCat, i: Mor, p: Mor, square: tuple[Mor, Mor]) -> Mor | None:
    """Diagonal ``h: tgt i -> src p`` with ``h∘i == top`` and ``p∘h == bottom``."""
    top, bottom = square
    if C.comp(p, top) != C.comp(bottom, i):
        raise ValueError(f"square {fmt(square)} does not commute for {fmt(i)}, {fmt(p)}")
    for h in C.hom(C.tgt(i), C.src(p)):
        if C.comp(h, i) == top and C.comp(p, h) == bottom:
            return h
    return None


def unliftable_square(C: FinCat, i: Mor, p: Mor) -> tuple | None:
    """A commuting square from ``i`` to ``p`` without a lift, or ``None``."""
    if C.is_thin:
        a, b, c, d = C.src(i), C.tgt(i), C.src(p), C.tgt(p)
        if C.leq(a, c) and C.leq(b, d) and not C.leq(b, c):
            return (C.hom(a, c)[0], C.hom(b, d)[0])
        return None
    for sq in squares(C, i, p):
        if lifting_exists(C, i, p, sq) is None:
            return sq
    return None


def has_llp(C: FinCat, i: Mor, p: Mor) -> bool:
    return unliftable_square(C, i, p) is None


def rlp(C: FinCat, K: Iterable[Mor]) -> frozenset:
    K = list(K)
    return frozenset(p for p in C.morphisms if all(has_llp(C, i, p) for i in K))


def llp(C: FinCat, K: Iterable[Mor]) -> frozenset:
    K = list(K)
    return frozenset(i for i in C.morphisms if all(has_llp(C, i, p) for p in K))


# ---------------------------------------------------------------------------
# functorial factorizations


@dataclass(frozen=True)
class FunctorialFactorization:
    """``f == second[f] ∘ first[f]`` through ``middle[f]``; ``middle_map`` sends
    each commuting square ``(f, g, u, v)`` to a morphism ``middle[f] -> middle[g]``."""

    middle: dict
    first: dict
    second: dict
    middle_map: dict

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.middle.items(), key=repr)))

    def triple(self, f: Mor) -> tuple:
        return self.middle[f], self.first[f], self.second[f]


def check_factorization(C: FinCat, fact: FunctorialFactorization, L: frozenset, R: frozenset,
                        label: str = "") -> Report:
    rep = Report(title=f"functorial factorization {label}")
    bad = None
    for f in C.morphisms:
        if f not in fact.middle:
            bad = ("missing", f)
            break
        m, l, r = fact.triple(f)
        if C.src(l) != C.src(f) or C.tgt(l) != m or C.src(r) != m or C.tgt(r) != C.tgt(f) or C.comp(r, l) != f:
            bad = ("not a factorization", f)
            break
    rep.add("factors every morphism", bad is None, bad)
    if bad:
        return rep
    badl = next((f for f in C.morphisms if fact.first[f] not in L), None)
    rep.add("first leg in left class", badl is None, badl)
    badr = next((f for f in C.morphisms if fact.second[f] not in R), None)
    rep.add("second leg in right class", badr is None, badr)
    A = arrow_category(C)
    nat = None
    for s in A.morphisms:
        f, g, u, v = s
        k = fact.middle_map.get(s)
        if (k is None or C.src(k) != fact.middle[f] or C.tgt(k) != fact.middle[g]
                or C.comp(k, fact.first[f]) != C.comp(fact.first[g], u)
                or C.comp(fact.second[g], k) != C.comp(v, fact.second[f])):
            nat = s
            break
    rep.add("middle map is natural", nat is None, nat)
    if nat is None and not C.is_thin:
        # on thin bases functoriality is automatic
        idb = next((f for f in A.objects if fact.middle_map[A.id(f)] != C.id(fact.middle[f])), None)
        rep.add("middle map preserves identities", idb is None, idb)
        cb = next(((t, s) for (t, s), ts in A.table.items()
                   if fact.middle_map[ts] != C.comp(fact.middle_map[t], fact.middle_map[s])), None)
        rep.add("middle map preserves composition", cb is None, cb)
    return rep


def _candidates(C: FinCat, f: Mor, L: frozenset, R: frozenset) -> list[tuple]:
    a, b = C.src(f), C.tgt(f)
    out = []
    for m in C.objects:
        for l in C.hom(a, m):
            if l not in L:
                continue
            for r in C.hom(m, b):
                if r in R and C.comp(r, l) == f:
                    out.append((m, l, r))
    return out


def complete_middle_map(C: FinCat, middle: dict, first: dict, second: dict) -> dict | None:
    """Canonically least functorial middle map for fixed factorizations."""
    A = arrow_category(C)
    if C.is_thin:
        out = {}
        for s in A.morphisms:
            hs = C.hom(middle[s[0]], middle[s[1]])
            if not hs:
                return None
            out[s] = hs[0]
        return out

    def allowed(s, k):
        f, g, u, v = s
        return C.comp(k, first[f]) == C.comp(first[g], u) and C.comp(second[g], k) == C.comp(v, second[f])

    F = extend_to_functor(A, C, middle, allowed)
    return None if F is None else F.mor


def search_functorial_factorization(C: FinCat, L: Iterable[Mor], R: Iterable[Mor],
                                    constraints: Mapping | None = None) -> FunctorialFactorization | None:
    """Search factorizations (smallest middle object first), then a middle map.

    ``constraints[f]`` is a partial triple ``(middle, first, second)``; entries
    given as None are free.
    """
    L, R = frozenset(L), frozenset(R)
    morphs = list(C.morphisms)
    cands = {f: _candidates(C, f, L, R) for f in morphs}
    for f, want in (constraints or {}).items():
        cands[f] = [c for c in cands[f] if all(w is None or w == x for w, x in zip(want, c))]
    if any(not c for c in cands.values()):
        return None
    sq_pairs: dict = {}
    for f in morphs:
        for g in morphs:
            sqs = list(squares(C, f, g))
            if sqs:
                sq_pairs.setdefault(f, []).append((g, sqs))
                if g != f:
                    sq_pairs.setdefault(g, []).append((f, None))
    choice: dict = {}

    def square_ok(f, g, sqs):
        mf, lf, rf = choice[f]
        mg, lg, rg = choice[g]
        for u, v in sqs:
            if not any(C.comp(k, lf) == C.comp(lg, u) and C.comp(rg, k) == C.comp(v, rf) for k in C.hom(mf, mg)):
                return False
        return True

    def locally_ok(f):
        for g, sqs in sq_pairs.get(f, ()):
            if g not in choice:
                continue
            if sqs is None:
                if not square_ok(g, f, list(squares(C, g, f))):
                    return False
            elif not square_ok(f, g, sqs):
                return False
        return True

    def go(i) -> Iterator[None]:
        if i == len(morphs):
            yield None
            return
        f = morphs[i]
        for c in cands[f]:
            choice[f] = c
            if locally_ok(f):
                yield from go(i + 1)
            del choice[f]

    for _ in go(0):
        middle = {f: choice[f][0] for f in morphs}
        first = {f: choice[f][1] for f in morphs}
        second = {f: choice[f][2] for f in morphs}
        mm = complete_middle_map(C, middle, first, second)
        if mm is not None:
            return FunctorialFactorization(middle, first, second, mm)
    return None


# ---------------------------------------------------------------------------
# model categories


@dataclass(frozen=True)
class ModelCat:
    structure: PreModel
    fact_cof_trivfib: FunctorialFactorization
    fact_trivcof_fib: FunctorialFactorization
    name: str = field(default="", compare=False)

    @property
    def base(self) -> FinCat:
        return self.structure.base

    @property
    def W(self) -> frozenset:
        return self.structure.W

    @property
    def Cof(self) -> frozenset:
        return self.structure.Cof

    @property
    def Fib(self) -> frozenset:
        return self.structure.Fib

    def is_cofibrant(self, x: Obj) -> bool:
        e = self.base.initial()
        return e is not None and self.base.hom(e, x)[0] in self.Cof

    def is_fibrant(self, x: Obj) -> bool:
        t = self.base.terminal()
        return t is not None and self.base.hom(x, t)[0] in self.Fib

    def cofibrant_objects(self) -> list:
        return [x for x in self.base.objects if self.is_cofibrant(x)]

    def fibrant_objects(self) -> list:
        return [x for x in self.base.objects if self.is_fibrant(x)]

    def __repr__(self) -> str:
        return f"ModelCat({self.name or self.structure.name or '?'} on {self.base.name})"


class ModelError(ValueError):
    pass


def make_model(pm: PreModel, f1: FunctorialFactorization | None = None,
               f2: FunctorialFactorization | None = None, name: str = "",
               constraints1: Mapping | None = None, constraints2: Mapping | None = None) -> ModelCat:
    """Attach factorizations (searched when omitted, subject to optional
    per-morphism constraints). Axioms are not checked here."""
    C = pm.base
    if f1 is None:
        f1 = search_functorial_factorization(C, pm.Cof, pm.trivfib, constraints1)
    if f2 is None:
        f2 = search_functorial_factorization(C, pm.trivcof, pm.Fib, constraints2)
    if f1 is None or f2 is None:
        raise ModelError(f"no functorial factorization for {pm.name or 'structure'}")
    return ModelCat(pm, f1, f2, name or pm.name)


def check_model_axioms(pm: PreModel, f1: FunctorialFactorization | None = None,
                       f2: FunctorialFactorization | None = None, search: bool = True,
                       shape_bound: int | None = None) -> Report:
    """One group of checks per axiom; check names start with the axiom label."""
    C = pm.base
    rep = Report(title=f"model axioms {pm.name}")
    rep.extend(validate_premodel(pm), "classes: ")
    if not rep.ok:
        return rep

    # MC1
    if shape_bound is not None:
        rep.extend(bounded_shape_bicompleteness(C, shape_bound), "MC1 bicompleteness: ")
    elif C.is_thin:
        rep.extend(lattice_report(C), "MC1 bicompleteness: ")
    else:
        rep.extend(bicompleteness(C), "MC1 bicompleteness: ")
    for c in rep.checks:
        if c.name.startswith("MC1"):
            c.anchor = "MC1 bicompleteness"

    # MC2
    bad = None
    for g, f in C.composable_pairs():
        h = C.comp(g, f)
        n = (g in pm.W) + (f in pm.W) + (h in pm.W)
        if n == 2:
            bad = (g, f)
            break
    rep.add("MC2 two-out-of-three", bad is None, bad, "MC2 two-out-of-three")

    # MC3
    missing_iso = sorted((f for f in C.isos if f not in pm.W or f not in pm.Cof or f not in pm.Fib), key=C.mor_index.get)
    rep.add("MC3 isomorphisms in every class", not missing_iso, missing_iso[:1] or None, "MC3 retracts")
    for label, K in (("W", pm.W), ("Cof", pm.Cof), ("Fib", pm.Fib)):
        w = None
        if not C.is_thin or C.isos - set(C.identity.values()):
            among = [g for g in C.morphisms if g in K]
            for f in C.morphisms:
                if f in K:
                    continue
                rs = enumerate_retracts(C, f, among)
                if rs:
                    w = (f, rs[0].g)
                    break
        rep.add(f"MC3 {label} closed under retracts", w is None, w, "MC3 retracts")

    # MC4
    for label, Lc, Rc in (("trivial cofibrations lift against fibrations", pm.trivcof, pm.Fib),
                          ("cofibrations lift against trivial fibrations", pm.Cof, pm.trivfib)):
        w = None
        for i in C.morphisms:
            if i not in Lc:
                continue
            for p in C.morphisms:
                if p in Rc and (sq := unliftable_square(C, i, p)) is not None:
                    w = (i, p, sq)
                    break
            if w:
                break
        rep.add(f"MC4 {label}", w is None, w, "MC4 liftings")

    # MC5
    for label, fact, Lc, Rc in (("(Cof, Fib∩W)", f1, pm.Cof, pm.trivfib),
                                ("(Cof∩W, Fib)", f2, pm.trivcof, pm.Fib)):
        if fact is None and search:
            fact = search_functorial_factorization(C, Lc, Rc)
            if fact is None:
                rep.add(f"MC5 functorial factorization {label} exists", False, None, "MC5 factorizations")
                continue
        if fact is None:
            rep.add(f"MC5 functorial factorization {label} exists", False, None, "MC5 factorizations")
            continue
        sub = check_factorization(C, fact, Lc, Rc, label)
        for c in sub.checks:
            rep.add(f"MC5 {label} {c.name}", c.passed, c.witness, "MC5 factorizations")
    return rep


def check_model(mc: ModelCat, shape_bound: int | None = None) -> Report:
    return check_model_axioms(mc.structure, mc.fact_cof_trivfib, mc.fact_trivcof_fib, False, shape_bound)


def replacement(mc: ModelCat, x: Obj, kind: str) -> tuple[Obj, Mor]:
    """``("cofibrant")``: ``(X^cof, X^cof -> X)``; ``("fibrant")``: ``(X^fib, X -> X^fib)``."""
    C = mc.base
    if kind == "cofibrant":
        e = C.initial()
        if e is None:
            raise ModelError("no initial object")
        f = C.hom(e, x)[0]
        return mc.fact_cof_trivfib.middle[f], mc.fact_cof_trivfib.second[f]
    if kind == "fibrant":
        t = C.terminal()
        if t is None:
            raise ModelError("no terminal object")
        f = C.hom(x, t)[0]
        return mc.fact_trivcof_fib.middle[f], mc.fact_trivcof_fib.first[f]
    raise ValueError("kind must be 'cofibrant' or 'fibrant'")


def trivial_model(C: FinCat, name: str = "") -> ModelCat:
    """W = isos, Cof = Fib = all."""
    return make_model(PreModel.make(C, (), "all", "all", name or f"triv({C.name})"))


# ---------------------------------------------------------------------------
# Quillen adjunctions


@dataclass
class QuillenAdjunctionCert:
    adj: Adjunction
    source: ModelCat
    target: ModelCat
    is_adjunction_quillen: bool
    is_equivalence: bool | None
    report: Report


def _preserves(F, K_src: frozenset, K_tgt: frozenset, order) -> Mor | None:
    return next((f for f in order if f in K_src and F.ar(f) not in K_tgt), None)


def check_left_quillen(adj: Adjunction, src: ModelCat, tgt: ModelCat) -> Report:
    rep = Report(title="left Quillen")
    L = adj.left
    ms = src.base.morphisms
    w = _preserves(L, src.Cof, tgt.Cof, ms)
    rep.add("left adjoint preserves cofibrations", w is None, w, "left Quillen functor")
    w = _preserves(L, src.structure.trivcof, tgt.structure.trivcof, ms)
    rep.add("left adjoint preserves trivial cofibrations", w is None, w, "left Quillen functor")
    return rep


def check_right_quillen(adj: Adjunction, src: ModelCat, tgt: ModelCat) -> Report:
    rep = Report(title="right Quillen")
    R = adj.right
    ms = tgt.base.morphisms
    w = _preserves(R, tgt.Fib, src.Fib, ms)
    rep.add("right adjoint preserves fibrations", w is None, w, "right Quillen functor")
    w = _preserves(R, tgt.structure.trivfib, src.structure.trivfib, ms)
    rep.add("right adjoint preserves trivial fibrations", w is None, w, "right Quillen functor")
    return rep


def derived_unit(adj: Adjunction, tgt: ModelCat, x: Obj) -> Mor:
    """``X -> R(LX) -> R((LX)^fib)``."""
    _, j = replacement(tgt, adj.left.ob(x), "fibrant")
    return adj.C.comp(adj.right.ar(j), adj.unit[x])


def derived_counit(adj: Adjunction, src: ModelCat, y: Obj) -> Mor:
    """``L((RY)^cof) -> L(RY) -> Y``."""
    _, q = replacement(src, adj.right.ob(y), "cofibrant")
    return adj.D.comp(adj.counit[y], adj.left.ar(q))


def check_quillen(adj: Adjunction, src: ModelCat, tgt: ModelCat, mode: str = "adjunction") -> QuillenAdjunctionCert:
    rep = Report(title="Quillen adjunction")
    rep.extend(check_left_quillen(adj, src, tgt))
    quillen = rep.ok
    equiv = None
    if mode == "equivalence":
        w = None
        for x in src.cofibrant_objects():
            d = derived_unit(adj, tgt, x)
            if d not in src.W:
                w = (x, d)
                break
        rep.add("derived unit is a weak equivalence on cofibrant objects", w is None, w, "Quillen equivalence")
        w2 = None
        for y in tgt.fibrant_objects():
            d = derived_counit(adj, src, y)
            if d not in tgt.W:
                w2 = (y, d)
                break
        rep.add("derived counit is a weak equivalence on fibrant objects", w2 is None, w2, "Quillen equivalence")
        equiv = quillen and w is None and w2 is None
    elif mode != "adjunction":
        raise ValueError("mode must be 'adjunction' or 'equivalence'")
    return QuillenAdjunctionCert(adj, src, tgt, quillen, equiv, rep)


# ---------------------------------------------------------------------------
# enumeration


def subcategories(C: FinCat) -> list[frozenset]:
    """All wide subcategories containing every iso, largest first."""
    free = [f for f in C.morphisms if f not in C.isos]
    base = set(C.isos) | set(C.identity.values())
    out = []
    for bits in itertools.product((True, False), repeat=len(free)):
        K = frozenset(base | {f for f, b in zip(free, bits) if b})
        if is_subcategory(C, K) is None and closure(C, K) == K:
            out.append(K)
    return out


def _two_of_three(C: FinCat, W: frozenset) -> bool:
    for g, f in C.composable_pairs():
        if (g in W) + (f in W) + (C.comp(g, f) in W) == 2:
            return False
    return True


def enumerate_model_structures(C: FinCat, prune: bool = True, shape_bound: int | None = None) -> list[ModelCat]:
    """All model structures on ``C``, ordered by (W, Cof) from largest classes down.

    With ``prune`` the fibrations are taken to be the maps with the right
    lifting property against trivial cofibrations, which holds in every model
    category by the retract argument; otherwise every triple is tried.
    """
    if C.is_thin:
        if not lattice_report(C).ok:
            return []
    elif not bicompleteness(C).ok:
        return []
    subs = subcategories(C)
    out = []
    for W in subs:
        if not _two_of_three(C, W):
            continue
        for Cof in subs:
            fibs = [rlp(C, Cof & W)] if prune else subs
            for Fib in fibs:
                if prune and (Fib not in subs or llp(C, Fib & W) != Cof):
                    continue
                pm = PreModel(C, W, Cof, Fib, f"{C.name}#{len(out)}")
                f1 = search_functorial_factorization(C, Cof, Fib & W)
                f2 = search_functorial_factorization(C, Cof & W, Fib)
                if f1 is None or f2 is None:
                    continue
                if check_model_axioms(pm, f1, f2, False, shape_bound).ok:
                    out.append(ModelCat(pm, f1, f2, pm.name))
    return out
