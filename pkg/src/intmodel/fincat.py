"""Finite categories given by explicit composition tables.

Objects and morphisms are arbitrary hashable identifiers (strings or nested
tuples of strings). The order in which they are listed is their canonical
order: every search in the package walks candidates in this order, so every
"pick a witness" answer is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .report import Report, fmt

Obj = Hashable
Mor = Hashable


class CategoryError(ValueError):
    """Raised when data does not describe a valid category or functor."""


class CycleError(CategoryError):
    def __init__(self, cycle: Sequence[Obj]):
        self.cycle = list(cycle)
        super().__init__("order relation has a cycle: " + " < ".join(fmt(c) for c in self.cycle))


class FinCat:
    """A finite category.

    Parameters
    ----------
    objects : sequence of object identifiers, in canonical order.
    arrows : sequence of ``(id, source, target)`` triples, in canonical order.
        Identities must be listed too.
    identity : mapping object -> identity morphism id.
    table : mapping ``(g, f) -> g∘f`` defined exactly on composable pairs.
    """

    def __init__(
        self,
        objects: Iterable[Obj],
        arrows: Iterable[tuple[Mor, Obj, Obj]],
        identity: Mapping[Obj, Mor],
        table: Mapping[tuple[Mor, Mor], Mor],
        name: str = "",
    ):
        self.objects: tuple = tuple(objects)
        arrows = list(arrows)
        self.morphisms: tuple = tuple(a[0] for a in arrows)
        self._src = {a[0]: a[1] for a in arrows}
        self._tgt = {a[0]: a[2] for a in arrows}
        self.identity: dict = dict(identity)
        self.table: dict = dict(table)
        self.name = name
        self.obj_index = {x: i for i, x in enumerate(self.objects)}
        self.mor_index = {f: i for i, f in enumerate(self.morphisms)}
        homs: dict[tuple, list] = {}
        for f in self.morphisms:
            homs.setdefault((self._src[f], self._tgt[f]), []).append(f)
        self._hom = {k: tuple(v) for k, v in homs.items()}

    # -- basic structure -------------------------------------------------
    def src(self, f: Mor) -> Obj:
        return self._src[f]

    def tgt(self, f: Mor) -> Obj:
        return self._tgt[f]

    def id(self, a: Obj) -> Mor:
        return self.identity[a]

    def comp(self, g: Mor, f: Mor) -> Mor:
        """Return ``g∘f``."""
        try:
            return self.table[(g, f)]
        except KeyError:
            raise CategoryError(f"{fmt(g)} . {fmt(f)} is not composable in {self.name or 'category'}") from None

    def chain(self, *fs: Mor) -> Mor:
        """Compose right to left: ``chain(h, g, f) == h∘g∘f``."""
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.comp(g, out)
        return out

    def hom(self, a: Obj, b: Obj) -> tuple:
        return self._hom.get((a, b), ())

    def is_identity(self, f: Mor) -> bool:
        return self.identity.get(self._src[f]) == f

    @cached_property
    def non_identities(self) -> tuple:
        return tuple(f for f in self.morphisms if not self.is_identity(f))

    @cached_property
    def _out(self) -> dict:
        d: dict = {a: [] for a in self.objects}
        for f in self.morphisms:
            d.setdefault(self._src[f], []).append(f)
        return d

    @cached_property
    def _in(self) -> dict:
        d: dict = {a: [] for a in self.objects}
        for f in self.morphisms:
            d.setdefault(self._tgt[f], []).append(f)
        return d

    def out_of(self, a: Obj) -> list:
        return self._out.get(a, [])

    def into(self, b: Obj) -> list:
        return self._in.get(b, [])

    def composable_pairs(self) -> Iterator[tuple[Mor, Mor]]:
        """Pairs ``(g, f)`` with ``tgt f == src g`` in canonical order of f, then g."""
        for f in self.morphisms:
            for g in self.out_of(self._tgt[f]):
                yield g, f

    @cached_property
    def is_thin(self) -> bool:
        return all(len(v) <= 1 for v in self._hom.values())

    def leq(self, a: Obj, b: Obj) -> bool:
        return bool(self.hom(a, b))

    def inverse(self, f: Mor) -> Mor | None:
        a, b = self._src[f], self._tgt[f]
        for g in self.hom(b, a):
            if self.table.get((g, f)) == self.identity[a] and self.table.get((f, g)) == self.identity[b]:
                return g
        return None

    @cached_property
    def isos(self) -> frozenset:
        return frozenset(f for f in self.morphisms if self.inverse(f) is not None)

    def is_iso(self, f: Mor) -> bool:
        return f in self.isos

    def initial_objects(self) -> list:
        return [a for a in self.objects if all(len(self.hom(a, b)) == 1 for b in self.objects)]

    def terminal_objects(self) -> list:
        return [b for b in self.objects if all(len(self.hom(a, b)) == 1 for a in self.objects)]

    def initial(self) -> Obj | None:
        xs = self.initial_objects()
        return xs[0] if xs else None

    def terminal(self) -> Obj | None:
        xs = self.terminal_objects()
        return xs[0] if xs else None

    def arrows(self) -> list[tuple[Mor, Obj, Obj]]:
        return [(f, self._src[f], self._tgt[f]) for f in self.morphisms]

    def renamed(self, name: str) -> "FinCat":
        return FinCat(self.objects, self.arrows(), self.identity, self.table, name)

    # -- equality --------------------------------------------------------
    def _key(self):
        return (self.objects, tuple(self.arrows()), tuple(sorted(self.identity.items(), key=repr)),
                frozenset(self.table.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinCat):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash((self.objects, self.morphisms))

    def __repr__(self) -> str:
        return f"FinCat({self.name or '?'}: {len(self.objects)} objects, {len(self.morphisms)} morphisms)"


# ---------------------------------------------------------------------------
# validation


def validate_category(cat: FinCat) -> Report:
    """Check the category axioms exhaustively; each violation carries a witness."""
    rep = Report(title=f"category {cat.name}")
    objs = set(cat.objects)
    bad_ends = [f for f in cat.morphisms if cat._src[f] not in objs or cat._tgt[f] not in objs]
    rep.add("endpoints are objects", not bad_ends, bad_ends[:1] or None)
    dup = len(set(cat.morphisms)) != len(cat.morphisms) or len(objs) != len(cat.objects)
    rep.add("identifiers unique", not dup)
    bad_id = [a for a in cat.objects
              if a not in cat.identity or cat.identity[a] not in cat._src
              or cat._src[cat.identity[a]] != a or cat._tgt[cat.identity[a]] != a]
    rep.add("identity arrows", not bad_id, bad_id[0] if bad_id else None)
    if bad_ends or bad_id or dup:
        return rep

    missing, extra, wrong = [], [], []
    for g in cat.morphisms:
        for f in cat.morphisms:
            key = (g, f)
            composable = cat._tgt[f] == cat._src[g]
            if composable and key not in cat.table:
                missing.append(key)
            elif not composable and key in cat.table:
                extra.append(key)
            elif composable:
                h = cat.table[key]
                if h not in cat._src or cat._src[h] != cat._src[f] or cat._tgt[h] != cat._tgt[g]:
                    wrong.append(key)
    rep.add("composition is total on composable pairs", not missing, missing[0] if missing else None)
    rep.add("no composites for non-composable pairs", not extra, extra[0] if extra else None)
    rep.add("composites have correct endpoints", not wrong, wrong[0] if wrong else None)
    if missing or wrong:
        return rep

    unit_bad = None
    for f in cat.morphisms:
        if cat.table[(f, cat.identity[cat._src[f]])] != f or cat.table[(cat.identity[cat._tgt[f]], f)] != f:
            unit_bad = f
            break
    rep.add("identities are two-sided units", unit_bad is None, unit_bad)

    assoc_bad = None
    for g, f in cat.composable_pairs():
        gf = cat.table[(g, f)]
        for h in cat.out_of(cat._tgt[g]):
            if cat.table[(h, gf)] != cat.table[(cat.table[(h, g)], f)]:
                assoc_bad = (h, g, f)
                break
        if assoc_bad:
            break
    rep.add("composition is associative", assoc_bad is None, assoc_bad)
    return rep


def checked(cat: FinCat) -> FinCat:
    rep = validate_category(cat)
    if not rep.ok:
        c = rep.first_failure()
        raise CategoryError(f"invalid category {cat.name}: {c.name} (witness {fmt(c.witness)})")
    return cat


# ---------------------------------------------------------------------------
# constructors


def build_poset(order: Iterable[tuple[Obj, Obj]], objects: Iterable[Obj] | None = None, name: str = "") -> FinCat:
    """Skeletal category of the partial order generated by covering relations.

    The morphism ``a -> b`` is named ``(a, b)``. Objects keep the order in
    which they are first mentioned unless ``objects`` is given.
    """
    order = list(order)
    objs: list = list(objects) if objects is not None else []
    for a, b in order:
        for x in (a, b):
            if x not in objs:
                objs.append(x)
    succ: dict = {x: [] for x in objs}
    for a, b in order:
        if a == b:
            raise CycleError([a, a])
        succ[a].append(b)
    # reachability, reporting a cycle if one exists
    colour: dict = {}
    stack_path: list = []

    def visit(x):
        colour[x] = 1
        stack_path.append(x)
        for y in succ[x]:
            if colour.get(y) == 1:
                i = stack_path.index(y)
                raise CycleError(stack_path[i:] + [y])
            if y not in colour:
                visit(y)
        stack_path.pop()
        colour[x] = 2

    for x in objs:
        if x not in colour:
            visit(x)
    reach = {x: {x} for x in objs}
    changed = True
    while changed:
        changed = False
        for a in objs:
            for b in list(reach[a]):
                for c in succ[b]:
                    if c not in reach[a]:
                        reach[a].add(c)
                        changed = True
    return poset_from_leq(objs, lambda a, b: b in reach[a], name)


def poset_from_leq(objs: Sequence[Obj], leq: Callable[[Obj, Obj], bool], name: str = "") -> FinCat:
    objs = list(objs)
    arrows = [((a, b), a, b) for a in objs for b in objs if leq(a, b)]
    identity = {a: (a, a) for a in objs}
    table = {}
    for (f, a, b) in arrows:
        for (g, b2, c) in arrows:
            if b2 == b:
                table[(g, f)] = (a, c)
    return FinCat(objs, arrows, identity, table, name)


def chain(n: int, name: str | None = None, labels: Sequence[Obj] | None = None) -> FinCat:
    """The linear order with ``n`` elements (labels default to ``"0" .. "n-1"``)."""
    labels = list(labels) if labels is not None else [str(i) for i in range(n)]
    return poset_from_leq(labels, lambda a, b: labels.index(a) <= labels.index(b), name or f"[{n}]")


def point(name: str = "pt") -> FinCat:
    return chain(1, name, ["*"])


def discrete(objs: Iterable[Obj], name: str = "") -> FinCat:
    objs = list(objs)
    return poset_from_leq(objs, lambda a, b: a == b, name)


def parallel_pair(name: str = "=>") -> FinCat:
    arrows = [("1_s", "s", "s"), ("l", "s", "t"), ("r", "s", "t"), ("1_t", "t", "t")]
    identity = {"s": "1_s", "t": "1_t"}
    table = {}
    for f, a, b in arrows:
        for g, b2, c in arrows:
            if b2 == b:
                if g == identity[b]:
                    table[(g, f)] = f
                elif f == identity[a]:
                    table[(g, f)] = g
    return FinCat(["s", "t"], arrows, identity, table, name)


CONE = "▷"
COCONE_POINT = "◁"


def add_terminal(shape: FinCat, point: Obj = CONE) -> FinCat:
    """Adjoin a new terminal object to ``shape`` (the cocone shape)."""
    objs = list(shape.objects) + [point]
    arrows = shape.arrows() + [(("θ", a), a, point) for a in shape.objects] + [(("θ", point), point, point)]
    identity = dict(shape.identity)
    identity[point] = ("θ", point)
    table = dict(shape.table)
    for f in shape.morphisms:
        table[(("θ", shape.tgt(f)), f)] = ("θ", shape.src(f))
    for a in objs:
        table[(("θ", point), ("θ", a))] = ("θ", a)
    return FinCat(objs, arrows, identity, table, f"{shape.name}▷")


def add_initial(shape: FinCat, point: Obj = COCONE_POINT) -> FinCat:
    """Adjoin a new initial object to ``shape`` (the cone shape)."""
    objs = [point] + list(shape.objects)
    arrows = [(("ι", point), point, point)] + [(("ι", a), point, a) for a in shape.objects] + shape.arrows()
    identity = dict(shape.identity)
    identity[point] = ("ι", point)
    table = dict(shape.table)
    for f in shape.morphisms:
        table[(f, ("ι", shape.src(f)))] = ("ι", shape.tgt(f))
    for a in objs:
        table[(("ι", a), ("ι", point))] = ("ι", a)
    return FinCat(objs, arrows, identity, table, f"◁{shape.name}")


def full_subcategory(cat: FinCat, objs: Iterable[Obj], name: str = "") -> FinCat:
    keep = set(objs)
    objs = [a for a in cat.objects if a in keep]
    arrows = [a for a in cat.arrows() if a[1] in keep and a[2] in keep]
    ids = {f for f, _, _ in arrows}
    table = {k: v for k, v in cat.table.items() if k[0] in ids and k[1] in ids}
    return FinCat(objs, arrows, {a: cat.identity[a] for a in objs}, table, name)


# ---------------------------------------------------------------------------
# derived categories


def opposite(cat: FinCat) -> FinCat:
    name = cat.name[:-3] if cat.name.endswith("^op") else f"{cat.name}^op"
    arrows = [(f, b, a) for f, a, b in cat.arrows()]
    table = {(f, g): h for (g, f), h in cat.table.items()}
    return FinCat(cat.objects, arrows, cat.identity, table, name)


def product(c: FinCat, d: FinCat, name: str = "") -> FinCat:
    objs = [(a, x) for a in c.objects for x in d.objects]
    arrows = [((f, u), (c.src(f), d.src(u)), (c.tgt(f), d.tgt(u))) for f in c.morphisms for u in d.morphisms]
    identity = {(a, x): (c.id(a), d.id(x)) for a, x in objs}
    table = {}
    for (g, f), gf in c.table.items():
        for (v, u), vu in d.table.items():
            table[((g, v), (f, u))] = (gf, vu)
    return FinCat(objs, arrows, identity, table, name or f"{c.name}×{d.name}")


def arrow_category(cat: FinCat, name: str = "") -> FinCat:
    """Objects are morphisms of ``cat``; a morphism ``f -> g`` is a commuting
    square, named ``(f, g, u, v)`` with ``g∘u == v∘f``."""
    objs = list(cat.morphisms)
    arrows = []
    for f in objs:
        for g in objs:
            for u in cat.hom(cat.src(f), cat.src(g)):
                for v in cat.hom(cat.tgt(f), cat.tgt(g)):
                    if cat.comp(g, u) == cat.comp(v, f):
                        arrows.append(((f, g, u, v), f, g))
    identity = {f: (f, f, cat.id(cat.src(f)), cat.id(cat.tgt(f))) for f in objs}
    by_src: dict = {}
    for a in arrows:
        by_src.setdefault(a[1], []).append(a)
    table = {}
    for (s1, f, g) in arrows:
        for (s2, _, h) in by_src.get(g, ()):
            table[(s2, s1)] = (f, h, cat.comp(s2[2], s1[2]), cat.comp(s2[3], s1[3]))
    return FinCat(objs, arrows, identity, table, name or f"{cat.name}^[1]")


def slice_category(cat: FinCat, x: Obj, name: str = "") -> FinCat:
    """Objects: morphisms into ``x``. A morphism ``f -> g`` is named ``(h, g)``
    where ``f == g∘h``."""
    if x not in cat.obj_index:
        raise CategoryError(f"unknown object {fmt(x)}")
    objs = [f for f in cat.morphisms if cat.tgt(f) == x]
    arrows = []
    for f in objs:
        for g in objs:
            for h in cat.hom(cat.src(f), cat.src(g)):
                if cat.comp(g, h) == f:
                    arrows.append(((h, g), f, g))
    identity = {f: (cat.id(cat.src(f)), f) for f in objs}
    by_src: dict = {}
    for a in arrows:
        by_src.setdefault(a[1], []).append(a)
    table = {}
    for (m1, f, g) in arrows:
        for (m2, _, k) in by_src.get(g, ()):
            table[(m2, m1)] = (cat.comp(m2[0], m1[0]), k)
    return FinCat(objs, arrows, identity, table, name or f"{cat.name}/{fmt(x)}")


def coslice_category(cat: FinCat, x: Obj, name: str = "") -> FinCat:
    """Objects: morphisms out of ``x``. A morphism ``f -> g`` is named ``(h, f)``
    where ``g == h∘f``."""
    if x not in cat.obj_index:
        raise CategoryError(f"unknown object {fmt(x)}")
    objs = [f for f in cat.morphisms if cat.src(f) == x]
    arrows = []
    for f in objs:
        for g in objs:
            for h in cat.hom(cat.tgt(f), cat.tgt(g)):
                if cat.comp(h, f) == g:
                    arrows.append(((h, f), f, g))
    identity = {f: (cat.id(cat.tgt(f)), f) for f in objs}
    by_src: dict = {}
    for a in arrows:
        by_src.setdefault(a[1], []).append(a)
    table = {}
    for (m1, f, g) in arrows:
        for (m2, _, k) in by_src.get(g, ()):
            table[(m2, m1)] = (cat.comp(m2[0], m1[0]), f)
    return FinCat(objs, arrows, identity, table, name or f"{fmt(x)}/{cat.name}")


def derive(cat: FinCat, construction: str, arg: Any = None) -> FinCat:
    """Dispatch to one of the standard constructions by name."""
    if construction == "opposite":
        return opposite(cat)
    if construction == "product":
        return product(cat, arg)
    if construction == "arrow":
        return arrow_category(cat)
    if construction == "slice":
        return slice_category(cat, arg)
    if construction == "coslice":
        return coslice_category(cat, arg)
    raise CategoryError(f"unknown construction {construction!r}")


# ---------------------------------------------------------------------------
# functors and natural transformations


class FinFunctor:
    def __init__(self, source: FinCat, target: FinCat, obj: Mapping, mor: Mapping, name: str = ""):
        self.source = source
        self.target = target
        self.obj = dict(obj)
        self.mor = dict(mor)
        self.name = name

    def ob(self, x: Obj) -> Obj:
        return self.obj[x]

    def ar(self, f: Mor) -> Mor:
        return self.mor[f]

    def op(self) -> "FinFunctor":
        return FinFunctor(opposite(self.source), opposite(self.target), self.obj, self.mor, f"{self.name}^op")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinFunctor):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.obj == other.obj and self.mor == other.mor)

    def __hash__(self) -> int:
        return hash((self.source, self.target, tuple(self.obj.items())))

    def __repr__(self) -> str:
        return f"FinFunctor({self.name or '?'}: {self.source.name} -> {self.target.name})"


def validate_functor(F: FinFunctor) -> Report:
    C, D = F.source, F.target
    rep = Report(title=f"functor {F.name}")
    miss = [x for x in C.objects if F.obj.get(x) not in D.obj_index]
    rep.add("object map total", not miss, miss[0] if miss else None)
    missm = [f for f in C.morphisms if F.mor.get(f) not in D.mor_index]
    rep.add("morphism map total", not missm, missm[0] if missm else None)
    if miss or missm:
        return rep
    ends = [f for f in C.morphisms
            if D.src(F.mor[f]) != F.obj[C.src(f)] or D.tgt(F.mor[f]) != F.obj[C.tgt(f)]]
    rep.add("endpoints preserved", not ends, ends[0] if ends else None)
    ids = [x for x in C.objects if F.mor[C.id(x)] != D.id(F.obj[x])]
    rep.add("identities preserved", not ids, ids[0] if ids else None)
    if ends:
        return rep
    bad = None
    for (g, f), h in C.table.items():
        if F.mor[h] != D.comp(F.mor[g], F.mor[f]):
            bad = (g, f)
            break
    rep.add("composition preserved", bad is None, bad)
    return rep


def identity_functor(C: FinCat) -> FinFunctor:
    return FinFunctor(C, C, {x: x for x in C.objects}, {f: f for f in C.morphisms}, f"id_{C.name}")


def compose_functors(G: FinFunctor, F: FinFunctor) -> FinFunctor:
    """``G∘F``."""
    return FinFunctor(F.source, G.target, {x: G.obj[F.obj[x]] for x in F.source.objects},
                      {f: G.mor[F.mor[f]] for f in F.source.morphisms}, f"{G.name}∘{F.name}")


def constant_functor(J: FinCat, C: FinCat, c: Obj) -> FinFunctor:
    return FinFunctor(J, C, {x: c for x in J.objects}, {f: C.id(c) for f in J.morphisms}, f"const_{fmt(c)}")


def inclusion(sub: FinCat, cat: FinCat) -> FinFunctor:
    return FinFunctor(sub, cat, {x: x for x in sub.objects}, {f: f for f in sub.morphisms}, "incl")


def product_projections(c: FinCat, d: FinCat, prod: FinCat | None = None) -> tuple[FinFunctor, FinFunctor]:
    prod = prod or product(c, d)
    p1 = FinFunctor(prod, c, {o: o[0] for o in prod.objects}, {m: m[0] for m in prod.morphisms}, "pr1")
    p2 = FinFunctor(prod, d, {o: o[1] for o in prod.objects}, {m: m[1] for m in prod.morphisms}, "pr2")
    return p1, p2


def arrow_functors(cat: FinCat, arr: FinCat | None = None) -> tuple[FinFunctor, FinFunctor]:
    """Domain and codomain projections out of the arrow category."""
    arr = arr or arrow_category(cat)
    dom = FinFunctor(arr, cat, {f: cat.src(f) for f in arr.objects}, {s: s[2] for s in arr.morphisms}, "dom")
    cod = FinFunctor(arr, cat, {f: cat.tgt(f) for f in arr.objects}, {s: s[3] for s in arr.morphisms}, "cod")
    return dom, cod


def slice_forget(cat: FinCat, x: Obj, sl: FinCat | None = None) -> FinFunctor:
    sl = sl or slice_category(cat, x)
    return FinFunctor(sl, cat, {f: cat.src(f) for f in sl.objects}, {m: m[0] for m in sl.morphisms}, "forget")


class NatTrans:
    """A natural transformation ``F => G`` given by its components."""

    def __init__(self, source: FinFunctor, target: FinFunctor, components: Mapping):
        self.source = source
        self.target = target
        self.components = dict(components)

    def __getitem__(self, x: Obj) -> Mor:
        return self.components[x]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NatTrans):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.components == other.components

    def __hash__(self) -> int:
        return hash(tuple(self.components.items()))

    def __repr__(self) -> str:
        return f"NatTrans({self.source.name} => {self.target.name})"


def validate_nat_trans(alpha: NatTrans) -> Report:
    F, G = alpha.source, alpha.target
    C, D = F.source, F.target
    rep = Report(title="natural transformation")
    bad = [x for x in C.objects
           if alpha.components.get(x) not in D.mor_index
           or D.src(alpha[x]) != F.ob(x) or D.tgt(alpha[x]) != G.ob(x)]
    rep.add("components have correct type", not bad, bad[0] if bad else None)
    if bad:
        return rep
    sq = None
    for f in C.morphisms:
        a, b = C.src(f), C.tgt(f)
        if D.comp(G.ar(f), alpha[a]) != D.comp(alpha[b], F.ar(f)):
            sq = f
            break
    rep.add("naturality squares commute", sq is None, sq)
    return rep


def identity_nat(F: FinFunctor) -> NatTrans:
    return NatTrans(F, F, {x: F.target.id(F.ob(x)) for x in F.source.objects})


def vcompose(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """Vertical composite ``beta∘alpha``."""
    D = alpha.source.target
    return NatTrans(alpha.source, beta.target,
                    {x: D.comp(beta[x], alpha[x]) for x in alpha.source.source.objects})


def whisker_left(H: FinFunctor, alpha: NatTrans) -> NatTrans:
    """``H alpha : H∘F => H∘G``."""
    return NatTrans(compose_functors(H, alpha.source), compose_functors(H, alpha.target),
                    {x: H.ar(alpha[x]) for x in alpha.source.source.objects})


def whisker_right(alpha: NatTrans, K: FinFunctor) -> NatTrans:
    """``alpha K : F∘K => G∘K``."""
    return NatTrans(compose_functors(alpha.source, K), compose_functors(alpha.target, K),
                    {y: alpha[K.ob(y)] for y in K.source.objects})


def invert_nat(alpha: NatTrans) -> NatTrans | None:
    D = alpha.source.target
    comps = {}
    for x, f in alpha.components.items():
        g = D.inverse(f)
        if g is None:
            return None
        comps[x] = g
    return NatTrans(alpha.target, alpha.source, comps)


def is_nat_iso(alpha: NatTrans) -> bool:
    D = alpha.source.target
    return all(D.is_iso(f) for f in alpha.components.values())


def find_natural_iso(F: FinFunctor, G: FinFunctor) -> NatTrans | None:
    """Search for a natural isomorphism ``F => G`` (canonical order)."""
    C, D = F.source, F.target
    objs = list(C.objects)
    choice: dict = {}

    def consistent(x):
        for f in C.morphisms:
            a, b = C.src(f), C.tgt(f)
            if a in choice and b in choice and (a == x or b == x):
                if D.comp(G.ar(f), choice[a]) != D.comp(choice[b], F.ar(f)):
                    return False
        return True

    def go(i):
        if i == len(objs):
            return True
        x = objs[i]
        for h in D.hom(F.ob(x), G.ob(x)):
            if D.is_iso(h):
                choice[x] = h
                if consistent(x) and go(i + 1):
                    return True
                del choice[x]
        return False

    return NatTrans(F, G, dict(choice)) if go(0) else None


# ---------------------------------------------------------------------------
# searching for functors


def extend_to_functor(
    source: FinCat,
    target: FinCat,
    obj: Mapping,
    allowed: Callable[[Mor, Mor], bool] | None = None,
    fixed: Mapping | None = None,
) -> FinFunctor | None:
    """Find the canonically least functor with the given object map.

    ``allowed(f, h)`` filters candidate images ``h`` of each source morphism
    ``f``; ``fixed`` pins some images in advance.
    """
    mor: dict = {}
    for x in source.objects:
        mor[source.id(x)] = target.id(obj[x])
    for f, h in (fixed or {}).items():
        if f in mor and mor[f] != h:
            return None
        mor[f] = h
    todo = [f for f in source.morphisms if f not in mor]
    cands = {}
    for f in todo:
        hs = [h for h in target.hom(obj[source.src(f)], obj[source.tgt(f)]) if allowed is None or allowed(f, h)]
        if not hs:
            return None
        cands[f] = hs

    def ok_with(f):
        for (g, k), gk in source.table.items():
            if f not in (g, k, gk):
                continue
            if g in mor and k in mor and gk in mor:
                if mor[gk] != target.comp(mor[g], mor[k]):
                    return False
        return True

    for f, h in (fixed or {}).items():
        if not ok_with(f):
            return None

    def go(i):
        if i == len(todo):
            return True
        f = todo[i]
        for h in cands[f]:
            mor[f] = h
            if ok_with(f) and go(i + 1):
                return True
            del mor[f]
        return False

    if not go(0):
        return None
    return FinFunctor(source, target, obj, mor)


# ---------------------------------------------------------------------------
# limits and colimits


@dataclass(frozen=True)
class Cone:
    apex: Obj
    legs: tuple  # ((shape object, morphism), ...) in shape order

    def leg(self, j: Obj) -> Mor:
        return dict(self.legs)[j]


def enumerate_cones(C: FinCat, D: FinFunctor, apexes: Iterable[Obj] | None = None) -> Iterator[Cone]:
    J = D.source
    for c in (C.objects if apexes is None else apexes):
        options = [C.hom(c, D.ob(j)) for j in J.objects]
        if any(not o for o in options):
            continue
        for legs in itertools.product(*options):
            lg = dict(zip(J.objects, legs))
            if all(C.comp(D.ar(a), lg[J.src(a)]) == lg[J.tgt(a)] for a in J.non_identities):
                yield Cone(c, tuple(zip(J.objects, legs)))


def factorizations_through(C: FinCat, cone: Cone, other: Cone) -> list:
    """Morphisms ``h: other.apex -> cone.apex`` with ``cone.leg∘h == other.leg``."""
    legs = dict(cone.legs)
    out = []
    for h in C.hom(other.apex, cone.apex):
        if all(C.comp(legs[j], h) == m for j, m in other.legs):
            out.append(h)
    return out


def find_limit(C: FinCat, D: FinFunctor) -> Cone | None:
    """First cone (canonical order) through which every cone factors uniquely."""
    cones = list(enumerate_cones(C, D))
    for cone in cones:
        if all(len(factorizations_through(C, cone, other)) == 1 for other in cones):
            return cone
    return None


def find_colimit(C: FinCat, D: FinFunctor) -> Cone | None:
    """Colimiting cocone, computed as a limit in the opposite category.

    The returned legs point from the diagram objects into the apex.
    """
    return find_limit(opposite(C), D.op())


def diagram_from_objects(C: FinCat, objs: Sequence[Obj], full: bool = False) -> FinFunctor:
    """Inclusion of the discrete (or full) subcategory on ``objs``."""
    shape = full_subcategory(C, objs) if full else discrete(objs)
    mor = {m: m for m in shape.morphisms} if full else {(a, a): C.id(a) for a in objs}
    return FinFunctor(shape, C, {a: a for a in objs}, mor, "diagram")


def finite_completeness(C: FinCat, dual: bool = False) -> Report:
    """Terminal object, binary products and equalizers; together these give
    limits of every finite diagram. With ``dual`` the colimit versions are
    checked (via the opposite category)."""
    K = opposite(C) if dual else C
    kind = ("initial object", "binary coproducts", "coequalizers") if dual else \
        ("terminal object", "binary products", "equalizers")
    rep = Report(title="finite cocompleteness" if dual else "finite completeness")
    empty = FinFunctor(discrete([]), K, {}, {})
    rep.add(kind[0], find_limit(K, empty) is not None)
    miss = None
    objs = list(K.objects)
    for i, a in enumerate(objs):
        for b in objs[i:]:
            shape = discrete(["l", "r"])
            D = FinFunctor(shape, K, {"l": a, "r": b}, {("l", "l"): K.id(a), ("r", "r"): K.id(b)})
            if find_limit(K, D) is None:
                miss = (a, b)
                break
        if miss:
            break
    rep.add(kind[1], miss is None, miss)
    miss = None
    P = parallel_pair()
    seen = set()
    for f in K.morphisms:
        for g in K.hom(K.src(f), K.tgt(f)):
            if (g, f) in seen:
                continue
            seen.add((f, g))
            D = FinFunctor(P, K, {"s": K.src(f), "t": K.tgt(f)},
                           {"1_s": K.id(K.src(f)), "1_t": K.id(K.tgt(f)), "l": f, "r": g})
            if find_limit(K, D) is None:
                miss = (f, g)
                break
        if miss:
            break
    rep.add(kind[2], miss is None, miss)
    return rep


def lattice_report(C: FinCat) -> Report:
    """For thin categories: bounded lattice check (fast route for bicompleteness)."""
    rep = Report(title="bounded lattice")
    rep.add("has bottom", C.initial() is not None)
    rep.add("has top", C.terminal() is not None)
    bad = None
    for a in C.objects:
        for b in C.objects:
            lower = [c for c in C.objects if C.leq(c, a) and C.leq(c, b)]
            upper = [c for c in C.objects if C.leq(a, c) and C.leq(b, c)]
            meet = [m for m in lower if all(C.leq(c, m) for c in lower)]
            join = [m for m in upper if all(C.leq(m, c) for c in upper)]
            if not meet or not join:
                bad = (a, b)
                break
        if bad:
            break
    rep.add("binary meets and joins", bad is None, bad)
    return rep


def bicompleteness(C: FinCat) -> Report:
    rep = Report(title="finite bicompleteness")
    rep.extend(finite_completeness(C))
    rep.extend(finite_completeness(C, dual=True))
    return rep


def bounded_shape_bicompleteness(C: FinCat, bound: int) -> Report:
    """Brute force: limits and colimits of the inclusions of every discrete and
    every full subcategory on at most ``bound`` objects."""
    rep = Report(title=f"bicompleteness over subcategory shapes (bound {bound})")
    bad_l = bad_c = None
    for k in range(0, min(bound, len(C.objects)) + 1):
        for objs in itertools.combinations(C.objects, k):
            for full in (False, True):
                D = diagram_from_objects(C, objs, full)
                if bad_l is None and find_limit(C, D) is None:
                    bad_l = (objs, "full" if full else "discrete")
                if bad_c is None and find_colimit(C, D) is None:
                    bad_c = (objs, "full" if full else "discrete")
    rep.add("limits", bad_l is None, bad_l)
    rep.add("colimits", bad_c is None, bad_c)
    return rep


# ---------------------------------------------------------------------------
# retracts


@dataclass(frozen=True)
class Retract:
    """``f`` is a retract of ``g``: squares ``iota: f -> g`` and ``rho: g -> f``
    (each given as ``(top, bottom)``) with ``rho∘iota == id_f``."""

    f: Mor
    g: Mor
    iota: tuple
    rho: tuple


def squares(C: FinCat, f: Mor, g: Mor) -> Iterator[tuple[Mor, Mor]]:
    """Commuting squares ``(u, v)`` from ``f`` to ``g``: ``g∘u == v∘f``."""
    for u in C.hom(C.src(f), C.src(g)):
        for v in C.hom(C.tgt(f), C.tgt(g)):
            if C.comp(g, u) == C.comp(v, f):
                yield u, v


def enumerate_retracts(C: FinCat, f: Mor, among: Iterable[Mor] | None = None) -> list[Retract]:
    out = []
    ida, idb = C.id(C.src(f)), C.id(C.tgt(f))
    for g in (C.morphisms if among is None else among):
        into = list(squares(C, f, g))
        if not into:
            continue
        for r in squares(C, g, f):
            for i in into:
                if C.comp(r[0], i[0]) == ida and C.comp(r[1], i[1]) == idb:
                    out.append(Retract(f, g, i, r))
    return out
