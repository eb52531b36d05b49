"""Text format for categories, model structures, functors, adjunctions,
model-category-valued functors and fibrations: a parser producing a
:class:`Workspace` and an emitter writing one back.

Identifiers are bare words, JSON-quoted strings, or parenthesized tuples of
identifiers, so every nested identifier produced by the library can be
written out and read back unchanged.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Callable

from .adjunction import Adjunction, check_adjunction, find_adjoint, from_functors, identity_adjunction
from .fincat import (
    CategoryError,
    FinCat,
    FinFunctor,
    arrow_category,
    arrow_functors,
    build_poset,
    coslice_category,
    opposite,
    poset_from_leq,
    product,
    slice_category,
    validate_category,
    validate_functor,
)
from .grothendieck import AdjCatFunctor, canonical_cells, check_adjcat_functor
from .integral import IntegralStructure, ModCatFunctor, _pm, build_integral, product_model
from .modelfib import FibrationCandidate, candidate_from_integral
from .modelstruct import ModelCat, ModelError, PreModel, make_model, trivial_model, validate_premodel
from .report import fmt


class DSLError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, col {col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# tokens


@dataclass(frozen=True)
class Token:
    kind: str  # WORD, STRING, PUNCT, EOF
    value: str
    line: int
    col: int


_PUNCT = ("->", "=>", "{", "}", "(", ")", "[", "]", ",", ":", "<", "=")
_WORD_RE = re.compile(r'[^\s{}()\[\],:<="]+')


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    for ln, line in enumerate(text.splitlines(), start=1):
        i = 0
        n = len(line)
        while i < n:
            ch = line[i]
            if ch.isspace():
                i += 1
                continue
            if ch == "#" and (i == 0 or line[i - 1].isspace()):
                break
            col = i + 1
            p = next((p for p in _PUNCT if line.startswith(p, i)), None)
            if p is not None:
                toks.append(Token("PUNCT", p, ln, col))
                i += len(p)
                continue
            if ch == '"':
                m = re.compile(r'"(?:[^"\\]|\\.)*"').match(line, i)
                if not m:
                    raise DSLError("unterminated string", ln, col)
                toks.append(Token("STRING", json.loads(m.group(0)), ln, col))
                i = m.end()
                continue
            m = _WORD_RE.match(line, i)
            word = m.group(0)
            # a word may not swallow a following arrow token
            for p in ("->", "=>"):
                k = word.find(p)
                if k > 0:
                    word = word[:k]
            toks.append(Token("WORD", word, ln, col))
            i += len(word)
    last = len(text.splitlines()) + 1
    toks.append(Token("EOF", "", last, 1))
    return toks


_BARE_RE = re.compile(r'^[^\s{}()\[\],:<="#>-][^\s{}()\[\],:<="]*$')
_RESERVED = {"all", "none", "arrow", "compose", "identity", "factor1", "factor2", "obj", "fiber", "unit",
             "counit", "comp", "coherence", "via", "closed", "on", "."}


def show_id(x: Any) -> str:
    """Inverse of the identifier grammar."""
    if isinstance(x, tuple):
        inner = ", ".join(show_id(y) for y in x)
        return f"({inner},)" if len(x) == 1 else f"({inner})"
    if not isinstance(x, str):
        raise TypeError(f"identifiers must be strings or tuples, got {x!r}")
    if _BARE_RE.match(x) and x not in _RESERVED and "->" not in x and "=>" not in x and not x.endswith("-"):
        return x
    return json.dumps(x, ensure_ascii=False)


# ---------------------------------------------------------------------------
# workspace


KINDS = ("category", "model", "premodel", "functor", "adjunction", "modcat-functor", "fibration")


@dataclass
class Workspace:
    entries: dict = field(default_factory=dict)  # name -> (kind, object)

    def add(self, name: str, kind: str, obj: Any) -> None:
        self.entries[name] = (kind, obj)

    def get(self, name: str, *kinds: str) -> Any:
        if name not in self.entries:
            raise KeyError(name)
        kind, obj = self.entries[name]
        if kinds and kind not in kinds:
            raise KeyError(f"{name} is a {kind}, expected {' or '.join(kinds)}")
        return obj

    def kind(self, name: str) -> str:
        return self.entries[name][0]

    def names(self, *kinds: str) -> list[str]:
        return [n for n, (k, _) in self.entries.items() if not kinds or k in kinds]

    def __contains__(self, name: str) -> bool:
        return name in self.entries


# ---------------------------------------------------------------------------
# parser


_COLON_KEYS = {"objects", "order", "weq", "cof", "fib", "left", "right", "pi", "upstairs", "downstairs"}


def _unresolved(name: Any, e: Exception) -> str:
    detail = e.args[0] if e.args else ""
    return f"unresolved reference {name!r}" + (f" ({detail})" if detail and detail != name else "")


class Parser:
    def __init__(self, text: str, ws: Workspace | None = None):
        self.toks = tokenize(text)
        self.i = 0
        self.ws = ws if ws is not None else Workspace()

    # -- token helpers --------------------------------------------------
    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None) -> DSLError:
        tok = tok or self.peek()
        return DSLError(msg, tok.line, tok.col)

    def is_punct(self, p: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind == "PUNCT" and t.value == p

    def is_word(self, w: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind == "WORD" and t.value == w

    def expect_punct(self, p: str) -> Token:
        if not self.is_punct(p):
            raise self.error(f"expected '{p}', found '{self.peek().value or 'end of input'}'")
        return self.next()

    def expect_word(self, w: str) -> Token:
        if not self.is_word(w):
            raise self.error(f"expected '{w}', found '{self.peek().value or 'end of input'}'")
        return self.next()

    def ident(self) -> Any:
        t = self.peek()
        if t.kind in ("WORD", "STRING"):
            self.next()
            return t.value
        if self.is_punct("("):
            self.next()
            items = []
            while not self.is_punct(")"):
                items.append(self.ident())
                if self.is_punct(","):
                    self.next()
                elif not self.is_punct(")"):
                    raise self.error("expected ',' or ')' in tuple identifier")
            self.next()
            return tuple(items)
        raise self.error(f"expected an identifier, found '{t.value or 'end of input'}'")

    def name(self) -> str:
        t = self.peek()
        v = self.ident()
        if not isinstance(v, str):
            raise self.error("names must be plain identifiers", t)
        return v

    def at_item_start(self) -> bool:
        t = self.peek()
        if t.kind == "PUNCT" and t.value == "}":
            return True
        if t.kind == "WORD" and t.value in _COLON_KEYS and self.is_punct(":", 1):
            return True
        return t.kind == "WORD" and t.value in {"arrow", "compose", "identity", "factor1", "factor2", "obj",
                                                "fiber", "unit", "counit", "coherence", "comp"} \
            and not self.is_punct(",", 1)

    def ref(self, *kinds: str) -> Any:
        t = self.peek()
        n = self.name()
        try:
            return self.ws.get(n, *kinds)
        except KeyError as e:
            raise self.error(_unresolved(n, e), t) from None

    # -- top level ------------------------------------------------------
    def parse(self) -> Workspace:
        while self.peek().kind != "EOF":
            t = self.next()
            if t.kind != "WORD" or t.value not in ("poset",) + KINDS:
                raise self.error(f"expected a definition keyword, found '{t.value}'", t)
            handler = getattr(self, "p_" + t.value.replace("-", "_"))
            handler(t)
        return self.ws

    def _define(self, name: str, kind: str, obj: Any, tok: Token) -> None:
        if name in self.ws:
            raise DSLError(f"duplicate definition of {name!r}", tok.line, tok.col)
        self.ws.add(name, kind, obj)

    def _wrap(self, tok: Token, fn: Callable[[], Any]) -> Any:
        try:
            return fn()
        except DSLError:
            raise
        except (CategoryError, ModelError, ValueError, KeyError) as e:
            raise DSLError(f"validation failed: {e}", tok.line, tok.col) from None

    def _call(self) -> tuple[str, list, Token]:
        t = self.peek()
        fname = self.name()
        self.expect_punct("(")
        args = []
        while not self.is_punct(")"):
            args.append((self.peek(), self.ident()))
            if self.is_punct(","):
                self.next()
        self.next()
        return fname, args, t

    def _arg_ref(self, arg, *kinds):
        tok, v = arg
        try:
            return self.ws.get(v, *kinds)
        except (KeyError, TypeError) as e:
            raise DSLError(_unresolved(v, e), tok.line, tok.col) from None

    # -- categories -----------------------------------------------------
    def p_poset(self, kw: Token) -> None:
        name = self.name()
        self.expect_punct("{")
        objects: list = []
        order: list = []
        while not self.is_punct("}"):
            t = self.next()
            if t.value == "objects":
                self.expect_punct(":")
                while not self.at_item_start():
                    objects.append(self.ident())
                    if self.is_punct(","):
                        self.next()
            elif t.value == "order":
                self.expect_punct(":")
                while not self.at_item_start():
                    chain_ = [self.ident()]
                    while self.is_punct("<"):
                        self.next()
                        chain_.append(self.ident())
                    if len(chain_) < 2:
                        raise self.error("expected 'a < b'")
                    order.extend(zip(chain_, chain_[1:]))
                    if self.is_punct(","):
                        self.next()
            else:
                raise self.error(f"unexpected '{t.value}' in poset", t)
        self.next()
        for a, b in order:
            for x in (a, b):
                if x not in objects:
                    objects.append(x)
        C = self._wrap(kw, lambda: build_poset(order, objects, name))
        self._define(name, "category", C, kw)

    def p_category(self, kw: Token) -> None:
        name = self.name()
        if self.is_punct("="):
            self.next()
            fname, args, t = self._call()
            C = self._wrap(t, lambda: self._derived_category(fname, args, name))
            self._define(name, "category", C, kw)
            return
        self.expect_punct("{")
        objects: list = []
        arrows: list = []
        ident: dict = {}
        comps: list = []
        while not self.is_punct("}"):
            t = self.next()
            if t.value == "objects":
                self.expect_punct(":")
                while not self.at_item_start():
                    objects.append(self.ident())
                    if self.is_punct(","):
                        self.next()
            elif t.value == "arrow":
                f = self.ident()
                self.expect_punct(":")
                a = self.ident()
                self.expect_punct("->")
                b = self.ident()
                for x in (a, b):
                    if x not in objects:
                        raise DSLError(f"arrow {fmt(f)} uses undeclared object {fmt(x)}", t.line, t.col)
                if any(f == g for g, _, _ in arrows):
                    raise DSLError(f"duplicate arrow {fmt(f)}", t.line, t.col)
                arrows.append((f, a, b))
            elif t.value == "identity":
                a = self.ident()
                self.expect_punct("=")
                ident[a] = (self.ident(), t)
            elif t.value == "compose":
                g = self.ident()
                if not self.is_word("."):
                    raise self.error("expected '.' between composed arrows")
                self.next()
                f = self.ident()
                self.expect_punct("=")
                h = self.ident()
                comps.append((g, f, h, t))
            else:
                raise self.error(f"unexpected '{t.value}' in category", t)
        self.next()
        declared = {g: (a, b) for g, a, b in arrows}
        implicit = []
        identity = {}
        for a in objects:
            if a in ident:
                f, t = ident[a]
                if declared.get(f) != (a, a):
                    raise DSLError(f"identity of {fmt(a)} must be a declared arrow {fmt(a)} -> {fmt(a)}", t.line, t.col)
                identity[a] = f
            else:
                if not isinstance(a, str):
                    raise DSLError(f"object {fmt(a)} needs an explicit identity", kw.line, kw.col)
                f = f"1_{a}"
                if f in declared:
                    raise DSLError(f"arrow {f} clashes with the implicit identity of {a}", kw.line, kw.col)
                implicit.append((f, a, a))
                identity[a] = f
        arrows = implicit + arrows
        declared = {g: (a, b) for g, a, b in arrows}
        table = {}
        for g, a, b in arrows:
            table[(g, identity[a])] = g
            table[(identity[b], g)] = g
        for g, f, h, t in comps:
            for x in (g, f, h):
                if x not in declared:
                    raise DSLError(f"compose references undeclared arrow {fmt(x)}", t.line, t.col)
            if declared[f][1] != declared[g][0]:
                raise DSLError(f"{fmt(g)} . {fmt(f)} is not composable", t.line, t.col)
            if declared[h] != (declared[f][0], declared[g][1]):
                raise DSLError(f"{fmt(h)} has the wrong endpoints for {fmt(g)} . {fmt(f)}", t.line, t.col)
            table[(g, f)] = h
        C = FinCat(objects, arrows, identity, table, name)
        rep = validate_category(C)
        if not rep.ok:
            c = rep.first_failure()
            raise DSLError(f"category {name}: {c.name} (witness {fmt(c.witness)})", kw.line, kw.col)
        self._define(name, "category", C, kw)

    def _derived_category(self, fname: str, args: list, name: str) -> FinCat:
        def cat(i):
            return self._arg_ref(args[i], "category")

        if fname == "arrow" and len(args) == 1:
            return arrow_category(cat(0), name)
        if fname == "op" and len(args) == 1:
            return opposite(cat(0)).renamed(name)
        if fname == "product" and len(args) == 2:
            return product(cat(0), cat(1), name)
        if fname == "slice" and len(args) == 2:
            return slice_category(cat(0), args[1][1], name)
        if fname == "coslice" and len(args) == 2:
            return coslice_category(cat(0), args[1][1], name)
        raise ValueError(f"unknown category construction {fname}/{len(args)}")

    # -- model structures -----------------------------------------------
    def _class(self) -> Any:
        if self.is_word("all") or self.is_word("none"):
            return self.next().value
        self.expect_punct("[")
        items = []
        while not self.is_punct("]"):
            items.append(self.ident())
            if self.is_punct(","):
                self.next()
        self.next()
        return items

    def _model_block(self, kw: Token, premodel: bool) -> None:
        name = self.name()
        if self.is_punct("="):
            if premodel:
                raise self.error("derived constructions produce models, use 'model'")
            self.next()
            fname, args, t = self._call()
            obj = self._wrap(t, lambda: self._derived_model(fname, args, name))
            self._define(name, "model", obj, kw)
            return
        self.expect_word("on")
        C = self.ref("category")
        closed = False
        if self.is_word("closed"):
            self.next()
            closed = True
        self.expect_punct("{")
        classes: dict = {}
        cons: dict = {"factor1": {}, "factor2": {}}
        while not self.is_punct("}"):
            t = self.next()
            if t.value in ("weq", "cof", "fib"):
                self.expect_punct(":")
                classes[t.value] = (self._class(), t)
            elif t.value in ("factor1", "factor2") and not premodel:
                f = self.ident()
                self.expect_punct("=")
                mid = self.ident()
                first = second = None
                if self.is_word("via"):
                    self.next()
                    first = self.ident()
                    self.expect_punct(",")
                    second = self.ident()
                cons[t.value][f] = (mid, first, second)
            else:
                raise self.error(f"unexpected '{t.value}' in model", t)
        self.next()
        for k in ("weq", "cof", "fib"):
            if k not in classes:
                raise DSLError(f"model {name} is missing '{k}:'", kw.line, kw.col)
            cls, t = classes[k]
            if isinstance(cls, list):
                bad = next((m for m in cls if m not in C.mor_index), None)
                if bad is not None:
                    raise DSLError(f"unknown arrow {fmt(bad)} in '{k}:'", t.line, t.col)
        for which in ("factor1", "factor2"):
            for f, (mid, a, b) in cons[which].items():
                if f not in C.mor_index:
                    raise DSLError(f"{which} names unknown arrow {fmt(f)}", kw.line, kw.col)
        pm = PreModel.make(C, classes["weq"][0], classes["cof"][0], classes["fib"][0], name, closed)
        rep = validate_premodel(pm)
        if not rep.ok:
            c = rep.first_failure()
            raise DSLError(f"model {name}: {c.name} (witness {fmt(c.witness)})", kw.line, kw.col)
        if premodel:
            self._define(name, "premodel", pm, kw)
            return
        try:
            mc = make_model(pm, name=name, constraints1=cons["factor1"] or None, constraints2=cons["factor2"] or None)
        except ModelError:
            if cons["factor1"] or cons["factor2"]:
                raise DSLError(f"model {name}: the given factorizations cannot be completed", kw.line, kw.col)
            self._define(name, "premodel", pm, kw)
            return
        self._define(name, "model", mc, kw)

    def p_model(self, kw: Token) -> None:
        self._model_block(kw, premodel=False)

    def p_premodel(self, kw: Token) -> None:
        self._model_block(kw, premodel=True)

    def _derived_model(self, fname: str, args: list, name: str) -> ModelCat:
        from .corpus import arrow_structures, coslice_model, ex44_model, slice_model

        def model(i):
            return self._arg_ref(args[i], "model")

        if fname == "triv" and len(args) == 1:
            return trivial_model(self._arg_ref(args[0], "category"), name)
        if fname == "ex44" and not args:
            return ex44_model(name)
        if fname == "product" and len(args) == 2:
            return product_model(model(0), model(1), name)
        if fname == "slice" and len(args) == 2:
            return _renamed_model(slice_model(model(0), args[1][1]), name)
        if fname == "coslice" and len(args) == 2:
            return _renamed_model(coslice_model(model(0), args[1][1]), name)
        if fname == "injective" and len(args) == 1:
            return _renamed_model(arrow_structures(model(0)).injective, name)
        if fname == "projective" and len(args) == 1:
            return _renamed_model(arrow_structures(model(0)).projective, name)
        raise ValueError(f"unknown model construction {fname}/{len(args)}")

    # -- functors and adjunctions --------------------------------------
    def p_functor(self, kw: Token) -> None:
        name = self.name()
        if self.is_punct("="):
            self.next()
            fname, args, t = self._call()
            F = self._wrap(t, lambda: self._derived_functor(fname, args, name))
            self._define(name, "functor", F, kw)
            return
        self.expect_punct(":")
        C = self.ref("category")
        self.expect_punct("->")
        D = self.ref("category")
        self.expect_punct("{")
        obj, mor = {}, {}
        while not self.is_punct("}"):
            t = self.next()
            if t.value == "obj":
                a = self.ident()
                self.expect_punct("=>")
                obj[a] = self.ident()
            elif t.value == "arrow":
                f = self.ident()
                self.expect_punct("=>")
                mor[f] = self.ident()
            else:
                raise self.error(f"unexpected '{t.value}' in functor", t)
        self.next()
        for a in C.objects:
            if a in obj and C.id(a) not in mor:
                mor[C.id(a)] = D.id(obj[a]) if obj[a] in D.obj_index else None
        F = FinFunctor(C, D, obj, {m: mor[m] for m in C.morphisms if m in mor}, name)
        rep = validate_functor(F)
        if not rep.ok:
            c = rep.first_failure()
            raise DSLError(f"functor {name}: {c.name} (witness {fmt(c.witness)})", kw.line, kw.col)
        self._define(name, "functor", F, kw)

    def _derived_functor(self, fname: str, args: list, name: str) -> FinFunctor:
        if fname in ("dom", "cod") and len(args) == 1:
            C = self._arg_ref(args[0], "category")
            d, c = arrow_functors(C)
            F = d if fname == "dom" else c
            return FinFunctor(F.source, F.target, F.obj, F.mor, name)
        raise ValueError(f"unknown functor construction {fname}/{len(args)}")

    def p_adjunction(self, kw: Token) -> None:
        name = self.name()
        if self.is_punct("="):
            self.next()
            fname, args, t = self._call()
            if fname not in ("right-of", "left-of") or len(args) != 1:
                raise DSLError(f"unknown adjunction construction {fname}", t.line, t.col)
            F = self._arg_ref(args[0], "functor")
            adj = find_adjoint(F, "right" if fname == "right-of" else "left")
            if adj is None:
                raise DSLError(f"{args[0][1]} has no {fname[:-3]} adjoint", t.line, t.col)
            adj.name = name
            self._define(name, "adjunction", adj, kw)
            return
        self.expect_punct("{")
        L = R = None
        unit, counit = {}, {}
        while not self.is_punct("}"):
            t = self.next()
            if t.value == "left":
                self.expect_punct(":")
                L = self.ref("functor")
            elif t.value == "right":
                self.expect_punct(":")
                R = self.ref("functor")
            elif t.value in ("unit", "counit"):
                a = self.ident()
                self.expect_punct("=")
                (unit if t.value == "unit" else counit)[a] = self.ident()
            else:
                raise self.error(f"unexpected '{t.value}' in adjunction", t)
        self.next()
        if L is None or R is None:
            raise DSLError(f"adjunction {name} needs left: and right:", kw.line, kw.col)
        if unit or counit:
            adj = Adjunction(L, R, unit, counit, name)
        else:
            adj = from_functors(L, R, name)
            if adj is None:
                raise DSLError(f"adjunction {name}: functors are not adjoint", kw.line, kw.col)
        rep = check_adjunction(adj)
        if not rep.ok:
            c = rep.first_failure()
            raise DSLError(f"adjunction {name}: {c.name} (witness {fmt(c.witness)})", kw.line, kw.col)
        self._define(name, "adjunction", adj, kw)

    # -- model-category-valued functors --------------------------------
    def p_modcat_functor(self, kw: Token) -> None:
        from .integral import check_modcat_functor

        name = self.name()
        if self.is_punct("="):
            self.next()
            fname, args, t = self._call()
            FM = self._wrap(t, lambda: self._derived_modcat(fname, args, name))
            self._define(name, "modcat-functor", FM, kw)
            return
        self.expect_word("on")
        bm = self.ref("model", "premodel")
        B = _pm(bm).base
        self.expect_punct("{")
        fibers, on_arrow = {}, {}
        comp_over, id_over = {}, {}
        while not self.is_punct("}"):
            t = self.next()
            if t.value == "fiber":
                a = self.ident()
                self.expect_punct("=")
                fibers[a] = self.ref("model")
            elif t.value == "arrow":
                f = self.ident()
                self.expect_punct("=")
                on_arrow[f] = self.ref("adjunction")
            elif t.value == "coherence":
                self.expect_punct("{")
                while not self.is_punct("}"):
                    c = self.next()
                    if c.value == "comp":
                        g, f, x = self.ident(), self.ident(), self.ident()
                        self.expect_punct("=")
                        comp_over.setdefault((g, f), {})[x] = self.ident()
                    elif c.value == "unit":
                        a, x = self.ident(), self.ident()
                        self.expect_punct("=")
                        id_over.setdefault(a, {})[x] = self.ident()
                    else:
                        raise self.error(f"unexpected '{c.value}' in coherence", c)
                self.next()
            else:
                raise self.error(f"unexpected '{t.value}' in modcat-functor", t)
        self.next()
        missing = next((a for a in B.objects if a not in fibers), None)
        if missing is not None:
            raise DSLError(f"modcat-functor {name}: no fiber for {fmt(missing)}", kw.line, kw.col)
        for a in B.objects:
            on_arrow.setdefault(B.id(a), identity_adjunction(fibers[a].base))
        missing = next((f for f in B.morphisms if f not in on_arrow), None)
        if missing is not None:
            raise DSLError(f"modcat-functor {name}: no adjunction for {fmt(missing)}", kw.line, kw.col)
        fcats = {a: fibers[a].base for a in B.objects}
        try:
            comp, ident = canonical_cells(B, fcats, on_arrow)
        except CategoryError as e:
            if not (comp_over and id_over):
                raise DSLError(f"modcat-functor {name}: {e}", kw.line, kw.col) from None
            comp, ident = {}, {}
        for k, v in comp_over.items():
            comp.setdefault(k, {}).update(v)
        for k, v in id_over.items():
            ident.setdefault(k, {}).update(v)
        U = AdjCatFunctor(B, fcats, on_arrow, comp, ident, name)
        FM = ModCatFunctor(U, bm, fibers, name)
        rep = check_modcat_functor(FM)
        if not rep.ok:
            c = rep.first_failure()
            raise DSLError(f"modcat-functor {name}: {c.name} (witness {fmt(c.witness)})", kw.line, kw.col)
        self._define(name, "modcat-functor", FM, kw)

    def _derived_modcat(self, fname: str, args: list, name: str) -> ModCatFunctor:
        from .corpus import coslice_functor, example_4_4, slice_functor
        from .integral import constant_modcat

        if fname == "slice" and len(args) == 1:
            return slice_functor(self._arg_ref(args[0], "model"), name)
        if fname == "coslice" and len(args) == 1:
            return coslice_functor(self._arg_ref(args[0], "model"), name)
        if fname == "constant" and len(args) == 2:
            return constant_modcat(self._arg_ref(args[0], "model", "premodel"), self._arg_ref(args[1], "model"), name)
        if fname == "example44" and len(args) == 1:
            return example_4_4(self._arg_ref(args[0], "model"), name)
        raise ValueError(f"unknown modcat-functor construction {fname}/{len(args)}")

    # -- fibrations ------------------------------------------------------
    def p_fibration(self, kw: Token) -> None:
        name = self.name()
        if self.is_punct("="):
            self.next()
            fname, args, t = self._call()
            fc = self._wrap(t, lambda: self._derived_fibration(fname, args, name))
            self._define(name, "fibration", fc, kw)
            return
        self.expect_punct("{")
        parts: dict = {}
        while not self.is_punct("}"):
            t = self.next()
            if t.value not in ("pi", "upstairs", "downstairs"):
                raise self.error(f"unexpected '{t.value}' in fibration", t)
            self.expect_punct(":")
            parts[t.value] = self.ref("functor") if t.value == "pi" else self.ref("model", "premodel")
        self.next()
        if len(parts) != 3:
            raise DSLError(f"fibration {name} needs pi:, upstairs: and downstairs:", kw.line, kw.col)
        pi, up, down = parts["pi"], parts["upstairs"], parts["downstairs"]
        if pi.source != _pm(up).base or pi.target != _pm(down).base:
            raise DSLError(f"fibration {name}: pi does not run between the given models", kw.line, kw.col)
        self._define(name, "fibration", FibrationCandidate(pi, _pm(up), down, name), kw)

    def _derived_fibration(self, fname: str, args: list, name: str) -> FibrationCandidate:
        from .corpus import arrow_structures

        if fname == "integral" and len(args) == 1:
            I = build_integral(self._arg_ref(args[0], "modcat-functor"), "force", check_axioms=False)
            fc = candidate_from_integral(I)
            fc.name = name
            return fc
        if fname == "cod" and len(args) == 1:
            mc = self._arg_ref(args[0], "model")
            inj = arrow_structures(mc).injective
            _, cod = arrow_functors(mc.base, inj.base)
            return FibrationCandidate(cod, inj.structure, mc, name)
        raise ValueError(f"unknown fibration construction {fname}/{len(args)}")


def _renamed_model(mc: ModelCat, name: str) -> ModelCat:
    pm = PreModel(mc.base.renamed(name + ".cat"), mc.W, mc.Cof, mc.Fib, name)
    return ModelCat(pm, mc.fact_cof_trivfib, mc.fact_trivcof_fib, name)


def parse_spec(text: str, ws: Workspace | None = None) -> Workspace:
    return Parser(text, ws).parse()


def load(path: str) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


# ---------------------------------------------------------------------------
# emitter


def _covers(C: FinCat) -> list[tuple]:
    out = []
    for a in C.objects:
        for b in C.objects:
            if a == b or not C.hom(a, b):
                continue
            if not any(c not in (a, b) and C.hom(a, c) and C.hom(c, b) for c in C.objects):
                out.append((a, b))
    return out


def _is_named_poset(C: FinCat) -> bool:
    if not C.is_thin or any(f != (C.src(f), C.tgt(f)) for f in C.morphisms):
        return False
    return poset_from_leq(C.objects, lambda a, b: bool(C.hom(a, b))) == C and \
        build_poset(_covers(C), C.objects) == C


class Emitter:
    """Writes objects as definitions, emitting dependencies first and reusing
    names for objects already written."""

    def __init__(self) -> None:
        self.blocks: list[str] = []
        self.names: dict[int, str] = {}
        self.keep: list = []  # hold references so ids stay unique
        self.taken: set = set()

    def _claim(self, obj: Any, name: str) -> str | None:
        if id(obj) in self.names:
            return self.names[id(obj)]
        base, k = name, 1
        while name in self.taken:
            k += 1
            name = f"{base}~{k}"
        self.names[id(obj)] = name
        self.taken.add(name)
        self.keep.append(obj)
        return None

    def text(self) -> str:
        return "\n\n".join(self.blocks) + "\n"

    def category(self, C: FinCat, name: str) -> str:
        got = self._claim(C, name)
        if got:
            return got
        name = self.names[id(C)]
        if _is_named_poset(C):
            objs = " ".join(show_id(x) for x in C.objects)
            order = ", ".join(f"{show_id(a)} < {show_id(b)}" for a, b in _covers(C))
            body = [f"  objects: {objs}"] + ([f"  order: {order}"] if order else [])
            self.blocks.append(f"poset {show_id(name)} {{\n" + "\n".join(body) + "\n}")
            return name
        lines = [f"category {show_id(name)} {{", "  objects: " + " ".join(show_id(x) for x in C.objects)]
        for f, a, b in C.arrows():
            lines.append(f"  arrow {show_id(f)}: {show_id(a)} -> {show_id(b)}")
        for a in C.objects:
            lines.append(f"  identity {show_id(a)} = {show_id(C.id(a))}")
        for (g, f) in C.composable_pairs():
            if C.is_identity(g) or C.is_identity(f):
                continue
            lines.append(f"  compose {show_id(g)} . {show_id(f)} = {show_id(C.comp(g, f))}")
        lines.append("}")
        self.blocks.append("\n".join(lines))
        return name

    def _cls(self, C: FinCat, K: frozenset) -> str:
        if K == frozenset(C.morphisms):
            return "all"
        non_iso = [m for m in C.morphisms if m in K and not C.is_iso(m)]
        if not non_iso:
            return "none"
        return "[" + ", ".join(show_id(m) for m in non_iso) + "]"

    def model(self, m: ModelCat | PreModel, name: str) -> str:
        got = self._claim(m, name)
        if got:
            return got
        name = self.names[id(m)]
        pm = _pm(m)
        C = pm.base
        cname = self.category(C, f"{name}.cat")
        kw = "model" if isinstance(m, ModelCat) else "premodel"
        lines = [f"{kw} {show_id(name)} on {show_id(cname)} {{",
                 f"  weq: {self._cls(C, pm.W)}", f"  cof: {self._cls(C, pm.Cof)}", f"  fib: {self._cls(C, pm.Fib)}"]
        if isinstance(m, ModelCat):
            for key, fact in (("factor1", m.fact_cof_trivfib), ("factor2", m.fact_trivcof_fib)):
                for f in C.morphisms:
                    mid, a, b = fact.triple(f)
                    via = "" if C.is_thin else f" via {show_id(a)}, {show_id(b)}"
                    lines.append(f"  {key} {show_id(f)} = {show_id(mid)}{via}")
        lines.append("}")
        self.blocks.append("\n".join(lines))
        return name

    def functor(self, F: FinFunctor, name: str, src: str | None = None, tgt: str | None = None) -> str:
        got = self._claim(F, name)
        if got:
            return got
        name = self.names[id(F)]
        s = src or self.category(F.source, f"{name}.src")
        t = tgt or self.category(F.target, f"{name}.tgt")
        lines = [f"functor {show_id(name)}: {show_id(s)} -> {show_id(t)} {{"]
        for a in F.source.objects:
            lines.append(f"  obj {show_id(a)} => {show_id(F.ob(a))}")
        for f in F.source.morphisms:
            if F.source.is_identity(f) and F.ar(f) == F.target.id(F.ob(F.source.src(f))):
                continue
            lines.append(f"  arrow {show_id(f)} => {show_id(F.ar(f))}")
        lines.append("}")
        self.blocks.append("\n".join(lines))
        return name

    def adjunction(self, adj: Adjunction, name: str, src: str | None = None, tgt: str | None = None) -> str:
        got = self._claim(adj, name)
        if got:
            return got
        name = self.names[id(adj)]
        c = src or self.category(adj.C, f"{name}.C")
        d = tgt or self.category(adj.D, f"{name}.D")
        ln = self.functor(adj.left, f"{name}.left", c, d)
        rn = self.functor(adj.right, f"{name}.right", d, c)
        lines = [f"adjunction {show_id(name)} {{", f"  left: {show_id(ln)}", f"  right: {show_id(rn)}"]
        for a in adj.C.objects:
            lines.append(f"  unit {show_id(a)} = {show_id(adj.unit[a])}")
        for b in adj.D.objects:
            lines.append(f"  counit {show_id(b)} = {show_id(adj.counit[b])}")
        lines.append("}")
        self.blocks.append("\n".join(lines))
        return name

    def modcat(self, FM: ModCatFunctor, name: str) -> str:
        got = self._claim(FM, name)
        if got:
            return got
        name = self.names[id(FM)]
        U = FM.underlying
        B = FM.base
        bname = self.model(FM.base_model, f"{name}.base")
        fnames = {}
        for i, a in enumerate(B.objects):
            fnames[a] = self.model(FM.fiber(a), f"{name}.F{i}")
        cnames = {a: self.names[id(FM.fiber(a).base)] for a in B.objects}
        anames = {}
        for j, f in enumerate(B.morphisms):
            adj = U.on_arrow[f]
            if B.is_identity(f) and adj == identity_adjunction(U.fiber[B.src(f)]):
                continue
            anames[f] = self.adjunction(adj, f"{name}.A{j}", cnames[B.src(f)], cnames[B.tgt(f)])
        lines = [f"modcat-functor {show_id(name)} on {show_id(bname)} {{"]
        for a in B.objects:
            lines.append(f"  fiber {show_id(a)} = {show_id(fnames[a])}")
        for f, an in anames.items():
            lines.append(f"  arrow {show_id(f)} = {show_id(an)}")
        try:
            comp, ident = canonical_cells(B, U.fiber, U.on_arrow)
        except CategoryError:
            comp, ident = {}, {}
        cells = []
        for (g, f), d in U.comp_iso.items():
            for x, m in d.items():
                if comp.get((g, f), {}).get(x) != m:
                    cells.append(f"    comp {show_id(g)} {show_id(f)} {show_id(x)} = {show_id(m)}")
        for a, d in U.id_iso.items():
            for x, m in d.items():
                if ident.get(a, {}).get(x) != m:
                    cells.append(f"    unit {show_id(a)} {show_id(x)} = {show_id(m)}")
        if cells:
            lines += ["  coherence {"] + cells + ["  }"]
        lines.append("}")
        self.blocks.append("\n".join(lines))
        return name

    def fibration(self, fc: FibrationCandidate, name: str, upstairs: ModelCat | PreModel | None = None) -> str:
        got = self._claim(fc, name)
        if got:
            return got
        name = self.names[id(fc)]
        up = self.model(upstairs if upstairs is not None else fc.upstairs, f"{name}.up")
        down = self.model(fc.downstairs, f"{name}.down")
        pi = self.functor(fc.pi, f"{name}.pi", self.names[id(_pm(upstairs if upstairs is not None else fc.upstairs).base)],
                          self.names[id(_pm(fc.downstairs).base)])
        self.blocks.append(f"fibration {show_id(name)} {{\n  pi: {show_id(pi)}\n  upstairs: {show_id(up)}\n"
                           f"  downstairs: {show_id(down)}\n}}")
        return name

    def integral(self, I: IntegralStructure, name: str) -> str:
        """The total with its model structure and the projection to the base."""
        mc = I.as_model_cat()
        self.category(I.total, f"{name}.total")
        self.model(mc, name)
        fc = candidate_from_integral(I)
        return self.fibration(fc, f"{name}.fibration", upstairs=mc)

    def emit(self, kind: str, obj: Any, name: str) -> str:
        return {
            "category": self.category,
            "model": self.model,
            "premodel": self.model,
            "functor": self.functor,
            "adjunction": self.adjunction,
            "modcat-functor": self.modcat,
            "fibration": self.fibration,
            "integral": self.integral,
        }[kind](obj, name)


def emit_workspace(ws: Workspace) -> str:
    em = Emitter()
    for name, (kind, obj) in ws.entries.items():
        em.emit(kind, obj, name)
    return em.text()


def emit_object(kind: str, obj: Any, name: str) -> str:
    em = Emitter()
    em.emit(kind, obj, name)
    return em.text()
