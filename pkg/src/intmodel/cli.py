"""Command-line entry point: ``intmodel VERB [options]``.

Exit status is 0 when every check passes, 1 when some check fails and 2 for
usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Sequence

from .dsl import DSLError, Emitter, Workspace, load
from .dot import to_dot
from .fincat import FinCat
from .integral import IntegralError, ModCatFunctor, _pm, build_integral
from .modelfib import FibrationCandidate, StraighteningError, check_model_fibration, straighten_modelfib
from .modelstruct import ModelCat, PreModel, check_model, enumerate_model_structures
from .report import Report, fmt
from . import theorems

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _workspace(args) -> Workspace:
    if not getattr(args, "file", None):
        return Workspace()
    try:
        return load(args.file)
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e.strerror}") from None


def _get(ws: Workspace, name: str, *kinds: str):
    try:
        return ws.get(name, *kinds)
    except KeyError as e:
        raise UsageError(f"unknown name {name!r}: {e.args[0]}") from None


def _category(ws: Workspace, name: str) -> FinCat:
    if name in ws:
        kind = ws.kind(name)
        obj = ws.get(name)
        if kind == "category":
            return obj
        if kind in ("model", "premodel"):
            return _pm(obj).base
        raise UsageError(f"{name} is a {kind}, not a category")
    from .corpus import named_category

    try:
        return named_category(name)
    except (KeyError, ValueError):
        raise UsageError(f"unknown category {name!r}") from None


def _model(ws: Workspace, name: str | None) -> ModelCat:
    if name is None:
        from .corpus import ex44_model

        return ex44_model()
    if name not in ws and name == "ex44":
        from .corpus import ex44_model

        return ex44_model()
    return _get(ws, name, "model")


def _example_fiber(ws: Workspace, name: str) -> ModelCat:
    """The fiber over ``1`` of a functor shaped like the two-object example."""
    from .corpus import example_4_4

    FM = _get(ws, name, "modcat-functor")
    if FM.base.objects != ("0", "1") or len(FM.fiber("0").base.objects) != 1:
        raise UsageError(f"{name} is not the two-object example functor")
    mc = FM.fiber("1")
    if example_4_4(mc).underlying.fiber != FM.underlying.fiber:
        raise UsageError(f"{name} is not the two-object example functor")
    return mc


class Stats:
    def __init__(self) -> None:
        self.cats: list[FinCat] = []

    def add(self, *cats: FinCat) -> None:
        for C in cats:
            if not any(C is D for D in self.cats):
                self.cats.append(C)

    def to_dict(self, elapsed_ms: int) -> dict:
        return {"categories": len(self.cats), "morphisms": sum(len(C.morphisms) for C in self.cats),
                "elapsed_ms": elapsed_ms}


def _ws_stats(ws: Workspace, stats: Stats) -> None:
    for name in ws.names():
        kind, obj = ws.entries[name]
        if kind == "category":
            stats.add(obj)
        elif kind in ("model", "premodel"):
            stats.add(_pm(obj).base)
        elif kind == "functor":
            stats.add(obj.source, obj.target)
        elif kind == "modcat-functor":
            stats.add(obj.base, *(obj.fiber(A).base for A in obj.base.objects))
        elif kind == "fibration":
            stats.add(obj.N, obj.M)


# ---------------------------------------------------------------------------
# verbs; each returns a Report and fills stats


def cmd_validate(args, ws: Workspace, stats: Stats) -> Report:
    rep = Report(title=f"validate {args.file}")
    _ws_stats(ws, stats)
    for name in ws.names():
        kind = ws.kind(name)
        rep.add(f"{kind} {name} loaded and validated", True)
        if kind == "premodel" and args.strict:
            rep.fail(f"model {name} has functorial factorizations", name)
    return rep


def cmd_model_check(args, ws: Workspace, stats: Stats) -> Report:
    names = [args.model] if args.model else ws.names("model", "premodel")
    if not names:
        raise UsageError("no models to check")
    rep = Report(title="model-check")
    for name in names:
        m = _get(ws, name, "model", "premodel")
        stats.add(_pm(m).base)
        if isinstance(m, PreModel):
            rep.fail(f"{name}: MC5 functorial factorizations exist", name)
            continue
        rep.extend(check_model(m, args.shape_bound), f"{name}: ")
    return rep


def cmd_enumerate(args, ws: Workspace, stats: Stats) -> Report:
    C = _category(ws, args.category)
    stats.add(C)
    found = enumerate_model_structures(C, shape_bound=args.shape_bound)
    rep = Report(title=f"model structures on {args.category}")
    rep.add(f"{len(found)} model structures", True, len(found))
    for i, mc in enumerate(found, start=1):
        w = {k: [fmt(m) for m in mc.base.morphisms if m in K and not mc.base.is_identity(m)]
             for k, K in (("weq", mc.W), ("cof", mc.Cof), ("fib", mc.Fib))}
        rep.add(f"structure {i}", True, w)
    return rep


def cmd_integrate(args, ws: Workspace, stats: Stats) -> Report:
    FM = _get(ws, args.functor, "modcat-functor")
    try:
        I = build_integral(FM, args.mode, name=f"∫{args.functor}", check_axioms=False)
    except IntegralError as e:
        rep = Report(title=f"integrate {args.functor}")
        rep.fail("functor is proper and relative", str(e))
        stats.add(FM.base)
        return rep
    stats.add(FM.base, I.total)
    rep, _ = theorems.integral_theorem(FM, shape_bound=args.shape_bound)
    rep.title = f"integrate {args.functor}"
    if args.emit:
        em = Emitter()
        em.integral(I, f"int_{args.functor}")
        _write(args.emit, em.text())
    return rep


def cmd_proper_relative(args, ws: Workspace, stats: Stats) -> Report:
    FM = _get(ws, args.functor, "modcat-functor")
    stats.add(FM.base)
    return theorems.proper_relative(FM)


def cmd_straighten(args, ws: Workspace, stats: Stats) -> Report:
    fc = _get(ws, args.fibration, "fibration")
    stats.add(fc.N, fc.M)
    rep = Report(title=f"straighten {args.fibration}")
    rep.extend(check_model_fibration(fc, args.shape_bound), "model fibration: ")
    if not rep.ok:
        return rep
    try:
        S = straighten_modelfib(fc, certified=True)
    except StraighteningError as e:
        rep.fail("straightening exists", str(e))
        return rep
    rep.extend(theorems.proper_relative(S), "straightened: ")
    if args.emit:
        em = Emitter()
        em.modcat(S, f"st_{args.fibration}")
        _write(args.emit, em.text())
    return rep


def cmd_verify(args, ws: Workspace, stats: Stats) -> Report:
    th = args.theorem
    sb = 2 if args.shape_bound is None else args.shape_bound
    if args.file is None:
        rep = theorems.corpus_report(th, args.shape_bound)
        from .corpus import CORPUS_BASES, named_category

        stats.add(*(named_category(b) for b in CORPUS_BASES))
        return rep
    if th in ("integral", "correspondence", "fubini"):
        if th == "correspondence" and args.fibration:
            fc = _get(ws, args.fibration, "fibration")
            stats.add(fc.N, fc.M)
            return theorems.fibration_correspondence(fc, shape_bound=sb)
        if not args.functor:
            raise UsageError(f"verify-theorem {th} with a file needs --functor")
        FM = _get(ws, args.functor, "modcat-functor")
        stats.add(FM.base)
        if th == "integral":
            rep, I = theorems.integral_theorem(FM, shape_bound=args.shape_bound)
            stats.add(I.total)
            return rep
        if th == "correspondence":
            return theorems.correspondence(FM, shape_bound=sb)
        if not (args.left and args.right):
            raise UsageError("verify-theorem fubini needs --left and --right models")
        from .integral import fubini

        try:
            return fubini(FM, _get(ws, args.left, "model"), _get(ws, args.right, "model")).report
        except IntegralError as e:
            rep = Report(title="Fubini")
            rep.fail("restrictions are proper and relative", str(e))
            return rep
    if th == "example44":
        mc = _example_fiber(ws, args.functor) if args.functor else _model(ws, args.model)
        stats.add(mc.base)
        return theorems.example44(mc)
    if th == "slice":
        mc = _model(ws, args.model)
        stats.add(mc.base)
        return theorems.slice_arrow(mc)
    raise UsageError(f"verify-theorem {th} runs on the built-in corpus; omit the file")


def cmd_export_dot(args, ws: Workspace, stats: Stats) -> Report:
    kind = ws.kind(args.name) if args.name in ws else None
    if kind is None:
        raise UsageError(f"unknown name {args.name!r}")
    obj = ws.get(args.name)
    if kind == "category":
        text = to_dot(obj, name=args.name)
        C = obj
    elif kind in ("model", "premodel"):
        C = _pm(obj).base
        text = to_dot(C, obj, name=args.name)
    elif kind == "modcat-functor":
        I = build_integral(obj, "force", check_axioms=False)
        C = I.total
        text = to_dot(C, I.classes, I.groth.projection, name=f"∫{args.name}")
    elif kind == "fibration":
        C = obj.N
        text = to_dot(C, obj.upstairs, obj.pi, name=args.name)
    elif kind == "functor":
        C = obj.source
        text = to_dot(C, name=args.name)
    else:
        raise UsageError(f"cannot export a {kind}")
    stats.add(C)
    _write(args.output, text)
    rep = Report(title=f"export-dot {args.name}")
    rep.add("DOT written", True, args.output or "-")
    return rep


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser, top: bool) -> None:
    d = {} if top else {"default": argparse.SUPPRESS}
    p.add_argument("--json", action="store_true", help="print a JSON report", **d)
    p.add_argument("--seed-order", choices=["canonical"], help="search order (only canonical is supported)",
                   **({"default": "canonical"} if top else d))
    p.add_argument("--shape-bound", type=int, metavar="N", help="largest diagram size checked for bicompleteness",
                   **({"default": None} if top else d))
    p.add_argument("--no-timing", action="store_true", help="report elapsed_ms as 0", **d)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="intmodel", description="Finite model categories and their integrals.")
    _common(ap, True)
    sub = ap.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _common(p, False)
        p.set_defaults(fn=fn)
        return p

    p = verb("validate", cmd_validate, "parse and validate a .fcat file")
    p.add_argument("file")
    p.add_argument("--strict", action="store_true", help="fail on models without factorizations")

    p = verb("model-check", cmd_model_check, "check the model axioms")
    p.add_argument("file")
    p.add_argument("--model")

    p = verb("enumerate-models", cmd_enumerate, "list every model structure on a category")
    p.add_argument("file", nargs="?")
    p.add_argument("--category", required=True)

    p = verb("integrate", cmd_integrate, "build the integral model structure")
    p.add_argument("file")
    p.add_argument("--functor", required=True)
    p.add_argument("--mode", choices=["require", "force"], default="require")
    p.add_argument("--emit", metavar="OUT", help="write the total and its projection in the text format")

    p = verb("check-proper-relative", cmd_proper_relative, "check properness and relativeness")
    p.add_argument("file")
    p.add_argument("--functor", required=True)

    p = verb("straighten", cmd_straighten, "straighten a model fibration")
    p.add_argument("file")
    p.add_argument("--fibration", required=True)
    p.add_argument("--emit", metavar="OUT")

    p = verb("verify-theorem", cmd_verify, "run a theorem suite on a file or on the built-in corpus")
    p.add_argument("theorem", choices=theorems.THEOREMS + ("all",))
    p.add_argument("file", nargs="?")
    p.add_argument("--functor")
    p.add_argument("--fibration")
    p.add_argument("--model")
    p.add_argument("--left")
    p.add_argument("--right")

    p = verb("export-dot", cmd_export_dot, "write a DOT graph")
    p.add_argument("file")
    p.add_argument("--name", required=True)
    p.add_argument("-o", "--output")
    return ap


def _emit(args, payload: dict, text: str, out) -> None:
    if args.json:
        out.write(json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
    elif text:
        out.write(text + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    # DOT to stdout would be mixed with the report
    out = sys.stderr if getattr(args, "verb", "") == "export-dot" and getattr(args, "output", None) in (None, "-") \
        else sys.stdout
    start = time.perf_counter()
    stats = Stats()
    try:
        ws = _workspace(args)
        rep = args.fn(args, ws, stats)
    except DSLError as e:
        payload: dict[str, Any] = {"error": "parse", "message": e.message, "line": e.line, "col": e.col}
        _emit(args, payload, f"error: {e}", sys.stderr if not args.json else out)
        return EXIT_USAGE
    except UsageError as e:
        _emit(args, {"error": "usage", "message": str(e)}, f"error: {e}", sys.stderr if not args.json else out)
        return EXIT_USAGE
    elapsed = 0 if args.no_timing else round((time.perf_counter() - start) * 1000)
    payload = {"checks": [c.to_dict() for c in rep.checks], "stats": stats.to_dict(elapsed)}
    status = "PASS" if rep.ok else "FAIL"
    _emit(args, payload, f"{rep.summary()}\n{status}: {len(rep) - len(rep.failures)}/{len(rep)} checks passed", out)
    return EXIT_PASS if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
