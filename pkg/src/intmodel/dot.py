"""Graphviz DOT export, written by hand.

Objects become nodes and each non-identity morphism becomes an edge. When a
structure is given, each edge carries ``weq``, ``cof`` and ``fib`` boolean
attributes. Given a projection, objects are grouped into one cluster per fiber.
"""

from __future__ import annotations

import json

from .fincat import FinCat, FinFunctor
from .modelstruct import ModelCat, PreModel
from .report import fmt


def _q(x) -> str:
    return json.dumps(fmt(x), ensure_ascii=False)


def _style(flags: dict) -> str:
    # solid for weak equivalences, tail/head markers for cofibrations/fibrations
    parts = []
    if flags["weq"]:
        parts.append('label="~"')
    if flags["cof"]:
        parts.append('arrowtail="odot", dir="both"' if not flags["fib"] else 'arrowtail="odot", arrowhead="onormal", dir="both"')
    elif flags["fib"]:
        parts.append('arrowhead="onormal"')
    return ", ".join(parts)


def to_dot(C: FinCat, structure: ModelCat | PreModel | None = None, projection: FinFunctor | None = None,
           name: str | None = None) -> str:
    pm = structure.structure if isinstance(structure, ModelCat) else structure
    title = name or C.name or "C"
    lines = [f"digraph {_q(title)} {{", "  rankdir=LR;", "  node [shape=plaintext];"]
    if projection is None:
        for x in C.objects:
            lines.append(f"  {_q(x)};")
    else:
        for i, A in enumerate(projection.target.objects):
            members = [x for x in C.objects if projection.ob(x) == A]
            lines.append(f"  subgraph \"cluster_{i}\" {{")
            lines.append(f"    label={_q(A)};")
            for x in members:
                lines.append(f"    {_q(x)};")
            lines.append("  }")
    for f in C.morphisms:
        if C.is_identity(f):
            continue
        attrs = [f"id={_q(f)}"]
        if pm is not None:
            flags = pm.flags(f)
            attrs += [f"{k}={'true' if v else 'false'}" for k, v in flags.items()]
            style = _style(flags)
            if style:
                attrs.append(style)
        lines.append(f"  {_q(C.src(f))} -> {_q(C.tgt(f))} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
