from __future__ import annotations

import re

from intmodel.corpus import ex44_model, slice_functor
from intmodel.dot import to_dot
from intmodel.fincat import chain
from intmodel.integral import build_integral

EDGE = re.compile(r'^\s*"([^"]*)" -> "([^"]*)" \[(.*)\];$')


def _edges(text):
    return [m.groups() for m in map(EDGE.match, text.splitlines()) if m]


def test_one_edge_per_non_identity_arrow():
    C = chain(3)
    text = to_dot(C)
    assert text.startswith("digraph") and text.rstrip().endswith("}")
    assert len(_edges(text)) == 3


def test_class_flags_follow_the_structure():
    mc = ex44_model()
    (src, tgt, attrs), = _edges(to_dot(mc.base, mc))
    assert (src, tgt) == ("0", "1")
    assert "weq=true" in attrs and "cof=true" in attrs and "fib=false" in attrs


def test_integral_clusters_by_fiber():
    I = build_integral(slice_functor(ex44_model()))
    text = to_dot(I.total, I.classes, I.groth.projection, "T")
    assert text.count("subgraph") == len(I.functor.base.objects)
    n_non_id = sum(1 for m in I.total.morphisms if not I.total.is_identity(m))
    assert len(_edges(text)) == n_non_id


def test_output_is_deterministic():
    mc = ex44_model()
    assert to_dot(mc.base, mc) == to_dot(ex44_model().base, ex44_model())
