from __future__ import annotations

import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from intmodel.adjunction import (
    Adjunction,
    check_adjunction,
    compose_adjunctions,
    find_adjoint,
    from_functors,
    galois_check,
    identity_adjunction,
)
from intmodel.fincat import FinFunctor, build_poset, chain


def monotone_maps(P, Q):
    for values in itertools.product(Q.objects, repeat=len(P.objects)):
        obj = dict(zip(P.objects, values))
        if all(Q.leq(obj[P.src(f)], obj[P.tgt(f)]) for f in P.morphisms):
            yield FinFunctor(P, Q, obj, {f: (obj[P.src(f)], obj[P.tgt(f)]) for f in P.morphisms}, "L")


def right_adjoint_oracle(L):
    """Poset right adjoint: R(b) is the greatest a with L(a) <= b."""
    P, Q = L.source, L.target
    out = {}
    for b in Q.objects:
        below = [a for a in P.objects if Q.leq(L.ob(a), b)]
        top = [a for a in below if all(P.leq(x, a) for x in below)]
        if not top:
            return None
        out[b] = top[0]
    return out


B2 = build_poset([("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")], name="B2")


def test_identity_adjunction():
    assert check_adjunction(identity_adjunction(B2)).ok


def test_find_adjoint_matches_oracle_exhaustively():
    C3 = chain(3)
    n_with = 0
    for P, Q in ((C3, B2), (B2, C3), (B2, B2)):
        for L in monotone_maps(P, Q):
            expected = right_adjoint_oracle(L)
            adj = find_adjoint(L, "right")
            assert (adj is None) == (expected is None)
            if adj is not None:
                n_with += 1
                assert adj.right.obj == expected
                assert galois_check(adj.left, adj.right) is None
    assert n_with > 0


def test_left_adjoint_side():
    C3 = chain(3)
    # constant at the top has constant at the bottom as left adjoint
    R = FinFunctor(C3, C3, {x: "2" for x in C3.objects}, {f: ("2", "2") for f in C3.morphisms}, "top")
    adj = find_adjoint(R, "left")
    assert adj is not None and set(adj.left.obj.values()) == {"0"}
    assert check_adjunction(adj).ok


def test_from_functors_rejects_non_adjoint_pair():
    C = chain(2)
    I = identity_adjunction(C).left
    swap = FinFunctor(C, C, {"0": "1", "1": "1"}, {f: ("1", "1") for f in C.morphisms}, "top")
    assert from_functors(I, swap) is None
    assert from_functors(I, I) is not None


def test_broken_triangle_reported():
    C = chain(2)
    adj = find_adjoint(FinFunctor(C, C, {"0": "0", "1": "0"}, {f: ("0", "0") for f in C.morphisms}, "bot"), "right")
    assert adj is not None
    bad = Adjunction(adj.left, adj.right, adj.unit, {b: ("0", "0") for b in C.objects}, "bad")
    assert not check_adjunction(bad).ok


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_composition_of_adjunctions(data):
    C3 = chain(3)
    maps = [L for L in monotone_maps(C3, B2) if find_adjoint(L, "right") is not None]
    maps2 = [L for L in monotone_maps(B2, C3) if find_adjoint(L, "right") is not None]
    a1 = find_adjoint(data.draw(st.sampled_from(maps)), "right")
    a2 = find_adjoint(data.draw(st.sampled_from(maps2)), "right")
    comp = compose_adjunctions(a1, a2)
    assert check_adjunction(comp).ok
    assert galois_check(comp.left, comp.right) is None
