"""Brute-force reference implementations that share no code with the package.

Posets are given as ``(elements, leq)`` with ``leq`` a set of pairs. A class of
maps is a set of pairs ``(a, b)`` with ``a <= b``; identities are always in.
"""

from __future__ import annotations

import itertools


def poset(elements, covers):
    """Reflexive-transitive closure of a cover relation."""
    leq = {(x, x) for x in elements} | set(covers)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(leq), list(leq)):
            if b == c and (a, d) not in leq:
                leq.add((a, d))
                changed = True
    return list(elements), leq


def _is_lattice(P) -> bool:
    els, leq = P
    for a, b in itertools.product(els, els):
        ub = [c for c in els if (a, c) in leq and (b, c) in leq]
        lb = [c for c in els if (c, a) in leq and (c, b) in leq]
        if not any(all((j, c) in leq for c in ub) for j in ub):
            return False
        if not any(all((c, m) in leq for c in lb) for m in lb):
            return False
    return bool(els)


def _closed(leq, K) -> bool:
    return all((a, c) in K for (a, b) in K for (b2, c) in K if b == b2)


def _two_of_three(leq, W) -> bool:
    for (a, b) in leq:
        for (b2, c) in leq:
            if b != b2:
                continue
            n = ((a, b) in W) + ((b, c) in W) + ((a, c) in W)
            if n == 2:
                return False
    return True


def _lifts(leq, L, R) -> bool:
    # square a->c, b->d with i=(a,b) in L and p=(c,d) in R needs b<=c
    for (a, b) in L:
        for (c, d) in R:
            if (a, c) in leq and (b, d) in leq and (b, c) not in leq:
                return False
    return True


def _functorial_factorization(els, leq, L, R) -> bool:
    arrows = sorted(leq)
    cands = {f: [m for m in els if (f[0], m) in L and (m, f[1]) in R] for f in arrows}
    if any(not c for c in cands.values()):
        return False
    # squares f -> g: f=(a,b), g=(c,d), a<=c, b<=d; middles must be monotone
    squares = [(f, g) for f in arrows for g in arrows if (f[0], g[0]) in leq and (f[1], g[1]) in leq]
    choice = {}

    def ok(f):
        for (x, y) in squares:
            if x in choice and y in choice and (f == x or f == y):
                if (choice[x], choice[y]) not in leq:
                    return False
        return True

    def go(i):
        if i == len(arrows):
            return True
        f = arrows[i]
        for m in cands[f]:
            choice[f] = m
            if ok(f) and go(i + 1):
                return True
        del choice[f]
        return False

    return go(0)


def model_structures(P):
    """All (W, Cof, Fib) on a finite poset satisfying the model axioms, by
    trying every triple of subsets of the non-identity relations. Returned as
    frozensets of non-identity pairs, in enumeration order."""
    els, leq = P
    if not _is_lattice(P):
        return []
    ids = {(x, x) for x in els}
    non_id = sorted(p for p in leq if p[0] != p[1])
    subsets = [frozenset(s) for r in range(len(non_id) + 1) for s in itertools.combinations(non_id, r)]
    closed = [s for s in subsets if _closed(leq, s | ids)]
    out = []
    for W in closed:
        Wf = W | ids
        if not _two_of_three(leq, Wf):
            continue
        for C in closed:
            Cf = C | ids
            for F in closed:
                Ff = F | ids
                if not (_lifts(leq, Cf & Wf, Ff) and _lifts(leq, Cf, Ff & Wf)):
                    continue
                if not (_functorial_factorization(els, leq, Cf, Ff & Wf)
                        and _functorial_factorization(els, leq, Cf & Wf, Ff)):
                    continue
                out.append((W, C, F))
    return out


def count_all_triples(P) -> int:
    non_id = [p for p in P[1] if p[0] != p[1]]
    return (2 ** len(non_id)) ** 3


def slice_poset_count(P, x) -> int:
    """Objects of a slice of a poset: elements below ``x``."""
    els, leq = P
    return sum(1 for a in els if (a, x) in leq)


def grothendieck_size(base_objects, fibers_sizes) -> int:
    return sum(fibers_sizes[a] for a in base_objects)
