"""Exhaustive ground truth for small instances.

Enumerates every bounded-head orientation of a hypergraph, certifies a
maximally balanced one, and derives dense sets and per-vertex density
levels directly from the definitions.  Everything here is deliberately
independent of the mining code paths it anchors.
"""

from __future__ import annotations

import math
from itertools import combinations

from .hypergraph import Hypergraph
from .orientation import Orientation

SIZE_GUARD = 1_000_000


class OracleSizeError(Exception):
    pass


class OracleInternalError(Exception):
    pass


def _orientation_space(h: Hypergraph, delta: int) -> list[list[tuple[int, ...]]]:
    choices = []
    total = 1
    for members in h.edges:
        size = min(delta, len(members))
        per_edge = list(combinations(members, size))
        total *= len(per_edge)
        if total > SIZE_GUARD:
            raise OracleSizeError(
                f"orientation space exceeds {SIZE_GUARD}, refusing to enumerate"
            )
        choices.append(per_edge)
    return choices


def _reach_masks(n: int, edges: list[tuple[int, ...]], heads) -> list[int]:
    """Bitmask transitive closure of the tail->head step relation."""
    step = [0] * n
    for members, hs in zip(edges, heads):
        hmask = 0
        for w in hs:
            hmask |= 1 << w
        for u in members:
            if u not in hs:
                step[u] |= hmask
    reach = step[:]
    changed = True
    while changed:
        changed = False
        for u in range(n):
            acc = reach[u]
            m = acc
            while m:
                low = m & -m
                m ^= low
                acc |= reach[low.bit_length() - 1]
            if acc != reach[u]:
                reach[u] = acc
                changed = True
    return reach


def _no_reversible(n: int, indeg: list[int], reach: list[int]) -> bool:
    for u in range(n):
        m = reach[u]
        bar = indeg[u] + 2
        while m:
            low = m & -m
            m ^= low
            if indeg[low.bit_length() - 1] >= bar:
                return False
    return True


def oracle_egalitarian(h: Hypergraph, delta: int) -> Orientation:
    """Enumerate all bounded-head orientations and return one whose
    descending-sorted indegree vector is lexicographically minimal.

    Minimality implies balance: a reversible path would improve the vector.
    The winner is still certified against the exhaustive reachability check,
    and if that ever failed the full space is scanned for any certified
    orientation; exhausting it too means the model itself is misread."""
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    choices = _orientation_space(h, delta)
    n, m = h.n, h.m

    best_vec: tuple[int, ...] | None = None
    best_heads: list[tuple[int, ...]] | None = None
    indeg = [0] * n
    picked: list[tuple[int, ...]] = [()] * m

    def visit(i: int, cur_max: int) -> None:
        nonlocal best_vec, best_heads
        if best_vec is not None and cur_max > best_vec[0]:
            return
        if i == m:
            vec = tuple(sorted(indeg, reverse=True))
            if best_vec is None or vec < best_vec:
                best_vec = vec
                best_heads = picked.copy()
            return
        for hs in choices[i]:
            for u in hs:
                indeg[u] += 1
            picked[i] = hs
            visit(i + 1, max(cur_max, max(indeg[u] for u in hs)))
            for u in hs:
                indeg[u] -= 1

    visit(0, 0)
    assert best_heads is not None
    final = [0] * n
    for hs in best_heads:
        for u in hs:
            final[u] += 1
    reach = _reach_masks(n, list(h.edges), best_heads)
    if _no_reversible(n, final, reach):
        return Orientation(h, delta, best_heads)
    # Fallback: scan the whole space for any certified orientation.
    found = _scan_for_certified(h, delta, choices)
    if found is None:
        raise OracleInternalError(
            "no enumerated orientation is free of reversible hyperpaths"
        )
    return Orientation(h, delta, found)


def _scan_for_certified(h, delta, choices):
    n, m = h.n, h.m
    indeg = [0] * n
    picked: list[tuple[int, ...]] = [()] * m
    edges = list(h.edges)

    def visit(i: int):
        if i == m:
            reach = _reach_masks(n, edges, picked)
            if _no_reversible(n, indeg, reach):
                return picked.copy()
            return None
        for hs in choices[i]:
            for u in hs:
                indeg[u] += 1
            picked[i] = hs
            out = visit(i + 1)
            for u in hs:
                indeg[u] -= 1
            if out is not None:
                return out
        return None

    return visit(0)


def dense_set_from(o: Orientation, k: int) -> frozenset[int]:
    """Dense vertex set at threshold k read off a balanced orientation:
    the vertices at indegree >= k plus everything with a hyperpath into
    them, via the exhaustive closure."""
    if k <= 0:
        return frozenset(range(o.n))
    edges = [e for e in o.edges if e is not None]
    heads = [o.head[i] for i, e in enumerate(o.edges) if e is not None]
    reach = _reach_masks(o.n, edges, heads)
    smask = 0
    core = []
    for u in range(o.n):
        if o.indeg[u] >= k:
            smask |= 1 << u
            core.append(u)
    if not core:
        return frozenset()
    out = set(core)
    for u in range(o.n):
        if reach[u] & smask:
            out.add(u)
    return frozenset(out)


def oracle_dense(h: Hypergraph, k: int, delta: int) -> frozenset[int]:
    if k <= 0:
        return frozenset(range(h.n))
    return dense_set_from(oracle_egalitarian(h, delta), k)


def oracle_idn(h: Hypergraph, delta: int) -> list[int]:
    """Exact per-vertex density level: the largest k whose dense set still
    contains the vertex."""
    o = oracle_egalitarian(h, delta)
    idn = [0] * h.n
    top = max(o.indeg, default=0)
    for k in range(1, top + 1):
        for u in dense_set_from(o, k):
            idn[u] = k
    return idn
