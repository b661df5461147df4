"""Incremental maintenance of balanced orientations and density levels
under hyperedge insertion and deletion.

The maintained invariant, per tracked delta: the orientation admits no
reversible hyperpath, and idn[u] equals the static decomposition level of
the current hypergraph.  Updates restore both with local reversals and
level adjustments instead of recomputation.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .hypergraph import Hypergraph
from .orientation import (
    Orientation,
    _forward_search,
    _reverse_search,
    egalitarianize,
    reachable_to,
    reverse_hyperpath,
)


class DynamicError(Exception):
    pass


class EdgeNotFoundError(DynamicError):
    pass


class InternalInvariantError(DynamicError):
    """A state the update rules promise impossible was reached; surfacing it
    beats silently recomputing."""


def default_delta(h: Hypergraph) -> int:
    return max(1, int(h.d_e_avg))


class DynamicState:
    """Mutable hypergraph plus per-delta orientation and level maps.

    Edge ids are stable: the initial edges keep their ids, insertions append,
    deletions tombstone.  Single writer; reads are safe between updates.
    """

    def __init__(self, h: Hypergraph, deltas: Iterable[int] | None = None):
        self.deltas = sorted(set(deltas)) if deltas else [default_delta(h)]
        if any(d < 1 for d in self.deltas):
            raise DynamicError("all maintained deltas must be >= 1")
        self.n = h.n
        self.orientations: dict[int, Orientation] = {}
        self.idn: dict[int, list[int]] = {}
        for delta in self.deltas:
            o = Orientation.greedy(h, delta)
            egalitarianize(o)
            self.orientations[delta] = o
            self.idn[delta] = _levels_from_balanced(o)

    # -- queries ---------------------------------------------------------

    def idn_map(self, delta: int) -> list[int]:
        return list(self.idn[delta])

    @property
    def live_edge_count(self) -> int:
        first = self.orientations[self.deltas[0]]
        return sum(1 for e in first.edges if e is not None)

    def snapshot_hypergraph(self) -> Hypergraph:
        first = self.orientations[self.deltas[0]]
        return Hypergraph(self.n, [e for e in first.edges if e is not None])

    def live_edge_ids(self) -> list[int]:
        first = self.orientations[self.deltas[0]]
        return [i for i, e in enumerate(first.edges) if e is not None]

    # -- updates ---------------------------------------------------------

    def insert_edge(self, vertices: Iterable[int]) -> int:
        members = tuple(sorted(set(vertices)))
        if not members:
            raise DynamicError("cannot insert an empty hyperedge")
        if members[0] < 0:
            raise DynamicError("negative vertex id")
        if members[-1] >= self.n:
            self._grow(members[-1] + 1)
        eid = len(self.orientations[self.deltas[0]].edges)
        for delta in self.deltas:
            _insert_one(self.orientations[delta], self.idn[delta], members, eid)
        return eid

    def delete_edge(self, edge_id: int) -> None:
        first = self.orientations[self.deltas[0]]
        if not (0 <= edge_id < len(first.edges)) or first.edges[edge_id] is None:
            raise EdgeNotFoundError(f"no live edge with id {edge_id}")
        for delta in self.deltas:
            _delete_one(self.orientations[delta], self.idn[delta], edge_id)

    def _grow(self, new_n: int) -> None:
        extra = new_n - self.n
        for delta in self.deltas:
            o = self.orientations[delta]
            o.n = new_n
            o.indeg.extend([0] * extra)
            o.incidence.extend([] for _ in range(extra))
            self.idn[delta].extend([0] * extra)
        self.n = new_n


def _levels_from_balanced(o: Orientation) -> list[int]:
    """Density levels read directly off a fully balanced orientation: the
    level-k set is the indegree->=k core plus everything reaching it."""
    idn = [0] * o.n
    top = max(o.indeg, default=0)
    for k in range(1, top + 1):
        core = [u for u in range(o.n) if o.indeg[u] >= k]
        if not core:
            break
        for u in reachable_to(o, core):
            idn[u] = k
    return idn


def _insert_one(o: Orientation, idn: list[int], members: tuple[int, ...], eid: int) -> None:
    indeg = o.indeg
    size = min(o.delta, len(members))
    # Lowest current indegree wins a head slot; ties prefer the lower level,
    # then the lower id.  The level tiebreak matters: heading a same-indegree
    # vertex of higher level can hide a required promotion.
    order = sorted(members, key=lambda u: (indeg[u], idn[u], u))
    heads = tuple(sorted(order[:size]))
    assert eid == len(o.edges)
    o.edges.append(members)
    o.head.append(heads)
    for u in members:
        o.incidence[u].append(eid)
    for v in heads:
        indeg[v] += 1

    work = deque(order[:size])
    while work:
        v = work.popleft()
        if indeg[v] <= idn[v]:
            continue
        if indeg[v] > idn[v] + 1:
            raise InternalInvariantError(
                f"vertex {v}: indegree {indeg[v]} exceeds level {idn[v]} + 1"
            )
        want = idn[v] - 1
        path = _reverse_search(o, v, lambda s: indeg[s] == want)
        if path is not None:
            reverse_hyperpath(o, path)
            s = path.source
            if indeg[s] > idn[s]:
                work.append(s)
        else:
            # No balancing path: v's level rises, and so does every vertex
            # of the same level that can reach it.
            group = idn[v]
            for w in reachable_to(o, [v]):
                if w != v and idn[w] == group:
                    idn[w] += 1
            idn[v] += 1


def _delete_one(o: Orientation, idn: list[int], eid: int) -> None:
    indeg = o.indeg
    members = o.edges[eid]
    heads = o.head[eid]
    tails = [u for u in members if u not in heads]
    o.edges[eid] = None
    o.head[eid] = ()
    for u in members:
        o.incidence[u].remove(eid)
    for v in heads:
        indeg[v] -= 1

    demote_jobs: list[tuple[int, set[int]]] = []
    # Original heads carry the deleted edge's tails as extra seeds: any
    # certificate that routed through this edge passed one of its tails.
    work: deque[tuple[int, bool]] = deque((v, True) for v in heads)
    while work:
        v, original = work.popleft()
        seeds = {v} | set(tails) if original else {v}
        if indeg[v] == idn[v] - 2:
            bar = idn[v]
            path = _forward_search(o, v, lambda t: indeg[t] == bar)
            if path is None:
                raise InternalInvariantError(
                    f"vertex {v}: no rebalancing path to an indegree-{bar} vertex"
                )
            reverse_hyperpath(o, path)
            t = path.target
            seeds.add(t)
            if indeg[t] == idn[t] - 2:
                work.append((t, False))
            demote_jobs.append((idn[v], seeds))
        elif indeg[v] == idn[v] - 1:
            demote_jobs.append((idn[v], seeds))
        elif indeg[v] > idn[v]:
            raise InternalInvariantError(
                f"vertex {v}: indegree {indeg[v]} above level {idn[v]} after delete"
            )
        # indeg == idn: a later repair restored v; nothing to do.

    for group, seeds in demote_jobs:
        pool = sorted(w for w in reachable_to(o, sorted(seeds)) if idn[w] == group)
        for w in pool:
            if idn[w] == 0 or indeg[w] == idn[w]:
                continue
            if indeg[w] != idn[w] - 1:
                raise InternalInvariantError(
                    f"vertex {w}: indegree {indeg[w]} vs level {idn[w]}"
                )
            bar = idn[w]
            if _forward_search(o, w, lambda x: indeg[x] >= bar) is None:
                idn[w] -= 1
