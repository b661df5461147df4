"""Bounded-head orientations, hyperpath search, and hyperpath reversal.

An orientation assigns every hyperedge e a head set of size min(delta, |e|);
the remaining vertices are its tails.  A vertex's indegree counts the edges
whose head set contains it.  A hyperpath steps from a tail of an edge to a
head of the same edge; reversing a path moves one indegree unit from its
target to its source.  A path is worth reversing exactly when the target's
indegree exceeds the source's by at least 2; an orientation admitting no
such path is maximally balanced ("egalitarian").
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Iterable

from .hypergraph import Hypergraph


class OrientationError(Exception):
    pass


class Hyperpath:
    """Alternating vertex/edge walk stored as (tail, edge, head) steps.

    No edge repeats within a path; consecutive steps share their vertex.
    """

    __slots__ = ("steps",)

    def __init__(self, steps: list[tuple[int, int, int]]):
        self.steps = steps

    @property
    def source(self) -> int:
        return self.steps[0][0]

    @property
    def target(self) -> int:
        return self.steps[-1][2]

    def __len__(self) -> int:
        return len(self.steps)

    def reversed_steps(self) -> "Hyperpath":
        """The same walk read target-to-source (undoes a reversal)."""
        return Hyperpath([(w, e, u) for (u, e, w) in reversed(self.steps)])


class Orientation:
    """Mutable orientation state over a hypergraph's edge list.

    head[e] is a sorted tuple (fast membership at typical head sizes and
    deterministic iteration); indeg[u] is kept consistent with it at all
    times.  Single writer; concurrent readers are safe between mutations.
    The dynamic module extends/retires entries in place, so edges/incidence
    are owned copies, not references into the source Hypergraph.
    """

    __slots__ = ("delta", "n", "edges", "incidence", "head", "indeg")

    def __init__(self, h: Hypergraph, delta: int, heads: list[tuple[int, ...]]):
        if delta < 1:
            raise OrientationError(f"delta must be >= 1, got {delta}")
        self.delta = delta
        self.n = h.n
        self.edges: list[tuple[int, ...] | None] = list(h.edges)
        self.incidence: list[list[int]] = [list(inc) for inc in h.incidence]
        self.head = heads
        indeg = [0] * h.n
        for hs in heads:
            for u in hs:
                indeg[u] += 1
        self.indeg = indeg

    @classmethod
    def arbitrary(cls, h: Hypergraph, delta: int) -> "Orientation":
        """Deterministic seed: the last min(delta,|e|) vertices of each edge."""
        if delta < 1:
            raise OrientationError(f"delta must be >= 1, got {delta}")
        heads = []
        for members in h.edges:
            size = min(delta, len(members))
            heads.append(members[-size:])
        return cls(h, delta, heads)

    @classmethod
    def greedy(cls, h: Hypergraph, delta: int) -> "Orientation":
        """Head each edge at its currently least-loaded vertices.

        Edges are processed in id order; within an edge the min(delta,|e|)
        vertices of lowest running indegree win, ties to the smaller id.
        """
        if delta < 1:
            raise OrientationError(f"delta must be >= 1, got {delta}")
        indeg = [0] * h.n
        heads = []
        for members in h.edges:
            size = min(delta, len(members))
            if size == len(members):
                chosen = members
            elif size == 1:
                chosen = (min(members, key=lambda u: (indeg[u], u)),)
            else:
                ranked = sorted(members, key=lambda u: (indeg[u], u))
                chosen = tuple(sorted(ranked[:size]))
            heads.append(chosen)
            for u in chosen:
                indeg[u] += 1
        o = cls(h, delta, heads)
        return o

    @property
    def live_edge_count(self) -> int:
        return sum(1 for e in self.edges if e is not None)

    def indegree_sum(self) -> int:
        return sum(self.indeg)

    def snapshot(self) -> str:
        """Debug dump: one line per live edge, 'edgeId: head ids...'."""
        lines = []
        for eid, members in enumerate(self.edges):
            if members is None:
                continue
            lines.append(f"{eid}: " + " ".join(str(u) for u in self.head[eid]))
        return "\n".join(lines) + ("\n" if lines else "")

    def check_invariants(self) -> None:
        indeg = [0] * self.n
        for eid, members in enumerate(self.edges):
            if members is None:
                continue
            hs = self.head[eid]
            assert len(hs) == min(self.delta, len(members)), (eid, hs, members)
            assert set(hs) <= set(members), (eid, hs, members)
            assert tuple(sorted(hs)) == hs
            for u in hs:
                indeg[u] += 1
        assert indeg == self.indeg


def reverse_hyperpath(o: Orientation, path: Hyperpath) -> None:
    """Apply a reversal: each step's tail enters the head set, its head
    leaves.  Net indegree effect is +1 at the source, -1 at the target."""
    head = o.head
    indeg = o.indeg
    for u, e, w in path.steps:
        hs = head[e]
        members = o.edges[e]
        if members is None or w not in hs or u not in members or u in hs:
            raise OrientationError(f"invalid reversal step ({u}, {e}, {w})")
        head[e] = tuple(sorted([x for x in hs if x != w] + [u]))
        indeg[u] += 1
        indeg[w] -= 1


def _search_from_seeds(
    o: Orientation,
    seeds: list[int],
    accept: Callable[[int], bool],
) -> Hyperpath | None:
    """BFS over tail->head steps from the seed set; returns the path to the
    first accepted non-seed vertex popped.  Seeds must be pre-sorted; edges
    are expanded once each, so returned paths never repeat an edge."""
    head = o.head
    incidence = o.incidence
    parent: dict[int, tuple[int, int]] = {}
    seen = set(seeds)
    queue = deque(seeds)
    edge_done = set()
    while queue:
        u = queue.popleft()
        if u in parent and accept(u):
            return _trace_path(parent, u)
        for e in incidence[u]:
            if e in edge_done:
                continue
            hs = head[e]
            if u in hs:
                continue
            edge_done.add(e)
            for w in hs:
                if w not in seen:
                    seen.add(w)
                    parent[w] = (u, e)
                    queue.append(w)
    return None


def find_reversible_hyperpath(
    o: Orientation,
    targets: Callable[[int], bool],
    sources: Callable[[int], bool],
) -> Hyperpath | None:
    """First reversible hyperpath from a source-satisfying vertex to a
    target-satisfying one (target indegree at least source's + 2).

    Sources are grouped by indegree and the groups searched in ascending
    order; within a group any origin witnesses the same gap, so one BFS per
    group is complete.  Seeding and expansion follow ascending vertex ids,
    making the result deterministic.  None means no such path exists."""
    indeg = o.indeg
    by_level: dict[int, list[int]] = {}
    for u in range(o.n):
        if sources(u):
            by_level.setdefault(indeg[u], []).append(u)
    if not by_level:
        return None
    top = max(indeg)
    for level in sorted(by_level):
        if level + 2 > top:
            break
        bar = level + 2
        path = _search_from_seeds(
            o, by_level[level], lambda w: indeg[w] >= bar and targets(w)
        )
        if path is not None:
            return path
    return None


def _trace_path(parent: dict[int, tuple[int, int]], t: int) -> Hyperpath:
    steps = []
    w = t
    while w in parent:
        u, e = parent[w]
        steps.append((u, e, w))
        w = u
    steps.reverse()
    return Hyperpath(steps)


def _forward_search(o: Orientation, start: int, accept) -> Hyperpath | None:
    """First hyperpath start ~> t with accept(t), or None."""
    return _search_from_seeds(o, [start], accept)


def _reverse_search(o: Orientation, start: int, accept) -> Hyperpath | None:
    """First forward hyperpath s ~> start with accept(s), found by BFS over
    the reversed step relation (head -> tails per edge)."""
    head = o.head
    incidence = o.incidence
    edges = o.edges
    nxt: dict[int, tuple[int, int]] = {}
    seen = {start}
    queue = deque([start])
    edge_done = set()
    while queue:
        x = queue.popleft()
        if x != start and accept(x):
            steps = []
            w = x
            while w != start:
                e, y = nxt[w]
                steps.append((w, e, y))
                w = y
            return Hyperpath(steps)
        for e in incidence[x]:
            if e in edge_done:
                continue
            hs = head[e]
            if x not in hs:
                continue
            edge_done.add(e)
            for w in edges[e]:
                if w not in seen and w not in hs:
                    seen.add(w)
                    nxt[w] = (e, x)
                    queue.append(w)
    return None


def reachable_to(o: Orientation, seeds: Iterable[int]) -> set[int]:
    """Vertices with a hyperpath into the seed set, plus the seeds.

    Reverse BFS: from each reached vertex, cross every edge heading it back
    to that edge's tails."""
    seen = set(seeds)
    queue = deque(sorted(seen))
    head = o.head
    incidence = o.incidence
    edges = o.edges
    edge_done = set()
    while queue:
        x = queue.popleft()
        for e in incidence[x]:
            if e in edge_done:
                continue
            hs = head[e]
            if x not in hs:
                continue
            edge_done.add(e)
            for w in edges[e]:
                if w not in seen and w not in hs:
                    seen.add(w)
                    queue.append(w)
    return seen


def _find_reversible_from_level(o: Orientation, level: int) -> Hyperpath | None:
    """First reversible path whose source sits at the given indegree."""
    indeg = o.indeg
    bar = level + 2
    seeds = [u for u in range(o.n) if indeg[u] == level]
    if not seeds:
        return None
    return _search_from_seeds(o, seeds, lambda w: indeg[w] >= bar)


def find_any_reversible_hyperpath(o: Orientation) -> Hyperpath | None:
    """Scan source indegree levels in ascending order for a reversible path."""
    present = sorted(set(o.indeg[u] for u in range(o.n)))
    if not present:
        return None
    top = present[-1]
    for level in present:
        if level + 2 > top:
            break
        path = _find_reversible_from_level(o, level)
        if path is not None:
            return path
    return None


def egalitarianize(o: Orientation) -> int:
    """Reverse reversible hyperpaths until none remains; returns the count.

    Sweeps source levels from the bottom; a reversal can in principle open a
    path at an already cleared level, so a clean full sweep is required
    before termination.  Every reversal lowers sum(indeg^2) by 2, which
    bounds the loop.
    """
    reversals = 0
    while True:
        path = find_any_reversible_hyperpath(o)
        if path is None:
            return reversals
        reverse_hyperpath(o, path)
        reversals += 1
        # Keep pulling from the same low level while it stays productive.
        level = o.indeg[path.source] - 1
        while True:
            again = _find_reversible_from_level(o, level)
            if again is None:
                break
            reverse_hyperpath(o, again)
            reversals += 1


def has_reversible_hyperpath(o: Orientation) -> bool:
    return find_any_reversible_hyperpath(o) is not None
