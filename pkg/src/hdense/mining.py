"""Dense subhypergraph miners.

All four miners compute the same unique vertex set for a given (k, delta):
the vertices holding indegree >= k under a balanced orientation, closed
under hyperpath reachability into that set.  They differ in how they reach
a sufficiently balanced state:

- dsm_path      reverses reversible hyperpaths until none remains;
- dsm_flow      routes all needed reversals through one max-flow;
- dsm_flow_plus is dsm_flow seeded with the greedy orientation;
- dsm_all       balances only across the candidate-set boundary, which is
                the cheapest sufficient condition.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .hypergraph import Hypergraph
from .orientation import (
    Hyperpath,
    Orientation,
    _forward_search,
    _reverse_search,
    _search_from_seeds,
    egalitarianize,
    reachable_to,
    reverse_hyperpath,
)


class MiningError(Exception):
    pass


@dataclass
class DenseResult:
    k: int
    delta: int
    vertices: frozenset[int]
    witness: Orientation
    core_set: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.vertices)


def _validate(k: int, delta: int) -> None:
    if k < 0:
        raise MiningError(f"k must be >= 0, got {k}")
    if delta < 1:
        raise MiningError(f"delta must be >= 1, got {delta}")


def _extract(o: Orientation, k: int, delta: int) -> DenseResult:
    core = frozenset(u for u in range(o.n) if o.indeg[u] >= k)
    dense = frozenset(reachable_to(o, core)) if core else frozenset()
    return DenseResult(k=k, delta=delta, vertices=dense, witness=o, core_set=core)


def _trivial_all(o: Orientation, k: int, delta: int) -> DenseResult:
    everything = frozenset(range(o.n))
    return DenseResult(k=k, delta=delta, vertices=everything, witness=o, core_set=everything)


def dsm_path(h: Hypergraph, k: int, delta: int) -> DenseResult:
    """Mine by repeated hyperpath reversal until the orientation is fully
    balanced, then read the result off it."""
    _validate(k, delta)
    o = Orientation.arbitrary(h, delta)
    if k == 0:
        return _trivial_all(o, k, delta)
    egalitarianize(o)
    return _extract(o, k, delta)


# ---------------------------------------------------------------------------
# Reorientation flow network
# ---------------------------------------------------------------------------


class FlowNetwork:
    """Bipartite vertex/hyperedge arc network around a pivot indegree.

    Nodes: the hypergraph's vertices, one node per hyperedge, a source and a
    sink.  Tails feed their edge node, edge nodes feed their heads (unit
    capacity); the source tops vertices up to the pivot, the sink drains
    vertices above it.  One unit of flow through tail -> edge -> head undoes
    one unit of orientation imbalance.
    """

    __slots__ = (
        "num_nodes",
        "source",
        "sink",
        "pivot",
        "adj",
        "arc_to",
        "arc_cap",
        "edge_tail_arcs",
        "edge_head_arcs",
        "forward_arc_count",
    )

    def __init__(self, num_nodes: int, source: int, sink: int, pivot: int):
        self.num_nodes = num_nodes
        self.source = source
        self.sink = sink
        self.pivot = pivot
        self.adj: list[list[int]] = [[] for _ in range(num_nodes)]
        self.arc_to: list[int] = []
        self.arc_cap: list[int] = []
        self.edge_tail_arcs: dict[int, list[tuple[int, int]]] = {}
        self.edge_head_arcs: dict[int, list[tuple[int, int]]] = {}
        self.forward_arc_count = 0

    def add_arc(self, u: int, v: int, cap: int) -> int:
        idx = len(self.arc_to)
        self.arc_to.append(v)
        self.arc_cap.append(cap)
        self.adj[u].append(idx)
        self.arc_to.append(u)
        self.arc_cap.append(0)
        self.adj[v].append(idx + 1)
        self.forward_arc_count += 1
        return idx


def build_flow_network(o: Orientation, k: int) -> FlowNetwork:
    """Network for pivot k-1 over the current orientation."""
    if k < 1:
        raise MiningError(f"flow network requires k >= 1, got {k}")
    pivot = k - 1
    n = o.n
    e_count = len(o.edges)
    source = n + e_count
    sink = source + 1
    net = FlowNetwork(n + e_count + 2, source, sink, pivot)
    for eid, members in enumerate(o.edges):
        if members is None:
            continue
        node = n + eid
        hs = o.head[eid]
        tails = []
        heads = []
        for u in members:
            if u in hs:
                heads.append((u, net.add_arc(node, u, 1)))
            else:
                tails.append((u, net.add_arc(u, node, 1)))
        net.edge_tail_arcs[eid] = tails
        net.edge_head_arcs[eid] = heads
    indeg = o.indeg
    for u in range(n):
        if indeg[u] < pivot:
            net.add_arc(source, u, pivot - indeg[u])
        elif indeg[u] > pivot:
            net.add_arc(u, sink, indeg[u] - pivot)
    return net


def max_flow(net: FlowNetwork) -> int:
    """Dinic's algorithm: BFS level phases with blocking-flow DFS.  Leaves
    the residual capacities in net.arc_cap."""
    source, sink = net.source, net.sink
    adj = net.adj
    arc_to = net.arc_to
    arc_cap = net.arc_cap
    num_nodes = net.num_nodes
    total = 0
    while True:
        level = [-1] * num_nodes
        level[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for a in adj[u]:
                v = arc_to[a]
                if arc_cap[a] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        if level[sink] < 0:
            return total
        ptr = [0] * num_nodes
        # Iterative DFS: stack of (node, arc used to enter).
        while True:
            pushed = _augment(net, level, ptr)
            if pushed == 0:
                break
            total += pushed


def _augment(net: FlowNetwork, level: list[int], ptr: list[int]) -> int:
    source, sink = net.source, net.sink
    adj = net.adj
    arc_to = net.arc_to
    arc_cap = net.arc_cap
    path: list[int] = []
    u = source
    while True:
        if u == sink:
            bottleneck = min(arc_cap[a] for a in path)
            for a in path:
                arc_cap[a] -= bottleneck
                arc_cap[a ^ 1] += bottleneck
            return bottleneck
        advanced = False
        while ptr[u] < len(adj[u]):
            a = adj[u][ptr[u]]
            v = arc_to[a]
            if arc_cap[a] > 0 and level[v] == level[u] + 1:
                path.append(a)
                u = v
                advanced = True
                break
            ptr[u] += 1
        if advanced:
            continue
        level[u] = -1
        if not path:
            return 0
        a = path.pop()
        u = arc_to[a ^ 1]
        ptr[u] += 1


def apply_flow(o: Orientation, net: FlowNetwork) -> None:
    """Rewrite the orientation along every saturated tail->edge->head pair:
    saturated tails become heads, saturated heads become tails.  Flow
    conservation at each edge node guarantees the counts match, so head
    sizes are preserved."""
    arc_cap = net.arc_cap
    head = o.head
    indeg = o.indeg
    for eid, tail_arcs in net.edge_tail_arcs.items():
        sat_in = [u for (u, a) in tail_arcs if arc_cap[a] == 0]
        if not sat_in:
            continue
        sat_out = [w for (w, a) in net.edge_head_arcs[eid] if arc_cap[a] == 0]
        if len(sat_in) != len(sat_out):
            raise MiningError(
                f"flow conservation violated at edge {eid}: "
                f"{len(sat_in)} in vs {len(sat_out)} out"
            )
        removed = set(sat_out)
        head[eid] = tuple(sorted([x for x in head[eid] if x not in removed] + sat_in))
        for u in sat_in:
            indeg[u] += 1
        for w in sat_out:
            indeg[w] -= 1


def dsm_flow(h: Hypergraph, k: int, delta: int) -> DenseResult:
    """Mine via one max-flow over the reorientation network."""
    _validate(k, delta)
    o = Orientation.arbitrary(h, delta)
    if k == 0:
        return _trivial_all(o, k, delta)
    net = build_flow_network(o, k)
    max_flow(net)
    apply_flow(o, net)
    return _extract(o, k, delta)


def dsm_flow_plus(h: Hypergraph, k: int, delta: int) -> DenseResult:
    """dsm_flow seeded with the greedy low-indegree orientation; the seed is
    already nearly balanced, so the flow step has little left to do."""
    _validate(k, delta)
    o = Orientation.greedy(h, delta)
    if k == 0:
        return _trivial_all(o, k, delta)
    net = build_flow_network(o, k)
    max_flow(net)
    apply_flow(o, net)
    return _extract(o, k, delta)


# ---------------------------------------------------------------------------
# Boundary-local miner
# ---------------------------------------------------------------------------


class _AllMiner:
    """Working state for one dsm_all run over a shared orientation."""

    def __init__(self, o: Orientation, k: int):
        self.o = o
        self.k = k
        self.members: set[int] = set()
        self.pending: deque[int] = deque()
        self.pending_set: set[int] = set()
        self.deficient: deque[int] = deque()

    def run(self) -> tuple[frozenset[int], frozenset[int]]:
        o, k = self.o, self.k
        indeg = o.indeg
        if not indeg or max(indeg) < k:
            # No orientation can push any vertex to k if this one cannot.
            return frozenset(), frozenset()
        self.members = {u for u in range(o.n) if indeg[u] >= k}
        for u in sorted(self.members):
            self.pending.append(u)
            self.pending_set.add(u)
        while True:
            while self.pending or self.deficient:
                while self.pending:
                    u = self.pending.popleft()
                    self.pending_set.discard(u)
                    if u in self.members:
                        self._drain(u)
                if self.deficient:
                    u = self.deficient.popleft()
                    if u in self.members and indeg[u] < k:
                        self._repair_or_evict(u)
            path = self._cross_pivot_path()
            if path is None:
                break
            reverse_hyperpath(o, path)
            s, t = path.source, path.target
            if indeg[s] >= k and s not in self.members:
                self.members.add(s)
                self._enqueue(s)
            if t in self.members and indeg[t] < k:
                self.deficient.append(t)
        core = frozenset(self.members)
        dense = frozenset(reachable_to(o, core)) if core else frozenset()
        return dense, core

    def _enqueue(self, u: int) -> None:
        if u not in self.pending_set:
            self.pending.append(u)
            self.pending_set.add(u)

    def _drain(self, u: int) -> None:
        """Reverse hyperpaths arriving at u from outside the candidate set
        until none remains; sources promoted to k join the set."""
        o, k = self.o, self.k
        indeg = o.indeg
        members = self.members
        while True:
            bar = indeg[u] - 2
            path = _reverse_search(
                o, u, lambda s: s not in members and indeg[s] <= bar
            )
            if path is None:
                return
            reverse_hyperpath(o, path)
            s = path.source
            if indeg[s] >= k:
                members.add(s)
                self._enqueue(s)
            if indeg[u] < k:
                self.deficient.append(u)

    def _pull_from_outside(self, u: int) -> None:
        o = self.o
        indeg = o.indeg
        members = self.members
        while True:
            bar = indeg[u] + 2
            path = _forward_search(
                o, u, lambda w: w not in members and indeg[w] >= bar
            )
            if path is None:
                return
            reverse_hyperpath(o, path)

    def _repair_or_evict(self, u: int) -> None:
        """A member fell below k: first try a reversal against a member
        neighbour, then rebalance against the outside on whichever side the
        neighbour exchange moved u, and evict if still short."""
        o, k = self.o, self.k
        indeg = o.indeg
        members = self.members
        before = indeg[u]
        nbrs = set()
        for e in o.incidence[u]:
            members_e = o.edges[e]
            if members_e is None:
                continue
            for v in members_e:
                if v != u and v in members:
                    nbrs.add(v)
        if nbrs:
            bar_up = indeg[u] + 2
            path = _forward_search(
                o, u, lambda w: w in nbrs and indeg[w] >= bar_up
            )
            if path is None:
                bar_down = indeg[u] - 2
                path = _reverse_search(
                    o, u, lambda s: s in nbrs and indeg[s] <= bar_down
                )
            if path is not None:
                reverse_hyperpath(o, path)
        if indeg[u] < before:
            self._pull_from_outside(u)
        elif indeg[u] > before:
            self._drain(u)
        if indeg[u] < k:
            members.discard(u)
        else:
            self._enqueue(u)

    def _cross_pivot_path(self) -> Hyperpath | None:
        """Certification: any surviving reversible path from the sub-pivot
        region (indegree <= k-2) into the candidate region (indegree >= k).
        The miner is done exactly when none exists."""
        o, k = self.o, self.k
        indeg = o.indeg
        seeds = [u for u in range(o.n) if indeg[u] <= k - 2]
        if not seeds:
            return None
        return _search_from_seeds(o, seeds, lambda w: indeg[w] >= k)


def mine_all_on(o: Orientation, k: int) -> tuple[frozenset[int], frozenset[int]]:
    """Run the boundary-local miner for threshold k on an existing
    orientation, mutating it.  Returns (dense vertices, core set).  This is
    the entry point the decomposition drivers share so one orientation can
    serve every k."""
    if k <= 0:
        everything = frozenset(range(o.n))
        return everything, everything
    return _AllMiner(o, k).run()


def dsm_all(h: Hypergraph, k: int, delta: int) -> DenseResult:
    """Mine by balancing only across the candidate boundary.

    Seeded with the greedy orientation (any bounded-head orientation is a
    valid start, and the greedy one leaves little imbalance to repair)."""
    _validate(k, delta)
    o = Orientation.greedy(h, delta)
    if k == 0:
        return _trivial_all(o, k, delta)
    dense, core = mine_all_on(o, k)
    return DenseResult(k=k, delta=delta, vertices=dense, witness=o, core_set=core)
