"""Immutable hypergraph representation and hyperedge-list text ingestion.

A hypergraph is a vertex set 0..n-1 plus a list of hyperedges, each a
non-empty sorted tuple of vertex ids.  Duplicate hyperedges are kept as
distinct edges (parallel edges are meaningful: orientation bounds count
edges with multiplicity).  External labels live in a side table.
"""

from __future__ import annotations

import io
from typing import Iterable, TextIO


class HypergraphError(Exception):
    """Base class for ingestion and structural errors."""


class ParseError(HypergraphError):
    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class EmptyInputError(HypergraphError):
    pass


class Hypergraph:
    """Static undirected hypergraph with incidence lists.

    edges[e] is a sorted, deduplicated tuple of vertex ids; incidence[u]
    lists the edge ids containing u, in ascending order.  Instances are
    never mutated after construction and are safe to share across threads.
    """

    __slots__ = ("edges", "incidence", "n", "m")

    def __init__(self, n: int, edges: Iterable[Iterable[int]]):
        edge_list = []
        for e in edges:
            members = tuple(sorted(set(e)))
            if not members:
                raise HypergraphError("hyperedge must contain at least one vertex")
            if members[0] < 0 or members[-1] >= n:
                raise HypergraphError(f"vertex id out of range in edge {members}")
            edge_list.append(members)
        self.n = n
        self.m = len(edge_list)
        self.edges: list[tuple[int, ...]] = edge_list
        incidence: list[list[int]] = [[] for _ in range(n)]
        for eid, members in enumerate(edge_list):
            for u in members:
                incidence[u].append(eid)
        self.incidence = incidence

    @property
    def d_e_max(self) -> int:
        return max((len(e) for e in self.edges), default=0)

    @property
    def d_e_min(self) -> int:
        return min((len(e) for e in self.edges), default=0)

    @property
    def d_e_avg(self) -> float:
        return sum(len(e) for e in self.edges) / self.m if self.m else 0.0

    def degree(self, u: int) -> int:
        return len(self.incidence[u])

    def duplicate_edge_count(self) -> int:
        """Number of edges beyond the first occurrence of each vertex set."""
        return self.m - len(set(self.edges))

    def serialize(self, out: TextIO) -> None:
        """One edge per line, ascending 0-based ids, space separated."""
        for members in self.edges:
            out.write(" ".join(str(u) for u in members))
            out.write("\n")

    def serialize_str(self) -> str:
        buf = io.StringIO()
        self.serialize(buf)
        return buf.getvalue()

    def check_invariants(self) -> None:
        assert all(len(e) >= 1 for e in self.edges)
        assert sum(len(self.incidence[u]) for u in range(self.n)) == sum(
            len(e) for e in self.edges
        )
        for eid, members in enumerate(self.edges):
            for u in members:
                assert eid in self.incidence[u]

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, m={self.m})"


class VertexLabels:
    """Bijection between external labels (str or int) and dense vertex ids."""

    def __init__(self):
        self.to_id: dict = {}
        self.of_id: list = []

    def add(self, label) -> int:
        vid = self.to_id.get(label)
        if vid is None:
            vid = len(self.of_id)
            self.to_id[label] = vid
            self.of_id.append(label)
        return vid

    def __len__(self) -> int:
        return len(self.of_id)

    @classmethod
    def identity(cls, n: int) -> "VertexLabels":
        table = cls()
        for i in range(n):
            table.add(i)
        return table


def load_hypergraph(
    source: TextIO | str, labels: bool = False
) -> tuple[Hypergraph, VertexLabels]:
    """Parse hyperedge-list text into a Hypergraph plus its label table.

    One hyperedge per line; tokens separated by spaces, tabs or commas;
    lines whose first non-blank character is '#' are comments.  Tokens are
    non-negative integers unless labels=True, in which case any token is
    accepted verbatim.  Duplicate vertices within a line collapse; duplicate
    lines stay distinct edges.  Labels are assigned dense ids in first-seen
    order.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    table = VertexLabels()
    edges: list[list[int]] = []
    for line_no, raw in enumerate(source, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.replace(",", " ").split()
        members = []
        for tok in tokens:
            if labels:
                members.append(table.add(tok))
            else:
                try:
                    value = int(tok)
                except ValueError:
                    raise ParseError(f"expected integer vertex id, got {tok!r}", line_no)
                if value < 0:
                    raise ParseError(f"negative vertex id {value}", line_no)
                members.append(table.add(value))
        edges.append(members)
    if not edges:
        raise EmptyInputError("input contains no hyperedges")
    return Hypergraph(len(table), edges), table


def induced_subhypergraph(
    h: Hypergraph, s: Iterable[int]
) -> tuple[Hypergraph, dict[int, int], list[int]]:
    """Subhypergraph on vertex set s: keeps exactly the edges fully inside s.

    Returns (subgraph, old_to_new, new_to_old).  Vertices of s are renumbered
    in ascending order; vertices ending up in no edge are retained with
    degree 0.  An empty s yields the empty hypergraph.
    """
    keep = sorted(set(s))
    if keep and (keep[0] < 0 or keep[-1] >= h.n):
        raise HypergraphError("vertex id out of range in induced set")
    old_to_new = {u: i for i, u in enumerate(keep)}
    inside = set(keep)
    sub_edges = []
    for members in h.edges:
        if all(u in inside for u in members):
            sub_edges.append(tuple(old_to_new[u] for u in members))
    return Hypergraph(len(keep), sub_edges), old_to_new, keep
