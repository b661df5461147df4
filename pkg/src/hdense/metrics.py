"""Density, quality, and bound computations over orientations and
decompositions.

Ratios are computed in exact integer arithmetic (Fraction) and only turned
into floats at the reporting edge.  Bound checks return records rather than
raising: the caller decides whether a violation is fatal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .decomposition import Decomposition
from .hypergraph import Hypergraph
from .orientation import Orientation


def _as_set(x: Iterable[int]) -> set[int]:
    return x if isinstance(x, set) else set(x)


def indegree_density(o: Orientation, x: Iterable[int]) -> Fraction:
    """Average indegree over x."""
    xs = _as_set(x)
    if not xs:
        raise ValueError("indegree density of an empty set is undefined")
    return Fraction(sum(o.indeg[u] for u in xs), len(xs))


def _internal_edges(h: Hypergraph, xs: set[int]) -> list[int]:
    out = []
    for eid, members in enumerate(h.edges):
        if all(u in xs for u in members):
            out.append(eid)
    return out


def degree_density(h: Hypergraph, x: Iterable[int]) -> Fraction:
    """Average number of fully-internal edge memberships per vertex of x;
    equivalently sum of internal edge sizes over |x|."""
    xs = _as_set(x)
    if not xs:
        raise ValueError("degree density of an empty set is undefined")
    total = sum(len(h.edges[e]) for e in _internal_edges(h, xs))
    return Fraction(total, len(xs))


def edge_vertex_ratio(h: Hypergraph, x: Iterable[int]) -> Fraction:
    """Internal edge count over vertex count."""
    xs = _as_set(x)
    if not xs:
        raise ValueError("edge/vertex ratio of an empty set is undefined")
    return Fraction(len(_internal_edges(h, xs)), len(xs))


def internalization(o: Orientation, x: Iterable[int]) -> Fraction:
    """Share of x's total indegree contributed by fully-internal edges;
    0 when x holds no indegree at all."""
    xs = _as_set(x)
    if not xs:
        raise ValueError("internalization of an empty set is undefined")
    denom = sum(o.indeg[u] for u in xs)
    if denom == 0:
        return Fraction(0)
    num = 0
    for eid, members in enumerate(o.edges):
        if members is not None and all(u in xs for u in members):
            num += len(o.head[eid])
    return Fraction(num, denom)


@dataclass
class DensityGuarantee:
    k: int
    size: int
    core_fraction: Fraction  # share of members already at indegree >= k
    rho_d: Fraction
    rho: Fraction
    theta: Fraction
    rho_d_bound: Fraction  # (k-1) + core_fraction
    rho_bound: Fraction  # theta * ((k-1) + core_fraction)
    rho_d_ok: bool
    rho_ok: bool


def density_guarantee_check(
    h: Hypergraph, o: Orientation, dense: Iterable[int], k: int
) -> DensityGuarantee:
    """Evaluate the guaranteed lower bounds for a dense set at level k."""
    xs = _as_set(dense)
    if not xs:
        raise ValueError("dense set is empty")
    core = sum(1 for u in xs if o.indeg[u] >= k)
    f_k = Fraction(core, len(xs))
    rho_d = indegree_density(o, xs)
    rho = degree_density(h, xs)
    theta = internalization(o, xs)
    rho_d_bound = (k - 1) + f_k
    rho_bound = theta * rho_d_bound
    return DensityGuarantee(
        k=k,
        size=len(xs),
        core_fraction=f_k,
        rho_d=rho_d,
        rho=rho,
        theta=theta,
        rho_d_bound=rho_d_bound,
        rho_bound=rho_bound,
        rho_d_ok=rho_d >= rho_d_bound,
        rho_ok=rho >= rho_bound,
    )


@dataclass
class ConductanceRecord:
    size: int
    volume: int
    boundary_edges: int
    phi: Fraction
    mean_degree: Fraction
    bound: Fraction
    ok: bool


def conductance_bound(h: Hypergraph, x: Iterable[int]) -> ConductanceRecord:
    """Bound the cut ratio of x by 1 - rho(x)/mean_degree(x), where volume
    and mean degree use full-graph degrees."""
    xs = _as_set(x)
    if not xs:
        raise ValueError("conductance of an empty set is undefined")
    vol = sum(len(h.incidence[u]) for u in xs)
    if vol == 0:
        raise ValueError("conductance undefined: vertex set has zero volume")
    boundary = 0
    for members in h.edges:
        inside = sum(1 for u in members if u in xs)
        if 0 < inside < len(members):
            boundary += 1
    phi = Fraction(boundary, vol)
    mean_degree = Fraction(vol, len(xs))
    bound = 1 - degree_density(h, xs) / mean_degree
    return ConductanceRecord(
        size=len(xs),
        volume=vol,
        boundary_edges=boundary,
        phi=phi,
        mean_degree=mean_degree,
        bound=bound,
        ok=phi <= bound,
    )


@dataclass
class LayerStats:
    k: int
    layer_size: int
    dense_size: int
    layer_rho_d: Fraction | None  # None when the layer is empty
    layer_rho_d_ok: bool
    guarantee: DensityGuarantee
    conductance: ConductanceRecord | None  # None when the dense set has zero volume


@dataclass
class DeltaQuality:
    delta: int
    k_max: int
    non_empty_ratio: float
    avg_jaccard_distance: float
    jaccard_defined: bool
    sat: float
    cont: float
    cont_defined: bool
    layers: list[LayerStats]

    def violations(self) -> list[str]:
        out = []
        for st in self.layers:
            if not st.layer_rho_d_ok:
                out.append(f"delta={self.delta} k={st.k}: layer density out of range")
            if not st.guarantee.rho_d_ok:
                out.append(f"delta={self.delta} k={st.k}: indegree density bound")
            if not st.guarantee.rho_ok:
                out.append(f"delta={self.delta} k={st.k}: degree density bound")
            if st.conductance is not None and not st.conductance.ok:
                out.append(f"delta={self.delta} k={st.k}: conductance bound")
        return out


def saturation_ratio(h: Hypergraph, delta: int) -> float:
    """Fraction of hyperedges larger than delta (truncated head sets)."""
    if h.m == 0:
        return 0.0
    return sum(1 for e in h.edges if len(e) > delta) / h.m


def delta_quality(h: Hypergraph, decomp: Decomposition) -> DeltaQuality:
    """Quality metrics and theorem-bound records for one decomposition."""
    delta = decomp.delta
    k_max = decomp.k_max
    o = decomp.witness
    dense_sets = {k: decomp.dense_set(k) for k in range(1, k_max + 2)}
    layer_sets = {k: decomp.layer(k) for k in range(1, k_max + 1)}

    non_empty = [k for k in range(1, k_max + 1) if layer_sets[k]]
    non_empty_ratio = len(non_empty) / k_max if k_max else 0.0

    jaccard_defined = len(non_empty) >= 2
    if jaccard_defined:
        dists = []
        for a, b in zip(non_empty, non_empty[1:]):
            inter = len(layer_sets[a] & layer_sets[b])
            union = len(layer_sets[a] | layer_sets[b])
            dists.append(1.0 - inter / union)
        avg_jaccard = sum(dists) / len(dists)
    else:
        avg_jaccard = 1.0  # undefined; flagged

    cont_defined = k_max >= 2
    if cont_defined:
        ratios = [
            len(dense_sets[k + 1]) / len(dense_sets[k]) for k in range(1, k_max)
        ]
        cont = sum(ratios) / len(ratios)
    else:
        cont = 1.0

    layers = []
    for k in range(1, k_max + 1):
        layer = layer_sets[k]
        dense = dense_sets[k]
        if layer:
            rho_d_layer = indegree_density(o, layer)
            ok = (k - 1) < rho_d_layer <= k
        else:
            rho_d_layer = None
            ok = True
        guarantee = density_guarantee_check(h, o, dense, k)
        vol = sum(len(h.incidence[u]) for u in dense)
        cond = conductance_bound(h, dense) if vol else None
        layers.append(
            LayerStats(
                k=k,
                layer_size=len(layer),
                dense_size=len(dense),
                layer_rho_d=rho_d_layer,
                layer_rho_d_ok=ok,
                guarantee=guarantee,
                conductance=cond,
            )
        )
    return DeltaQuality(
        delta=delta,
        k_max=k_max,
        non_empty_ratio=non_empty_ratio,
        avg_jaccard_distance=avg_jaccard,
        jaccard_defined=jaccard_defined,
        sat=saturation_ratio(h, delta),
        cont=cont,
        cont_defined=cont_defined,
        layers=layers,
    )


def layer_quality(
    h: Hypergraph, suite: dict[int, Decomposition]
) -> dict[int, DeltaQuality]:
    """Per-delta quality report over a decomposition suite."""
    if not suite:
        raise ValueError("empty decomposition suite")
    return {delta: delta_quality(h, decomp) for delta, decomp in sorted(suite.items())}
