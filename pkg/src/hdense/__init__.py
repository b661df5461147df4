"""Density decomposition of hypergraphs via bounded-head orientations."""

from .decomposition import Decomposition, decompose_all, dsd, dsd_plus, find_k_max
from .dynamic import DynamicState
from .hypergraph import (
    EmptyInputError,
    Hypergraph,
    HypergraphError,
    ParseError,
    VertexLabels,
    induced_subhypergraph,
    load_hypergraph,
)
from .mining import DenseResult, dsm_all, dsm_flow, dsm_flow_plus, dsm_path
from .orientation import Orientation, reachable_to

__version__ = "0.1.0"

__all__ = [
    "Decomposition",
    "DenseResult",
    "DynamicState",
    "EmptyInputError",
    "Hypergraph",
    "HypergraphError",
    "Orientation",
    "ParseError",
    "VertexLabels",
    "decompose_all",
    "dsd",
    "dsd_plus",
    "dsm_all",
    "dsm_flow",
    "dsm_flow_plus",
    "dsm_path",
    "find_k_max",
    "induced_subhypergraph",
    "load_hypergraph",
    "reachable_to",
]
