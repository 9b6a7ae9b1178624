"""Controllability and observability analysis of temporal hypergraphs.

Polynomial dynamics ``dx/dt = sum_j A_j(t) x^{j-1}`` are encoded by symmetric
adjacency tensors. Controllability and observability matrices are grown by
Lie-bracket and Lie-derivative recursions, and their generic rank is decided
by randomized evaluation over a prime field.
"""

from __future__ import annotations

from pathlib import Path

__version__ = "0.1.0"

from .ctrb import (FULL_BRACKET, LITERAL, CtrbConfig, CtrbError, IterationTrace, PolySystem,
                   ctrb_homogeneous, ctrb_linear, ctrb_matrix, drift_field, drift_jacobian_surrogate,
                   lie_bracket, local_rank_at, unit_columns)
from .hypergraph import Hyperedge, HypergraphError, TemporalHypergraph, adjacency_tensors, load, node_degrees
from .kernels import BACKEND
from .matrix import PolyMatrix, jacobian
from .obsv import (DIFFERENTIAL, ObservableSet, lie_derivative_t, obsv_homogeneous, obsv_linear,
                   obsv_matrix, unit_rows)
from .poly import Poly, PolyError
from .rank import RankResult, exact_rank_small, generic_rank, rank_at_point
from .selection import (BruteForceResult, SelectionReport, SelectionStalled, brute_force_min_nodes,
                        greedy_driver_nodes, greedy_sensor_nodes)
from .tensor import SymTensor, degree, from_hyperedges, tvm_full, tvm_partial

DATA_DIR = Path(__file__).with_name("data")


def data_path(name: str) -> Path:
    """Path of a bundled example input such as ``"ex1.json"``."""
    path = DATA_DIR / name
    if not path.is_file():
        raise FileNotFoundError(f"no bundled data file {name!r}")
    return path


__all__ = [
    "__version__",
    "adjacency_tensors",
    "BACKEND",
    "brute_force_min_nodes",
    "BruteForceResult",
    "ctrb_homogeneous",
    "ctrb_linear",
    "ctrb_matrix",
    "CtrbConfig",
    "CtrbError",
    "DATA_DIR",
    "data_path",
    "degree",
    "DIFFERENTIAL",
    "drift_field",
    "drift_jacobian_surrogate",
    "exact_rank_small",
    "from_hyperedges",
    "FULL_BRACKET",
    "generic_rank",
    "greedy_driver_nodes",
    "greedy_sensor_nodes",
    "Hyperedge",
    "HypergraphError",
    "IterationTrace",
    "jacobian",
    "lie_bracket",
    "lie_derivative_t",
    "LITERAL",
    "load",
    "local_rank_at",
    "node_degrees",
    "ObservableSet",
    "obsv_homogeneous",
    "obsv_linear",
    "obsv_matrix",
    "Poly",
    "PolyError",
    "PolyMatrix",
    "PolySystem",
    "rank_at_point",
    "RankResult",
    "SelectionReport",
    "SelectionStalled",
    "SymTensor",
    "TemporalHypergraph",
    "tvm_full",
    "tvm_partial",
    "unit_columns",
    "unit_rows",
]
