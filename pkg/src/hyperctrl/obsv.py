"""Observability matrices from iterated Lie derivatives of the outputs.

In the default ``differential`` mode the engine tracks scalar observables:
generation 0 is ``h_p = (L(t) x)_p`` and each generation maps ``h`` to
``dh/dt + (dh/dx) f``.  Rows of the observability matrix are the full
state differentials of the retained observables.

The ``literal`` mode instead propagates rows directly, applying the time
Lie derivative to each row entry; it omits the ``Dh . grad f`` term and is
kept for comparison only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

from .ctrb import CtrbConfig, CtrbError, IterationTrace, PolySystem, as_system
from .hypergraph import TemporalHypergraph, adjacency_tensors
from .matrix import PolyMatrix, Vector, is_zero_vector
from .poly import Poly, dot
from .tensor import tvm_full, tvm_partial

DIFFERENTIAL = "differential"
LITERAL = "literal"
MODES = (DIFFERENTIAL, LITERAL)


@dataclass(frozen=True)
class ObservableSet:
    observables: Tuple[Poly, ...]
    generation: Tuple[int, ...]


def lie_derivative_t(h: Poly, f: Sequence[Poly]) -> Poly:
    """``dh/dt + sum_i (dh/dx_i) f_i``."""
    if len(f) != h.nvars:
        raise CtrbError(f"vector field of length {len(f)} for {h.nvars} state variables")
    return h.dt() + dot(h.gradient(), f, h.nvars)


def differential(h: Poly) -> Vector:
    """Row ``(dh/dx_1, ..., dh/dx_n)``."""
    return h.gradient()


def _check_output_matrix(L: PolyMatrix, n: int) -> None:
    if L.cols != n:
        raise CtrbError(f"L must have {n} columns, got {L.cols}")
    if L.nvars != n:
        raise CtrbError(f"L entries must be polynomials over {n} state variables")
    if L.depends_on_state():
        raise CtrbError("L entries must be polynomials in t only")


def obsv_matrix(system: Union[TemporalHypergraph, PolySystem], L: PolyMatrix,
                cfg: CtrbConfig = CtrbConfig(mode=DIFFERENTIAL),
                return_observables: bool = False):
    """Stacked observability matrix ``(N0; N1; ...)`` and its per-generation trace.

    With ``return_observables`` an :class:`ObservableSet` is returned as a third
    element (differential mode only).
    """
    system = as_system(system)
    n = system.n
    mode = cfg.mode
    if mode not in MODES:
        raise CtrbError(f"observability mode must be one of {MODES}, got {mode!r}")
    _check_output_matrix(L, n)
    f = list(system.drift)
    x = [Poly.var(n, i) for i in range(n)]
    tracker = cfg.tracker(n)

    # each item: (observable or None, row)
    current: List[Tuple[Poly | None, Vector]] = []
    zeros = 0
    for p in range(L.rows):
        row = L.row(p)
        h = dot(row, x, n) if mode == DIFFERENTIAL else None
        if is_zero_vector(row):
            zeros += 1
            continue
        tracker.add(row)
        current.append((h, row))
    trace = [IterationTrace(0, L.rows, zeros, len(current), tracker.rank)]
    rows: List[Vector] = [r for _, r in current]
    kept_h = [(h, 0) for h, _ in current]

    for it in range(1, cfg.depth(n) + 1):
        if tracker.full or not current:
            break
        retained = []
        zeros = 0
        for h, row in current:
            if mode == DIFFERENTIAL:
                h2 = lie_derivative_t(h, f)
                row2 = differential(h2)
            else:
                h2 = None
                row2 = [lie_derivative_t(p, f) for p in row]
            if is_zero_vector(row2):
                zeros += 1
                continue
            if not cfg.prune:
                tracker.add(row2)
            elif not tracker.try_add(row2):
                continue
            retained.append((h2, row2))
        rows.extend(r for _, r in retained)
        kept_h.extend((h, it) for h, _ in retained)
        trace.append(IterationTrace(it, len(current), zeros, len(retained), tracker.rank))
        current = retained

    O = PolyMatrix.from_rows(rows, n, n) if rows else PolyMatrix.zeros(0, n, n)
    if return_observables:
        obs = ObservableSet(tuple(h for h, _ in kept_h if h is not None),
                            tuple(g for h, g in kept_h if h is not None))
        return O, trace, obs
    return O, trace


def obsv_homogeneous(H: TemporalHypergraph, L: PolyMatrix,
                     cfg: CtrbConfig = CtrbConfig(mode=DIFFERENTIAL)):
    """Observability matrix of a k-uniform hypergraph from the single order-k term."""
    tensors = adjacency_tensors(H)
    if len(tensors) != 1:
        raise CtrbError(f"hypergraph is not uniform (orders {sorted(tensors)})")
    (k, A), = tensors.items()
    system = PolySystem(H.n, tuple(tvm_full(A)), tvm_partial(A).scale(k - 1))
    return obsv_matrix(system, L, cfg)


def obsv_linear(A2: PolyMatrix, L: PolyMatrix, max_depth: Union[int, str] = "auto") -> PolyMatrix:
    """Stack ``(N0; ..; N_d)`` with ``N0 = L`` and ``N_i = N_{i-1} A2 + dN_{i-1}/dt``."""
    if A2.rows != A2.cols:
        raise CtrbError(f"A2 must be square, got {A2.shape}")
    n = A2.rows
    if A2.depends_on_state():
        raise CtrbError("A2 must not depend on the state")
    _check_output_matrix(L, n)
    depth = max(n - 1, 1) if max_depth == "auto" else int(max_depth)
    out = N = L
    for _ in range(depth):
        N = (N @ A2) + N.dt()
        out = out.vstack(N)
    return out


def unit_rows(n: int, nodes: Sequence[int], scales: Sequence | None = None) -> PolyMatrix:
    """``len(nodes) x n`` output matrix whose rows are (scaled) standard basis vectors."""
    from .ctrb import unit_columns

    return unit_columns(n, nodes, scales).transpose() if nodes else PolyMatrix.zeros(0, n, n)
