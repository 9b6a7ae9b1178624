"""Controllability matrices built by Lie-bracket recursion.

Starting from ``M0 = B(t)``, every retained column ``m`` of one iteration
produces the candidates of the next:

* drift candidate ``J m - dm/dt`` where ``J = sum_j (j-1) A_j x^{j-2}``;
  in ``full-bracket`` mode the term ``-(dm/dx) f`` is subtracted as well,
  making the candidate the complete bracket with the drift;
* input candidates ``-(dm/dx) b`` for every column ``b`` of ``B``.

With pruning on, a candidate survives only if it raises the randomized
generic rank of the columns accumulated so far.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Sequence, Union

from .hypergraph import TemporalHypergraph, adjacency_tensors, node_degrees
from .matrix import PolyMatrix, Vector, is_zero_vector, jvp
from .poly import Poly, PolyError, Scalar, poly_sum
from .rank import DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_TRIALS, RankTracker, rank_at_point
from .tensor import SymTensor, check_dims, tvm_full, tvm_partial

LITERAL = "literal"
FULL_BRACKET = "full-bracket"
MODES = (LITERAL, FULL_BRACKET)


class CtrbError(ValueError):
    pass


@dataclass(frozen=True)
class CtrbConfig:
    """Recursion settings shared by the controllability and observability engines.

    ``max_depth`` is a positive int or ``"auto"`` (n - 1 iterations).
    ``mode`` is ``literal``/``full-bracket`` for controllability and
    ``differential``/``literal`` for observability.
    """

    mode: str = LITERAL
    max_depth: Union[int, str] = "auto"
    prune: bool = True
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.max_depth != "auto" and (not isinstance(self.max_depth, int) or self.max_depth < 1):
            raise CtrbError(f"max_depth must be a positive integer or 'auto', got {self.max_depth!r}")
        if self.trials < 1:
            raise CtrbError("trials must be >= 1")

    def depth(self, n: int) -> int:
        return max(n - 1, 1) if self.max_depth == "auto" else self.max_depth

    def tracker(self, n: int) -> RankTracker:
        return RankTracker(n, n, self.trials, self.seed, self.prime)


@dataclass(frozen=True)
class IterationTrace:
    iteration: int
    candidates: int
    zero_dropped: int
    retained: int
    rank_after: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class PolySystem:
    """Drift ``f(x, t)`` with the matrix used as its Jacobian in the recursions.

    For hypergraph dynamics ``jacobian`` is the tensor surrogate
    ``sum_j (j-1) A_j x^{j-2}``; for a linear system it is ``A(t)``.
    """

    n: int
    drift: tuple
    jacobian: PolyMatrix
    degrees: tuple = field(default=(), compare=False)

    @classmethod
    def from_tensors(cls, tensors: Mapping[int, SymTensor], n: Optional[int] = None) -> "PolySystem":
        n = check_dims(tensors, n)
        return cls(n, tuple(drift_field(tensors, n)), drift_jacobian_surrogate(tensors, n))

    @classmethod
    def from_hypergraph(cls, H: TemporalHypergraph) -> "PolySystem":
        sys_ = cls.from_tensors(adjacency_tensors(H), H.n)
        return cls(sys_.n, sys_.drift, sys_.jacobian, tuple(node_degrees(H)))

    @classmethod
    def linear(cls, A: PolyMatrix) -> "PolySystem":
        """``f = A(t) x`` for a (not necessarily symmetric) matrix in t only."""
        if A.rows != A.cols:
            raise CtrbError(f"A must be square, got {A.shape}")
        if A.depends_on_state():
            raise CtrbError("A must not depend on the state")
        n = A.rows
        x = [Poly.var(n, i) for i in range(n)]
        degrees = tuple(sum(1 for j in range(n) if j != i and (A[i, j] or A[j, i])) for i in range(n))
        return cls(n, tuple(A.apply(x)), A, degrees)


def as_system(obj: Union[PolySystem, TemporalHypergraph]) -> PolySystem:
    if isinstance(obj, PolySystem):
        return obj
    if isinstance(obj, TemporalHypergraph):
        return PolySystem.from_hypergraph(obj)
    raise TypeError(f"expected a TemporalHypergraph or PolySystem, got {type(obj).__name__}")


def drift_field(tensors: Mapping[int, SymTensor], n: Optional[int] = None) -> List[Poly]:
    """``f(x, t) = sum_j A_j(t) x^{j-1}``."""
    if not tensors:
        if n is None:
            raise PolyError("dimension required when there are no tensors")
        return [Poly.zero(n) for _ in range(n)]
    n = check_dims(tensors, n)
    parts = [tvm_full(T) for T in tensors.values()]
    return [poly_sum([p[i] for p in parts], n) for i in range(n)]


def drift_jacobian_surrogate(tensors: Mapping[int, SymTensor], n: Optional[int] = None) -> PolyMatrix:
    """``sum_j (j-1) A_j(t) x^{j-2}``; equals the Jacobian of the drift for symmetric tensors."""
    if not tensors:
        if n is None:
            raise PolyError("dimension required when there are no tensors")
        return PolyMatrix.zeros(n, n, n)
    n = check_dims(tensors, n)
    parts = [tvm_partial(T).scale(j - 1) for j, T in tensors.items()]
    return PolyMatrix([[poly_sum([P[i, k] for P in parts], n) for k in range(n)] for i in range(n)], n, n)


def lie_bracket(f: Sequence[Poly], g: Sequence[Poly], nvars: int) -> Vector:
    """``[f, g] = (dg/dx) f - (df/dx) g`` over the state variables."""
    a = jvp(g, f, nvars)
    b = jvp(f, g, nvars)
    return [p - q for p, q in zip(a, b)]


def _check_input_matrix(B: PolyMatrix, n: int, name: str = "B") -> None:
    if B.rows != n:
        raise CtrbError(f"{name} must have {n} rows, got {B.rows}")
    if B.nvars != n:
        raise CtrbError(f"{name} entries must be polynomials over {n} state variables")
    if B.depends_on_state():
        raise CtrbError(f"{name} entries must be polynomials in t only")


def _drift_candidate(system: PolySystem, m: Vector, mode: str) -> Vector:
    n = system.n
    out = [a - p.dt() for a, p in zip(system.jacobian.apply(m), m)]
    if mode == FULL_BRACKET:
        out = [a - b for a, b in zip(out, jvp(m, system.drift, n))]
    return out


def ctrb_matrix(system: Union[TemporalHypergraph, PolySystem], B: PolyMatrix,
                cfg: CtrbConfig = CtrbConfig()) -> tuple[PolyMatrix, List[IterationTrace]]:
    """Accumulated controllability matrix ``[M0 M1 ...]`` and its per-iteration trace."""
    system = as_system(system)
    n = system.n
    if cfg.mode not in MODES:
        raise CtrbError(f"mode must be one of {MODES}, got {cfg.mode!r}")
    _check_input_matrix(B, n)
    inputs = B.columns()
    tracker = cfg.tracker(n)

    current: List[Vector] = []
    zeros = 0
    for b in inputs:
        if is_zero_vector(b):
            zeros += 1
        else:
            tracker.add(b)
            current.append(b)
    trace = [IterationTrace(0, len(inputs), zeros, len(current), tracker.rank)]
    columns: List[Vector] = list(current)

    for it in range(1, cfg.depth(n) + 1):
        if tracker.full or not current:
            break
        candidates = 0
        zeros = 0
        retained: List[Vector] = []
        for m in current:
            cands = [_drift_candidate(system, m, cfg.mode)]
            if any(p.depends_on_state() for p in m):
                cands.extend([[-q for q in jvp(m, b, n)] for b in inputs])
            else:
                # dm/dx vanishes: every input candidate is zero
                zeros += len(inputs)
                candidates += len(inputs)
            for c in cands:
                candidates += 1
                if is_zero_vector(c):
                    zeros += 1
                    continue
                if cfg.prune:
                    if tracker.try_add(c):
                        retained.append(c)
                else:
                    tracker.add(c)
                    retained.append(c)
        columns.extend(retained)
        trace.append(IterationTrace(it, candidates, zeros, len(retained), tracker.rank))
        current = retained

    C = PolyMatrix.from_columns(columns, n, n) if columns else PolyMatrix.zeros(n, 0, n)
    return C, trace


def ctrb_homogeneous(H: TemporalHypergraph, B: PolyMatrix,
                     cfg: CtrbConfig = CtrbConfig()) -> tuple[PolyMatrix, List[IterationTrace]]:
    """Single-order recursion for a k-uniform hypergraph, ``(k-1) A_k x^{k-2}`` only."""
    tensors = adjacency_tensors(H)
    if len(tensors) != 1:
        raise CtrbError(f"hypergraph is not uniform (orders {sorted(tensors)})")
    (k, A), = tensors.items()
    system = PolySystem(H.n, tuple(tvm_full(A)), tvm_partial(A).scale(k - 1))
    return ctrb_matrix(system, B, cfg)


def ctrb_linear(A2: PolyMatrix, B: PolyMatrix, max_depth: Union[int, str] = "auto") -> PolyMatrix:
    """Stack ``[M0 .. M_d]`` with ``M_i = A2 M_{i-1} - dM_{i-1}/dt`` (no pruning)."""
    if A2.rows != A2.cols:
        raise CtrbError(f"A2 must be square, got {A2.shape}")
    n = A2.rows
    if A2.depends_on_state():
        raise CtrbError("A2 must not depend on the state")
    _check_input_matrix(B, n)
    depth = max(n - 1, 1) if max_depth == "auto" else int(max_depth)
    blocks = [B]
    M = B
    for _ in range(depth):
        M = (A2 @ M) - M.dt()
        blocks.append(M)
    out = blocks[0]
    for blk in blocks[1:]:
        out = out.hstack(blk)
    return out


def local_rank_at(C: PolyMatrix, x0: Sequence[Scalar], t0: Scalar) -> int:
    """Exact rank of ``C(x0, t0)``."""
    return rank_at_point(C, x0, t0)


def unit_columns(n: int, nodes: Sequence[int], scales: Optional[Sequence[Scalar]] = None) -> PolyMatrix:
    """``n x len(nodes)`` matrix whose columns are (scaled) standard basis vectors."""
    scales = scales or [1] * len(nodes)
    cols = []
    for v, s in zip(nodes, scales):
        if not 1 <= v <= n:
            raise CtrbError(f"node {v} out of range 1..{n}")
        col = [Poly.zero(n)] * n
        col[v - 1] = Poly.const(n, s)
        cols.append(col)
    return PolyMatrix.from_columns(cols, n, n) if cols else PolyMatrix.zeros(n, 0, n)
