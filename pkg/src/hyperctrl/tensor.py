"""Symmetric sparse adjacency tensors and their contractions with the state.

Only one representative (the sorted index tuple) is stored per hyperedge.
Because hyperedges have distinct nodes, every stored tuple stands for
``j!`` logical entries, and the contractions below count those
permutations combinatorially instead of enumerating them.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .matrix import PolyMatrix
from .poly import Poly, PolyError, poly_sum

VERBATIM = "verbatim"
FACTORIAL = "factorial"
NORMALIZATIONS = (VERBATIM, FACTORIAL)


class TensorError(ValueError):
    pass


@dataclass(frozen=True)
class SymTensor:
    """Order-``order`` symmetric tensor on ``dim`` nodes (1-based indices).

    ``entries`` maps strictly increasing index tuples to nonzero Polys in t.
    Polys carry ``nvars == dim`` so they can be combined with state polynomials.
    """

    order: int
    dim: int
    entries: Mapping[Tuple[int, ...], Poly] = field(default_factory=dict)

    def __post_init__(self):
        if self.order < 2:
            raise TensorError(f"tensor order must be >= 2, got {self.order}")
        for idx, w in self.entries.items():
            if len(idx) != self.order or list(idx) != sorted(set(idx)):
                raise TensorError(f"entry index {idx} is not a sorted tuple of distinct nodes")
            if idx[0] < 1 or idx[-1] > self.dim:
                raise TensorError(f"entry index {idx} out of range 1..{self.dim}")
            if w.nvars != self.dim or w.depends_on_state() or w.is_zero():
                raise TensorError(f"entry {idx} must be a nonzero polynomial in t alone")

    def __getitem__(self, index: Sequence[int]) -> Poly:
        """Logical lookup; any permutation of a stored tuple returns its entry."""
        if len(index) != self.order:
            raise TensorError(f"expected {self.order} indices, got {len(index)}")
        key = tuple(sorted(index))
        return self.entries.get(key, Poly.zero(self.dim))

    def __len__(self) -> int:
        return len(self.entries)


def from_hyperedges(
    n: int,
    j: int,
    edges: Iterable[Tuple[Iterable[int], Poly]],
    normalization: str = VERBATIM,
) -> SymTensor:
    """Build the order-``j`` adjacency tensor from ``(nodes, weight)`` pairs.

    ``verbatim`` stores the weight itself at every permutation; ``factorial``
    stores ``weight / (j-1)!`` so that :func:`degree` counts hyperedges.
    """
    if normalization not in NORMALIZATIONS:
        raise TensorError(f"unknown normalization {normalization!r}")
    scale = 1 if normalization == VERBATIM else math.factorial(j - 1)
    entries: Dict[Tuple[int, ...], Poly] = {}
    for nodes, weight in edges:
        nodes = list(nodes)
        if len(set(nodes)) != len(nodes):
            raise TensorError(f"duplicate node in edge {nodes}")
        if len(nodes) != j:
            raise TensorError(f"edge {nodes} does not have {j} nodes")
        if any(v < 1 or v > n for v in nodes):
            raise TensorError(f"edge {nodes} has a node outside 1..{n}")
        key = tuple(sorted(nodes))
        if key in entries:
            raise TensorError(f"duplicate edge {list(key)}")
        if scale != 1:
            weight = weight.scale(Fraction(1, scale))
        entries[key] = weight
    return SymTensor(j, n, entries)


def degree(T: SymTensor, i: int) -> Poly:
    """Sum of all logical entries with first index ``i``."""
    if not 1 <= i <= T.dim:
        raise TensorError(f"node {i} out of range 1..{T.dim}")
    perms = math.factorial(T.order - 1)
    total = Poly.zero(T.dim)
    for idx, w in T.entries.items():
        if i in idx:
            total = total + w.scale(perms)
    return total


def _monomial(n: int, nodes: Iterable[int]) -> Poly:
    exp = [0] * (n + 1)
    for v in nodes:
        exp[v - 1] += 1
    return Poly._raw(n, {tuple(exp): 1})


def tvm_full(T: SymTensor) -> list[Poly]:
    """The vector field ``A x^{j-1}``: modes 2..j contracted with the state.

    Component i1 gathers, for each stored tuple containing i1, the
    ``(j-1)!`` orderings of the other indices, all of which give the same
    monomial.
    """
    n, j = T.dim, T.order
    perms = math.factorial(j - 1)
    acc: list[list[Poly]] = [[] for _ in range(n)]
    for idx, w in T.entries.items():
        w = w.scale(perms)
        for a, i1 in enumerate(idx):
            acc[i1 - 1].append(w * _monomial(n, idx[:a] + idx[a + 1:]))
    return [poly_sum(ps, n) for ps in acc]


def tvm_partial(T: SymTensor) -> PolyMatrix:
    """The matrix ``A x^{j-2}``: modes 3..j contracted, modes 1-2 free.

    For ``j == 2`` this is the adjacency matrix itself.
    """
    n, j = T.dim, T.order
    perms = math.factorial(j - 2)
    acc: list[list[list[Poly]]] = [[[] for _ in range(n)] for _ in range(n)]
    for idx, w in T.entries.items():
        w = w.scale(perms)
        for a, i1 in enumerate(idx):
            for b, i2 in enumerate(idx):
                if a == b:
                    continue
                rest = [v for c, v in enumerate(idx) if c != a and c != b]
                acc[i1 - 1][i2 - 1].append(w * _monomial(n, rest))
    return PolyMatrix([[poly_sum(ps, n) for ps in row] for row in acc], n, n)


def check_dims(tensors: Mapping[int, SymTensor], n: int | None = None) -> int:
    """Common dimension of a family of tensors (raises on mismatch)."""
    dims = {T.dim for T in tensors.values()}
    if n is not None:
        dims.add(n)
    if len(dims) > 1:
        raise PolyError(f"tensor dimension mismatch: {sorted(dims)}")
    if not dims:
        raise PolyError("cannot infer dimension from an empty tensor family")
    return dims.pop()
