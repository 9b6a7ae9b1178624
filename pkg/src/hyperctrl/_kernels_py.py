"""Pure-Python prime-field kernels.

Mirrors the compiled ``_kernels`` extension function for function; used when
the extension is not built or ``HYPERCTRL_PURE=1`` is set.
"""

from __future__ import annotations

from typing import List, Optional, Sequence


def rank_mod(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of an integer matrix over GF(p) by Gaussian elimination."""
    a = [[v % p for v in r] for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(a)):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        prow = a[rank]
        inv = pow(prow[c], -1, p)
        for j in range(c, ncols):
            prow[j] = prow[j] * inv % p
        for i in range(rank + 1, len(a)):
            f = a[i][c]
            if f:
                row = a[i]
                for j in range(c, ncols):
                    row[j] = (row[j] - f * prow[j]) % p
        rank += 1
        if rank == len(a):
            break
    return rank


class ModEchelon:
    """Incrementally maintained row-echelon basis of vectors over GF(p).

    Stored vectors are normalised so that each has a 1 at its pivot and
    zeros at the pivots of all earlier vectors.
    """

    def __init__(self, dim: int, p: int):
        self.dim = dim
        self.p = p
        self.pivots: List[int] = []
        self.basis: List[List[int]] = []

    @property
    def rank(self) -> int:
        return len(self.basis)

    def reduce(self, vec: Sequence[int]) -> Optional[List[int]]:
        """Residual of ``vec`` against the basis, or None if it lies in the span."""
        p = self.p
        v = [x % p for x in vec]
        for piv, b in zip(self.pivots, self.basis):
            f = v[piv]
            if f:
                for j in range(self.dim):
                    if b[j]:
                        v[j] = (v[j] - f * b[j]) % p
        for j in range(self.dim):
            if v[j]:
                inv = pow(v[j], -1, p)
                return [x * inv % p for x in v]
        return None

    def insert(self, reduced: List[int]) -> None:
        """Append a vector previously returned by :meth:`reduce`."""
        piv = next(j for j, x in enumerate(reduced) if x)
        self.pivots.append(piv)
        self.basis.append(reduced)

    def copy(self) -> "ModEchelon":
        other = ModEchelon(self.dim, self.p)
        other.pivots = list(self.pivots)
        other.basis = [list(b) for b in self.basis]
        return other


def eval_packed(exps: Sequence[int], residues: Sequence[int], width: int,
                powers: Sequence[int], stride: int, p: int) -> int:
    """Evaluate a packed polynomial mod ``p``.

    ``exps`` holds ``len(residues)`` exponent rows of length ``width``
    back to back; ``powers[v * stride + k]`` is the k-th power of variable v.
    """
    total = 0
    base = 0
    for r in residues:
        v = r
        for var in range(width):
            k = exps[base + var]
            if k:
                v = v * powers[var * stride + k] % p
        total += v
        base += width
    return total % p
