"""Generic rank of polynomial matrices.

Three routes are provided:

* :func:`generic_rank` evaluates the matrix at seeded uniform points of a
  prime field and eliminates there.  Evaluation can only lose rank, so the
  maximum over trials is reported together with a Schwartz-Zippel bound on
  the probability that it undershoots.
* :func:`exact_rank_small` runs fraction-free (Bareiss) elimination on the
  Poly entries themselves.  It is the ground-truth oracle for small sizes.
* :func:`rank_at_point` substitutes a rational point and eliminates over Q.

:class:`RankTracker` maintains the randomized rank of a growing set of
vectors incrementally; it draws exactly the points :func:`generic_rank` would,
so both agree on the same matrix.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence

from .kernels import ModEchelon, rank_mod
from .matrix import PolyMatrix
from .poly import BadPrime, Poly, PolyError, PowerTable, Scalar, as_rational

MERSENNE_61 = 2**61 - 1
DEFAULT_PRIME = MERSENNE_61
DEFAULT_TRIALS = 3
DEFAULT_SEED = 42
EXACT_CAP = 8

# tried in order when a coefficient denominator vanishes modulo the prime
PRIME_LADDER = (
    MERSENNE_61,
    2**62 - 57,
    2**63 - 25,
    2**31 - 1,
    1_000_000_007,
    998_244_353,
)

RANDOMIZED = "randomized"
EXACT = "exact"


class RankError(ValueError):
    pass


@dataclass(frozen=True)
class RankResult:
    rank: int
    method: str
    trials: int
    failure_bound: Fraction
    seed: int
    prime: int = 0

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "method": self.method,
            "trials": self.trials,
            "failure_bound": str(self.failure_bound),
            "failure_bound_float": float(self.failure_bound),
            "seed": self.seed,
            "prime": self.prime,
        }


def failure_bound(rows: int, cols: int, max_degree: int, trials: int, prime: int) -> Fraction:
    """Upper bound on P(randomized rank < generic rank).

    A maximal nonvanishing minor has degree at most ``min(rows, cols) *
    max_degree``; each independent trial misses it with probability at most
    that degree over the field size.
    """
    d = min(rows, cols) * max(max_degree, 0)
    return min(Fraction(1), Fraction(d, prime) ** trials)


def sample_point(nvars: int, seed: int, trial: int, prime: int) -> List[int]:
    rng = random.Random(seed ^ trial)
    return [rng.randrange(prime) for _ in range(nvars + 1)]


def _next_prime(prime: int) -> int:
    ladder = [p for p in PRIME_LADDER if p != prime]
    if prime in PRIME_LADDER:
        ladder = list(PRIME_LADDER[PRIME_LADDER.index(prime) + 1:])
    if not ladder:
        raise RankError("every prime in the fallback ladder divides a coefficient denominator")
    return ladder[0]


def _evaluate_rows(M: PolyMatrix, sampler: PowerTable) -> List[List[int]]:
    return [[sampler(p) for p in row] for row in M.entries]


def generic_rank(M: PolyMatrix, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
                 prime: int = DEFAULT_PRIME) -> RankResult:
    """Randomized rank over the field of rational functions in (x, t)."""
    if trials < 1:
        raise RankError("trials must be >= 1")
    while True:
        try:
            best = 0
            if M.rows and M.cols:
                for k in range(trials):
                    sampler = PowerTable(sample_point(M.nvars, seed, k, prime), prime)
                    best = max(best, rank_mod(_evaluate_rows(M, sampler), prime))
                    if best == min(M.rows, M.cols):
                        break
            break
        except BadPrime:
            prime = _next_prime(prime)
    bound = failure_bound(M.rows, M.cols, M.max_total_degree(), trials, prime)
    return RankResult(best, RANDOMIZED, trials, bound, seed, prime)


class RankTracker:
    """Randomized rank of an incrementally grown list of vectors.

    Each trial keeps its own echelon basis; the reported rank is the maximum
    over trials, matching :func:`generic_rank` on the stacked vectors.
    """

    def __init__(self, nvars: int, dim: int, trials: int = DEFAULT_TRIALS,
                 seed: int = DEFAULT_SEED, prime: int = DEFAULT_PRIME):
        if trials < 1:
            raise RankError("trials must be >= 1")
        self.nvars, self.dim = nvars, dim
        self.trials, self.seed = trials, seed
        self.vectors: List[Sequence[Poly]] = []
        self.max_degree = -1
        self._reset(prime)

    def _reset(self, prime: int) -> None:
        self.prime = prime
        self._samplers = [PowerTable(sample_point(self.nvars, self.seed, k, prime), prime)
                          for k in range(self.trials)]
        self._bases = [ModEchelon(self.dim, prime) for _ in range(self.trials)]

    @property
    def rank(self) -> int:
        return max(b.rank for b in self._bases)

    @property
    def full(self) -> bool:
        return self.rank == self.dim

    def failure_bound(self) -> Fraction:
        return failure_bound(self.dim, len(self.vectors), self.max_degree, self.trials, self.prime)

    def _residuals(self, vec: Sequence[Poly]):
        if len(vec) != self.dim:
            raise PolyError(f"vector of length {len(vec)} in a {self.dim}-dim tracker")
        while True:
            try:
                return [b.reduce([s(p) for p in vec]) for s, b in zip(self._samplers, self._bases)]
            except BadPrime:
                self._rebuild(_next_prime(self.prime))

    def _rebuild(self, prime: int) -> None:
        kept = self.vectors
        self._reset(prime)
        self.vectors = []
        for v in kept:
            self.add(v)

    def _commit(self, vec: Sequence[Poly], residuals) -> None:
        for b, r in zip(self._bases, residuals):
            if r is not None:
                b.insert(r)
        self.vectors.append(vec)
        self.max_degree = max([self.max_degree] + [p.total_degree() for p in vec])

    def raises_rank(self, vec: Sequence[Poly]) -> bool:
        """Would appending ``vec`` increase the tracked rank? (no state change)"""
        top = self.rank
        res = self._residuals(vec)
        return any(r is not None and b.rank == top for b, r in zip(self._bases, res))

    def try_add(self, vec: Sequence[Poly]) -> bool:
        """Append ``vec`` only if it raises the rank; report whether it did."""
        top = self.rank
        res = self._residuals(vec)
        if any(r is not None and b.rank == top for b, r in zip(self._bases, res)):
            self._commit(vec, res)
            return True
        return False

    def add(self, vec: Sequence[Poly]) -> None:
        """Append ``vec`` unconditionally."""
        self._commit(vec, self._residuals(vec))

    def result(self) -> RankResult:
        return RankResult(self.rank, RANDOMIZED, self.trials, self.failure_bound(), self.seed, self.prime)


# ---------------------------------------------------------------------------
# exact routes

def _bareiss_rank(grid: List[List], div) -> int:
    rows = len(grid)
    cols = len(grid[0]) if grid else 0
    a = [list(r) for r in grid]
    prev = None
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        for i in range(r + 1, rows):
            row = a[i]
            f = row[c]
            for j in range(c + 1, cols):
                v = pr[c] * row[j] - f * pr[j]
                row[j] = v if prev is None else div(v, prev)
            row[c] = f - f
        prev = pr[c]
        r += 1
        if r == rows:
            break
    return r


def exact_rank_small(M: PolyMatrix, cap: int = EXACT_CAP) -> RankResult:
    """Rank over Q(x, t) by fraction-free elimination on Poly entries."""
    if min(M.rows, M.cols) > cap:
        raise RankError(f"matrix {M.rows}x{M.cols} exceeds the exact-rank cap {cap}")
    grid = M.entries if M.rows <= M.cols else M.transpose().entries
    r = _bareiss_rank(grid, Poly.exact_div) if grid and grid[0] else 0
    return RankResult(r, EXACT, 0, Fraction(0), 0, 0)


def rational_rank(grid: Sequence[Sequence[Scalar]]) -> int:
    """Exact rank of a rational matrix."""
    if not grid or not grid[0]:
        return 0
    den = 1
    rows = [[as_rational(v) for v in r] for r in grid]
    for r in rows:
        for v in r:
            if isinstance(v, Fraction):
                den = math.lcm(den, v.denominator)
    ints = [[int(v * den) for v in r] for r in rows]
    if len(ints) > len(ints[0]):
        ints = [list(c) for c in zip(*ints)]
    return _bareiss_rank(ints, lambda a, b: a // b)


def evaluate_at(M: PolyMatrix, x0: Sequence[Scalar], t0: Scalar) -> List[List]:
    if len(x0) != M.nvars:
        raise RankError(f"point has {len(x0)} state coordinates, matrix has {M.nvars} variables")
    point = list(x0) + [t0]
    return [[p.evaluate(point) for p in row] for row in M.entries]


def rank_at_point(M: PolyMatrix, x0: Sequence[Scalar], t0: Scalar) -> int:
    """Exact rank of ``M(x0, t0)`` over the rationals."""
    return rational_rank(evaluate_at(M, x0, t0))
