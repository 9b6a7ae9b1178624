from __future__ import annotations

import itertools
import random

import pytest
import sympy as sp

from conftest import matrix_to_sympy, random_poly, to_sympy
from hyperctrl import data_path
from hyperctrl.ctrb import CtrbConfig, CtrbError, PolySystem, ctrb_matrix, drift_field, unit_columns
from hyperctrl.hypergraph import TemporalHypergraph, adjacency_tensors, load
from hyperctrl.matrix import PolyMatrix, jacobian
from hyperctrl.obsv import (DIFFERENTIAL, LITERAL, lie_derivative_t, obsv_homogeneous, obsv_linear,
                            obsv_matrix, unit_rows)
from hyperctrl.poly import Poly, dot
from hyperctrl.rank import generic_rank

CHAIN = PolyMatrix.from_scalars([[0, 1], [0, 0]], 2)
EX1 = load(data_path("ex1.json"))
DIFF = CtrbConfig(mode=DIFFERENTIAL)


def X(i, n):
    return Poly.var(n, i - 1)


class TestLieDerivative:
    def test_linear(self):
        f = CHAIN.apply([X(1, 2), X(2, 2)])
        assert lie_derivative_t(X(1, 2), f) == X(2, 2)
        assert lie_derivative_t(Poly.const(2, 7), f) == Poly.zero(2)

    def test_ex1_output(self):
        n, t = 4, Poly.t(4)
        f = drift_field(adjacency_tensors(EX1), n)
        want = (X(1, n) * X(2, n) + X(1, n) * X(3, n) + X(2, n) * X(3, n)) * t * 2
        assert lie_derivative_t(X(4, n), f) == want

    def test_time_term(self):
        n = 1
        h = X(1, n) * Poly.t(n) ** 2
        assert lie_derivative_t(h, [Poly.zero(n)]) == X(1, n) * Poly.t(n) * 2

    def test_dimension_mismatch(self):
        with pytest.raises(CtrbError):
            lie_derivative_t(X(1, 2), [X(1, 2)])


class TestObsvMatrix:
    def test_chain_observable(self):
        O, _ = obsv_matrix(PolySystem.linear(CHAIN), unit_rows(2, [1]), DIFF)
        assert O == PolyMatrix.from_scalars([[1, 0], [0, 1]], 2)

    def test_chain_unobservable(self):
        O, trace = obsv_matrix(PolySystem.linear(CHAIN), unit_rows(2, [2]), DIFF)
        assert O == PolyMatrix.from_scalars([[0, 1]], 2)
        assert trace[1].zero_dropped == 1 and generic_rank(O).rank == 1

    def test_lti_rows_reproduce_kalman(self):
        rng = random.Random(5)
        for _ in range(10):
            n = rng.randint(1, 4)
            A = PolyMatrix.from_scalars([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)], n)
            L = PolyMatrix.from_scalars([[rng.randint(-2, 2) for _ in range(n)]], n)
            O, _ = obsv_matrix(PolySystem.linear(A), L, CtrbConfig(mode=DIFFERENTIAL, prune=False))
            K = obsv_linear(A, L)
            nonzero = [K.row(i) for i in range(K.rows) if any(K.row(i))]
            # unpruned generation stops at the first vanishing row
            assert [O.row(i) for i in range(O.rows)] == nonzero[:O.rows]

    def test_all_sensors_full(self):
        O, _ = obsv_matrix(EX1, unit_rows(4, [1, 2, 3, 4]), DIFF)
        assert generic_rank(O).rank == 4

    def test_observables_returned(self):
        O, _, obs = obsv_matrix(EX1, unit_rows(4, [4]), DIFF, return_observables=True)
        assert obs.generation[0] == 0 and obs.observables[0] == X(4, 4)
        assert [jacobian([h], 4).row(0) for h in obs.observables] == [O.row(i) for i in range(O.rows)]

    def test_literal_mode_runs(self):
        O, _ = obsv_matrix(EX1, unit_rows(4, [4]), CtrbConfig(mode=LITERAL))
        assert O.row(0) == unit_rows(4, [4]).row(0)

    def test_validation(self):
        with pytest.raises(CtrbError):
            obsv_matrix(EX1, unit_rows(3, [1]), DIFF)
        with pytest.raises(CtrbError):
            obsv_matrix(EX1, PolyMatrix([[X(1, 4)] * 4], 4, 4), DIFF)
        with pytest.raises(CtrbError):
            obsv_matrix(EX1, unit_rows(4, [1]), CtrbConfig(mode="full-bracket"))

    def test_pruning_soundness(self):
        for v in range(1, 5):
            a = generic_rank(obsv_matrix(EX1, unit_rows(4, [v]), DIFF)[0]).rank
            b = generic_rank(obsv_matrix(EX1, unit_rows(4, [v]),
                                         CtrbConfig(mode=DIFFERENTIAL, prune=False))[0]).rank
            assert a == b


class TestObsvLinear:
    def test_time_varying(self):
        n, t = 2, Poly.t(2)
        A = PolyMatrix([[Poly.zero(n), t], [Poly.zero(n), Poly.zero(n)]], n)
        L = PolyMatrix.from_scalars([[1, 0]], n)
        N = obsv_linear(A, L)
        assert N.row(1) == [Poly.zero(n), t]
        assert generic_rank(N).rank == 2

    def test_zero_output(self):
        N = obsv_linear(CHAIN, PolyMatrix.from_scalars([[0, 0]], 2))
        assert N.is_zero() and generic_rank(N).rank == 0

    def test_kalman_constant(self):
        rng = random.Random(8)
        for _ in range(10):
            n = rng.randint(1, 4)
            A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
            L = [[rng.randint(-3, 3) for _ in range(n)]]
            As, Ls = sp.Matrix(A), sp.Matrix(L)
            K = sp.Matrix.vstack(*[Ls * As ** i for i in range(max(n, 2))])
            assert matrix_to_sympy(obsv_linear(PolyMatrix.from_scalars(A, n), PolyMatrix.from_scalars(L, n))) == K


def test_duality_random_lti():
    rng = random.Random(9)
    for _ in range(25):
        n = rng.randint(1, 5)
        A = PolyMatrix.from_scalars([[rng.choice([0, 0, 1, -1, 2]) for _ in range(n)] for _ in range(n)], n)
        B = PolyMatrix.from_scalars([[rng.choice([0, 1])] for _ in range(n)], n)
        C, _ = ctrb_matrix(PolySystem.linear(A), B)
        O, _ = obsv_matrix(PolySystem.linear(A.transpose()), B.transpose(), DIFF)
        assert generic_rank(C).rank == generic_rank(O).rank


def state_only(p: Poly) -> Poly:
    return Poly(p.nvars, {e: c for e, c in p.terms.items() if e[-1] == 0})


def test_differential_commutation_identity():
    """D(grad h . f) == Hess(h) f + (Df)^T grad h, written out entrywise."""
    rng = random.Random(10)
    for _ in range(25):
        n = rng.randint(1, 3)
        h = state_only(random_poly(rng, n, 3, 4))
        f = [state_only(random_poly(rng, n, 2, 3)) for _ in range(n)]
        lhs = lie_derivative_t(h, f).gradient()
        grad = h.gradient()
        Jf = jacobian(f, n)
        rhs = [dot([g.partial(i) for g in grad], f, n) + dot(grad, [Jf[k, i] for k in range(n)], n)
               for i in range(n)]
        assert lhs == rhs
        xs = sp.symbols(f"x1:{n + 1}")
        H = to_sympy(h)
        want = [sp.expand(sp.diff(sum(sp.diff(H, xs[k]) * to_sympy(f[k]) for k in range(n)), xs[i]))
                for i in range(n)]
        assert [to_sympy(p) for p in lhs] == want


def test_homogeneous_equivalence():
    rng = random.Random(11)
    for _ in range(10):
        n, k = rng.randint(3, 5), rng.choice([2, 3])
        pool = list(itertools.combinations(range(1, n + 1), k))
        edges = [(e, random_poly(rng, n, 2, 2, t_only=True) or Poly.t(n)) for e in rng.sample(pool, min(3, len(pool)))]
        H = TemporalHypergraph.build(n, edges)
        L = unit_rows(n, [rng.randint(1, n)])
        for mode in (DIFFERENTIAL, LITERAL):
            cfg = CtrbConfig(mode=mode)
            assert obsv_matrix(H, L, cfg)[0] == obsv_homogeneous(H, L, cfg)[0]


def test_unit_rows():
    assert unit_rows(3, [2]) == PolyMatrix.from_scalars([[0, 1, 0]], 3)
    assert unit_rows(3, []).shape == (0, 3)
    assert unit_columns(3, [1, 3]).transpose() == unit_rows(3, [1, 3])
