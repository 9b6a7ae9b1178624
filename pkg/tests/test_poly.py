from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import from_sympy, polys, to_sympy
from hyperctrl.poly import BadPrime, Poly, PolyError, PowerTable, as_rational, dot, poly_sum

P61 = 2**61 - 1


def X(n, i):
    return Poly.var(n, i - 1)


def T(n):
    return Poly.t(n)


class TestArithmetic:
    def test_additive_inverse_is_empty(self):
        p = X(2, 1) * T(2)
        assert (p + (-p)).terms == {}

    def test_disjoint_supports(self):
        p = X(2, 1) * T(2) + X(2, 2)
        assert p.terms == {(1, 0, 1): 1, (0, 1, 0): 1}

    def test_coefficient_merge(self):
        n = 4
        q = T(n) * X(n, 2) * X(n, 4) * 2
        assert q + q == T(n) * X(n, 2) * X(n, 4) * 4

    def test_mul_examples(self):
        n = 3
        assert X(n, 1) * (X(n, 1) * T(n)) == X(n, 1) ** 2 * T(n)
        assert (X(n, 1) + T(n)) * Poly.zero(n) == Poly.zero(n)
        assert (X(n, 2) + X(n, 3)) * T(n) == T(n) * X(n, 2) + T(n) * X(n, 3)

    def test_nvars_mismatch(self):
        with pytest.raises(PolyError):
            X(2, 1) + X(3, 1)
        with pytest.raises(PolyError):
            X(2, 1) * X(3, 1)

    def test_scalar_coercion(self):
        p = X(2, 1)
        assert 3 * p == p * 3 == p.scale(3)
        assert (p + 1) - 1 == p
        assert 1 - p == -(p - 1)

    def test_constructor_drops_zero_coefficients(self):
        assert Poly(1, {(1, 0): 0, (0, 1): Fraction(2, 2)}).terms == {(0, 1): 1}

    def test_bad_exponent(self):
        with pytest.raises(PolyError):
            Poly(2, {(1, 0): 1})
        with pytest.raises(PolyError):
            Poly(1, {(-1, 0): 1})

    def test_var_range(self):
        with pytest.raises(PolyError):
            Poly.var(2, 3)


class TestDerivatives:
    def test_power_rule(self):
        n = 2
        assert (X(n, 1) ** 2 * T(n)).partial(0) == X(n, 1) * T(n) * 2

    def test_time_derivative(self):
        assert (T(1) * 5).dt() == Poly.const(1, 5)

    def test_term_by_term(self):
        n = 4
        p = T(n) * X(n, 2) * X(n, 4) * 2 + T(n) * X(n, 3) * X(n, 4) * 2
        assert p.partial(1) == T(n) * X(n, 4) * 2

    def test_partial_out_of_range(self):
        with pytest.raises(PolyError):
            X(2, 1).partial(3)

    def test_gradient_excludes_t(self):
        n = 2
        p = X(n, 1) * X(n, 2) * T(n)
        assert p.gradient() == [X(n, 2) * T(n), X(n, 1) * T(n)]


class TestEvaluation:
    def test_eval_mod_examples(self):
        assert (X(1, 1) ** 2 * T(1)).eval_mod([3, 2], P61) == 18
        assert Poly.zero(2).eval_mod([5, 6, 7], P61) == 0
        assert X(1, 1).scale(Fraction(1, 2)).eval_mod([4, 0], 101) == 2

    def test_denominator_divisible_by_prime(self):
        with pytest.raises(BadPrime):
            X(1, 1).scale(Fraction(1, 101)).eval_mod([1, 0], 101)

    def test_point_length_checked(self):
        with pytest.raises(PolyError):
            X(2, 1).eval_mod([1, 2], P61)

    def test_exact_evaluate(self):
        p = X(2, 1) * T(2) + Fraction(1, 3)
        assert p.evaluate([2, 5, Fraction(1, 2)]) == Fraction(4, 3)

    def test_power_table_matches_eval_mod(self, rng):
        from conftest import random_poly

        point = [rng.randrange(P61) for _ in range(4)]
        table = PowerTable(point, P61)
        for _ in range(30):
            p = random_poly(rng, 3, 5, 6, frac=True)
            assert table(p) == p.eval_mod(point, P61)


class TestDegree:
    def test_total_degree(self):
        n = 4
        assert (X(n, 1) ** 2 * T(n)).total_degree() == 3
        assert Poly.const(n, 7).total_degree() == 0
        assert (T(n) * X(n, 2) * X(n, 4) * 2 + X(n, 3)).total_degree() == 3
        assert Poly.zero(n).total_degree() == -1

    def test_x_degree_and_homogeneity(self):
        n = 2
        p = X(n, 1) * X(n, 2) * T(n) ** 3
        assert p.x_degree() == 2 and p.is_x_homogeneous(2)
        assert not (p + X(n, 1)).is_x_homogeneous(2)

    def test_state_dependence(self):
        assert not (T(2) ** 2 + 1).depends_on_state()
        assert (T(2) * X(2, 2)).depends_on_state()


class TestExactDivision:
    def test_roundtrip(self, rng):
        from conftest import random_poly

        for _ in range(40):
            a = random_poly(rng, 2, 3, 4, frac=True)
            b = random_poly(rng, 2, 3, 4, frac=True)
            if b.is_zero():
                continue
            assert (a * b).exact_div(b) == a

    def test_inexact_raises(self):
        with pytest.raises(PolyError):
            (X(2, 1) + 1).exact_div(X(2, 2))

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            X(1, 1).exact_div(Poly.zero(1))


def test_rational_normalisation():
    assert as_rational("-1/2") == Fraction(-1, 2)
    assert as_rational("4/2") == 2 and type(as_rational("4/2")) is int
    with pytest.raises(PolyError):
        as_rational("abc")
    with pytest.raises(PolyError):
        as_rational(0.5)


def test_dot_and_sum():
    n = 2
    a = [X(n, 1), X(n, 2)]
    assert dot(a, a, n) == X(n, 1) ** 2 + X(n, 2) ** 2
    assert poly_sum([], n) == Poly.zero(n)


def test_str():
    n = 2
    assert str(Poly.zero(n)) == "0"
    s = str(X(n, 1) * T(n) * 2 - Fraction(1, 2))
    assert "x1" in s and "t" in s


# property tests ---------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p + (-p)).terms == {}


@settings(max_examples=60, deadline=None)
@given(polys(), st.integers(0, 3), st.integers(0, 3))
def test_mixed_partials_commute(p, i, j):
    assert p.partial(i).partial(j) == p.partial(j).partial(i)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), st.lists(st.integers(0, P61 - 1), min_size=4, max_size=4))
def test_eval_mod_is_homomorphism(p, q, point):
    ev = lambda f: f.eval_mod(point, P61)  # noqa: E731
    assert ev(p + q) == (ev(p) + ev(q)) % P61
    assert ev(p * q) == ev(p) * ev(q) % P61


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_degree_of_product(p, q):
    if p and q:
        assert (p * q).total_degree() == p.total_degree() + q.total_degree()


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_agrees_with_sympy(p, q):
    expected = sp.expand(to_sympy(p) * to_sympy(q) - to_sympy(q).diff(sp.Symbol("x2")))
    assert to_sympy(p * q - q.partial(1)) == expected
    assert from_sympy(to_sympy(p), 3) == p
