"""Shared helpers: a sympy bridge used as an independent oracle, and random generators."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import strategies as st

from hyperctrl.matrix import PolyMatrix
from hyperctrl.poly import Poly
from hyperctrl.tensor import SymTensor


def symbols(n):
    xs = sp.symbols(f"x1:{n + 1}") if n else ()
    return list(xs), sp.Symbol("t")


def to_sympy(p: Poly):
    xs, t = symbols(p.nvars)
    gens = xs + [t]
    expr = sp.Integer(0)
    for exp, c in p.terms.items():
        term = sp.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sp.Integer(c)
        for g, e in zip(gens, exp):
            term *= g ** e
        expr += term
    return sp.expand(expr)


def from_sympy(expr, n: int) -> Poly:
    xs, t = symbols(n)
    P = sp.Poly(sp.expand(expr), *(xs + [t]))
    terms = {}
    for exp, c in P.terms():
        c = sp.Rational(c)
        terms[tuple(exp)] = Fraction(int(c.p), int(c.q))
    return Poly(n, terms)


def matrix_to_sympy(M: PolyMatrix):
    return sp.Matrix(M.rows, M.cols, lambda i, j: to_sympy(M[i, j]))


def random_poly(rng: random.Random, n: int, max_deg: int = 3, max_terms: int = 4,
                t_only: bool = False, frac: bool = False) -> Poly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exp = [0] * (n + 1)
        for _ in range(rng.randint(0, max_deg)):
            exp[n if t_only else rng.randrange(n + 1)] += 1
        c = rng.randint(-5, 5)
        if frac and rng.random() < 0.3:
            c = Fraction(c, rng.randint(1, 4))
        terms[tuple(exp)] = terms.get(tuple(exp), 0) + c
    return Poly(n, terms)


def random_matrix(rng, rows, cols, n, max_deg=3, t_only=False) -> PolyMatrix:
    return PolyMatrix([[random_poly(rng, n, max_deg, 3, t_only) for _ in range(cols)] for _ in range(rows)],
                      n, cols)


def random_tensor(rng, n: int, j: int, density: float = 0.5) -> SymTensor:
    import itertools

    entries = {}
    for idx in itertools.combinations(range(1, n + 1), j):
        if rng.random() < density:
            w = random_poly(rng, n, 2, 2, t_only=True)
            if w:
                entries[idx] = w
    return SymTensor(j, n, entries)


@st.composite
def polys(draw, n: int = 3, max_deg: int = 3, max_terms: int = 4):
    nterms = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(nterms):
        exp = tuple(draw(st.lists(st.integers(0, max_deg), min_size=n + 1, max_size=n + 1)))
        num = draw(st.integers(-6, 6))
        den = draw(st.integers(1, 3))
        terms[exp] = terms.get(exp, 0) + Fraction(num, den)
    return Poly(n, terms)


@pytest.fixture
def rng():
    return random.Random(20240601)


# acceptance bookkeeping --------------------------------------------------

ACCEPTANCE: dict = {}


def record(criterion: int, label: str, ok: bool, detail: str) -> None:
    """Remember one acceptance sub-check and echo it (visible with ``-s``)."""
    ACCEPTANCE.setdefault(criterion, []).append((label, bool(ok), detail))
    print(f"[criterion {criterion}] {label}: {'PASS' if ok else 'FAIL'} ({detail})")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        subs = ACCEPTANCE[crit]
        ok = all(s[1] for s in subs)
        failed = [s[0] for s in subs if not s[1]]
        note = "" if ok else f" failing: {', '.join(failed)}"
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'}"
                                    f" ({len(subs) - len(failed)}/{len(subs)} checks){note}")
