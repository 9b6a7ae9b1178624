"""The compiled and pure-Python kernels must agree bit for bit."""

from __future__ import annotations

import importlib
import random

import pytest

from hyperctrl import _kernels_py as pure
from hyperctrl import kernels

PRIMES = [2**61 - 1, 2**63 - 25, 1_000_000_007, 101, 3]

try:
    compiled = importlib.import_module("hyperctrl._kernels")
except ImportError:  # extension not built
    compiled = None

needs_ext = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def random_rows(rng, p, r, c, sparsity=0.3):
    return [[0 if rng.random() < sparsity else rng.randrange(p) for _ in range(c)] for _ in range(r)]


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    if compiled is not None and kernels.BACKEND == "cython":
        assert kernels.rank_mod is compiled.rank_mod


@pytest.mark.parametrize("p", PRIMES)
def test_pure_rank_mod_small_cases(p):
    assert pure.rank_mod([], p) == 0
    assert pure.rank_mod([[0, 0], [0, 0]], p) == 0
    assert pure.rank_mod([[1, 2], [2, 4]], p) == 1
    assert pure.rank_mod([[1, 0], [0, 1]], p) == 2
    assert pure.rank_mod([[p, 0], [0, 2 * p]], p) == 0


@needs_ext
@pytest.mark.parametrize("p", PRIMES)
def test_rank_mod_agrees(p):
    rng = random.Random(p % 1000)
    for _ in range(60):
        rows = random_rows(rng, p, rng.randint(1, 7), rng.randint(1, 7))
        if rng.random() < 0.3 and len(rows) > 1:
            rows[-1] = [(a + b) % p for a, b in zip(rows[0], rows[1])]
        assert compiled.rank_mod(rows, p) == pure.rank_mod(rows, p)


@needs_ext
@pytest.mark.parametrize("p", PRIMES)
def test_echelon_agrees(p):
    rng = random.Random(p % 997)
    for _ in range(20):
        dim = rng.randint(1, 6)
        a, b = pure.ModEchelon(dim, p), compiled.ModEchelon(dim, p)
        for _ in range(dim + 3):
            v = random_rows(rng, p, 1, dim, 0.4)[0]
            if rng.random() < 0.3 and a.rank:
                v = [x * 3 % p for x in a.basis[0]]
            ra, rb = a.reduce(v), b.reduce(v)
            assert ra == rb
            if ra is not None:
                a.insert(ra)
                b.insert(rb)
            assert a.rank == b.rank and a.pivots == b.pivots
        c = b.copy()
        assert c.rank == b.rank and c.pivots == b.pivots


@needs_ext
@pytest.mark.parametrize("p", PRIMES)
def test_eval_packed_agrees(p):
    from array import array

    rng = random.Random(p % 991)
    for _ in range(40):
        width, nterms, stride = rng.randint(1, 5), rng.randint(0, 8), 6
        exps = array("q", [rng.randint(0, stride - 1) for _ in range(width * nterms)])
        res = array("Q", [rng.randrange(p) for _ in range(nterms)])
        point = [rng.randrange(p) for _ in range(width)]
        powers = array("Q", [pow(v, k, p) for v in point for k in range(stride)])
        assert compiled.eval_packed(exps, res, width, powers, stride, p) == \
            pure.eval_packed(exps, res, width, powers, stride, p)


@needs_ext
def test_echelon_rejects_bad_input():
    e = compiled.ModEchelon(2, 101)
    with pytest.raises(ValueError):
        e.reduce([1, 2, 3])
    with pytest.raises(ValueError):
        e.insert([0, 0])


def test_pure_backend_end_to_end():
    import os
    import subprocess
    import sys

    code = ("from hyperctrl import data_path, kernels, load, ctrb_matrix, generic_rank;"
            "from hyperctrl.cli import load_matrix;"
            "H = load(data_path('ex1.json'));"
            "r = [generic_rank(ctrb_matrix(H, load_matrix(str(data_path(b)), 4, 'B'))[0]).rank"
            " for b in ('ex1_b1.json', 'ex1_b2.json')];"
            "print(kernels.BACKEND, r)")
    env = dict(os.environ, HYPERCTRL_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python [4, 3]"
