"""Compare the compiled prime-field kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--skip-end-to-end]

Micro-benchmarks call both kernel modules directly on identical inputs; the
end-to-end rows run a brute-force driver search in a subprocess once with the
default backend and once with ``HYPERCTRL_PURE=1``.
"""

from __future__ import annotations

import argparse
import importlib
import os
import random
import subprocess
import sys
import timeit
from array import array

from hyperctrl import _kernels_py as pure

P = 2**61 - 1

END_TO_END = """
import time
from hyperctrl import data_path, kernels
from hyperctrl.ctrb import CtrbConfig
from hyperctrl.hypergraph import load
from hyperctrl.selection import brute_force_min_nodes
H = load(data_path("eco_b.json"))
start = time.perf_counter()
for _ in range({reps}):
    brute_force_min_nodes(H, "driver", CtrbConfig(mode="full-bracket"))
print(kernels.BACKEND, (time.perf_counter() - start) / {reps})
"""


def make_inputs(rng):
    width, nterms, stride = 8, 40, 6
    exps = array("q", [rng.randint(0, stride - 1) for _ in range(width * nterms)])
    res = array("Q", [rng.randrange(P) for _ in range(nterms)])
    point = [rng.randrange(P) for _ in range(width)]
    powers = array("Q", [pow(v, k, P) for v in point for k in range(stride)])
    rows = [[rng.randrange(P) for _ in range(12)] for _ in range(12)]
    vecs = [[rng.randrange(P) for _ in range(12)] for _ in range(12)]
    return (exps, res, width, powers, stride), rows, vecs


def bench_module(mod, inputs, repeat):
    ev_args, rows, vecs = inputs

    def echelon():
        e = mod.ModEchelon(12, P)
        for v in vecs:
            r = e.reduce(v)
            if r is not None:
                e.insert(r)

    cases = {
        "eval_packed (40 terms, 8 vars)": (lambda: mod.eval_packed(*ev_args, P), 2000),
        "rank_mod (12x12)": (lambda: mod.rank_mod(rows, P), 200),
        "ModEchelon fill (12 vectors)": (echelon, 200),
    }
    out = {}
    for name, (fn, number) in cases.items():
        best = min(timeit.repeat(fn, number=number, repeat=repeat))
        out[name] = best / number
    return out


def end_to_end(pure_backend: bool, reps: int) -> tuple[str, float]:
    env = dict(os.environ)
    if pure_backend:
        env["HYPERCTRL_PURE"] = "1"
    else:
        env.pop("HYPERCTRL_PURE", None)
    proc = subprocess.run([sys.executable, "-c", END_TO_END.format(reps=reps)], env=env,
                          capture_output=True, text=True, check=True)
    backend, secs = proc.stdout.split()
    return backend, float(secs)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args(argv)

    try:
        compiled = importlib.import_module("hyperctrl._kernels")
    except ImportError:
        print("compiled extension not built; only the pure-Python backend is available")
        compiled = None

    inputs = make_inputs(random.Random(args.seed))
    py = bench_module(pure, inputs, args.repeat)
    cy = bench_module(compiled, inputs, args.repeat) if compiled else {}
    print(f"{'kernel':34} {'python':>12} {'cython':>12} {'speedup':>8}")
    for name, t_py in py.items():
        t_cy = cy.get(name)
        cy_col = f"{t_cy * 1e6:10.2f}us" if t_cy else f"{'-':>12}"
        sp_col = f"{t_py / t_cy:7.1f}x" if t_cy else f"{'-':>8}"
        print(f"{name:34} {t_py * 1e6:10.2f}us {cy_col} {sp_col}")

    if not args.skip_end_to_end:
        print()
        print("end to end: brute-force drivers, network (b), full-bracket (127 subsets)")
        _, t_pure = end_to_end(True, 3)
        backend, t_default = end_to_end(False, 3)
        print(f"  python backend  {t_pure:8.3f} s")
        print(f"  {backend:7} backend {t_default:8.3f} s   ({t_pure / t_default:.2f}x)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
