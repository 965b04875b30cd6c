"""Time the hot kernels with numba and with the numpy fallback.

Each backend runs in its own interpreter because the choice is made at
import time from TWSAT_DISABLE_NUMBA.  Compilation is excluded by a warm-up
call.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def measure(repeat: int) -> dict:
    import numpy as np

    from twsat import _kernels
    from twsat.oracle import GeneratorSpec, clause_masks, gen_bounded_width
    from twsat.params import TradeoffParams, compute_schedule
    from twsat.solvers import dp_solve, hybrid_solve
    from twsat.treegen import random_tree, to_csr

    unsat = gen_bounded_width(GeneratorSpec(3, "path", 20, 60, 3, 2))[0]
    pos, neg = clause_masks(unsat)
    f, td = gen_bounded_width(GeneratorSpec(4, "path", 120, 40, 3, 1))
    small_f, small_td = gen_bounded_width(GeneratorSpec(3, "path", 30, 20, 3, 3))
    indptr, indices = to_csr(random_tree(2 ** 12, 0))
    sched = compute_schedule(3)

    jobs = {
        "brute_force n=20": lambda: _kernels.brute_force(pos, neg, unsat.num_vars),
        "dp_join (dp_solve)": lambda: dp_solve(f, td),
        "combine (hybrid eps=0.5)": lambda: hybrid_solve(small_f, small_td, TradeoffParams(2, 0.5)),
        "split_depth hc c=3 N=4096": lambda: _kernels.split_depth(indptr, indices, _kernels.MODE_HC, 3,
                                                                  sched.alphas),
    }
    out = {}
    for name, job in jobs.items():
        job()
        best = min(_timed(job) for _ in range(repeat))
        out[name] = best
    return {"backend": _kernels.backend(), "times": out}


def _timed(job) -> float:
    t0 = time.perf_counter()
    job()
    return time.perf_counter() - t0


def run_backend(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("TWSAT_DISABLE_NUMBA", None)
    if disable:
        env["TWSAT_DISABLE_NUMBA"] = "1"
    proc = subprocess.run([sys.executable, __file__, "--child", "--repeat", str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = p.parse_args(argv)
    if args.child:
        print(json.dumps(measure(args.repeat)))
        return 0
    fast = run_backend(False, args.repeat)
    slow = run_backend(True, args.repeat)
    print(f"{'kernel':<28} {fast['backend']:>10} {slow['backend']:>10} {'speedup':>8}")
    for name, t in fast["times"].items():
        s = slow["times"][name]
        print(f"{name:<28} {t:>9.4f}s {s:>9.4f}s {s / t:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
