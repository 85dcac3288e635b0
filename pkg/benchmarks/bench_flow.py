"""Benchmark the flow kernels: jit path against the numpy fallback.

Times the two hot batch entry points, trajectory driving and offset
reading, under whichever backend the SYMSECTOR_NUMBA environment flag
selects.  With --compare the script re-runs itself in two subprocesses,
one per backend, and prints a side-by-side table with speedups.

Usage
-----
    python benchmarks/bench_flow.py
    python benchmarks/bench_flow.py --compare -n 4096
    SYMSECTOR_NUMBA=0 python benchmarks/bench_flow.py --raw
"""

import argparse
import json
import math
import os
import subprocess
import sys
import time

import numpy as np

from symsector import _kernels
from symsector._accel import using_numba
from symsector.flow import FlowSettings, compute_c_batch, drive_batch
from symsector.geometry import SteinParams


def make_states(n, rng):
    """Product-region starts (x_z, y_z, Re w, Im w), far from the diagonal."""
    u = rng.uniform(40.0, 80.0, n)
    v = rng.uniform(-2.0, 2.0, n)
    Y = np.empty((n, 4))
    Y[:, 0] = rng.uniform(-3.0, 3.0, n)
    Y[:, 1] = rng.uniform(-3.0, 3.0, n)
    Y[:, 2] = u * u - v * v
    Y[:, 3] = 2.0 * u * v
    return Y


def make_readings(n, rng):
    """sqrt(w) samples around the offset band, the grid classifier diet."""
    params = SteinParams()
    re = rng.uniform(-2.0, 2.0, n) * params.epsilon
    im = rng.uniform(-1.0, 1.0, n) * params.epsilon
    return re + 1j * im


def best_of(repeats, fn):
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def run_bench(n, repeats, seed):
    rng = np.random.default_rng(seed)
    params = SteinParams()
    settings = FlowSettings()

    t0 = time.perf_counter()
    _kernels.warmup()
    warm = time.perf_counter() - t0

    Y0 = make_states(n, rng)
    horizon = 2.0 * math.log(2.0)

    def drive():
        drive_batch(Y0.copy(), params, settings, _kernels.EVENT_NONE,
                    t_end=horizon)

    readings = make_readings(max(n // 8, 1), rng)

    def offsets():
        compute_c_batch(readings, params, settings)

    # one untimed pass each so lazy compilation never lands in a timing
    drive()
    offsets()
    return {
        "backend": "numba" if using_numba() else "numpy",
        "n_states": n,
        "n_readings": int(readings.size),
        "warmup_s": round(warm, 4),
        "drive_batch_s": round(best_of(repeats, drive), 4),
        "offset_batch_s": round(best_of(repeats, offsets), 4),
    }


def print_table(rows):
    keys = ("backend", "warmup_s", "drive_batch_s", "offset_batch_s")
    widths = {k: max(len(k), *(len(str(r[k])) for r in rows)) for k in keys}
    header = "  ".join(k.ljust(widths[k]) for k in keys)
    print(header)
    print("-" * len(header))
    for r in rows:
        print("  ".join(str(r[k]).ljust(widths[k]) for k in keys))
    if len(rows) == 2:
        for field in ("drive_batch_s", "offset_batch_s"):
            slow = max(rows[0][field], rows[1][field])
            fast = min(rows[0][field], rows[1][field])
            if fast > 0:
                print(f"{field}: {slow / fast:.1f}x speedup")


def compare(args):
    rows = []
    for flag in ("1", "0"):
        env = dict(os.environ, SYMSECTOR_NUMBA=flag)
        cmd = [sys.executable, os.path.abspath(__file__), "--raw",
               "-n", str(args.n), "--repeats", str(args.repeats),
               "--seed", str(args.seed)]
        proc = subprocess.run(cmd, env=env, capture_output=True, text=True,
                              check=True)
        rows.append(json.loads(proc.stdout))
    print_table(rows)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("-n", type=int, default=2048,
                        help="batch size for the drive workload")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repetitions, best one reported")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--raw", action="store_true",
                        help="emit one JSON object instead of a table")
    parser.add_argument("--compare", action="store_true",
                        help="run both backends in subprocesses")
    args = parser.parse_args(argv)
    if args.compare:
        compare(args)
        return 0
    result = run_bench(args.n, args.repeats, args.seed)
    if args.raw:
        print(json.dumps(result, sort_keys=True))
    else:
        print_table([result])
    return 0


if __name__ == "__main__":
    sys.exit(main())
