"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N] [--no-train-step]

Kernel timings run in-process. The train-step comparison starts two child
interpreters, one with PPRLAB_DISABLE_NUMBA=1, because the backend is fixed
at import time.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from pprlab import _accel, kernels


def best_of(fn, repeat: int, number: int) -> float:
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def kernel_rows(repeat: int):
    r = np.random.default_rng(0)
    rows = []
    for B, H in [(32, 64), (32, 256)]:
        z = r.normal(size=(B, 4 * H))
        c = r.normal(size=(B, H))
        _, gates, tc = kernels.lstm_cell_forward_numpy(z, c)
        ghc = r.normal(size=(B, 2 * H))
        cases = {
            f"lstm fwd B={B} H={H}": (
                lambda: kernels.lstm_cell_forward_numpy(z, c),
                lambda: kernels.lstm_cell_forward_loop(z, c),
            ),
            f"lstm bwd B={B} H={H}": (
                lambda: kernels.lstm_cell_backward_numpy(ghc, c, gates, tc),
                lambda: kernels.lstm_cell_backward_loop(ghc, c, gates, tc),
            ),
        }
        for name, (np_fn, nb_fn) in cases.items():
            nb_fn()  # compile outside the timer
            rows.append((name, best_of(np_fn, repeat, 200), best_of(nb_fn, repeat, 200)))
    for T, B in [(32, 32), (100, 256)]:
        d, g, cs = r.normal(size=(T, B)), r.uniform(0, 1, (T, B)), r.uniform(0, 1, (T, B))
        kernels.vtrace_recursion_loop(d, g, cs)
        rows.append(
            (
                f"vtrace T={T} B={B}",
                best_of(lambda: kernels.vtrace_recursion_numpy(d, g, cs), repeat, 200),
                best_of(lambda: kernels.vtrace_recursion_loop(d, g, cs), repeat, 200),
            )
        )
    return rows


CHILD = r"""
import json, time
import numpy as np
from pprlab import _accel
from pprlab.config import ExperimentConfig
from pprlab.trainer.loop import RunState, collect_segment, resolve, train_step
cfg = resolve(ExperimentConfig())
run = RunState.fresh(cfg)
params = dict(run.store.items())
seg = collect_segment(cfg, params, run.actor, cfg.train.segment_length, run.act_rng)
train_step(cfg, run.store, run.opt, seg, run.gate_rng)  # warm-up / compile
times = []
for _ in range(REPEAT):
    t0 = time.perf_counter()
    train_step(cfg, run.store, run.opt, seg, run.gate_rng)
    times.append(time.perf_counter() - t0)
print(json.dumps({"backend": _accel.backend(), "best": min(times)}))
"""


def train_step_rows(repeat: int):
    out = {}
    for disable in ("0", "1"):
        env = dict(os.environ, PPRLAB_DISABLE_NUMBA=disable)
        res = subprocess.run(
            [sys.executable, "-c", CHILD.replace("REPEAT", str(repeat))],
            env=env, capture_output=True, text=True, check=True,
        )
        info = json.loads(res.stdout.strip().splitlines()[-1])
        out[info["backend"]] = info["best"]
    return [("ppr train_step T=32 B=32 H=64", out.get("numpy", float("nan")), out.get("numba", float("nan")))]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--no-train-step", action="store_true")
    args = ap.parse_args(argv)
    if not _accel.NUMBA_AVAILABLE:
        print("numba unavailable or disabled; nothing to compare", file=sys.stderr)
        return 1
    rows = kernel_rows(args.repeat)
    if not args.no_train_step:
        rows += train_step_rows(args.repeat)
    print(f"{'case':34s} {'numpy':>12s} {'numba':>12s} {'speedup':>8s}")
    for name, t_np, t_nb in rows:
        print(f"{name:34s} {t_np * 1e6:10.1f}us {t_nb * 1e6:10.1f}us {t_np / t_nb:7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
