"""Compare the compiled slot loop against the pure-Python fallback.

Runs both paths on identical workloads, asserts the schedules and
metrics agree exactly, and reports wall-clock times. Invoke directly:

    python benchmarks/bench_kernels.py --jobs 400 --repeat 3
"""

from __future__ import annotations

import argparse
import statistics
import time
from fractions import Fraction

from toposched import gen_lower_bound, gen_random, simulate
from toposched.engine import kernel_available


def time_run(inst, policy, speed, use_kernel, repeat):
    """Best-of-N wall time plus the run's outputs for the equality check."""
    outputs = None
    samples = []
    for _ in range(repeat):
        start = time.perf_counter()
        outputs = simulate(inst, policy, speed, use_kernel=use_kernel)
        samples.append(time.perf_counter() - start)
    return min(samples), statistics.median(samples), outputs


def workloads(args):
    yield (
        f"random n={args.nodes} jobs={args.jobs} sizes<={args.max_size}",
        gen_random(
            args.nodes, 3, args.jobs, args.max_size, 9, args.jobs // 4, args.seed
        ),
        Fraction(5, 2),
    )
    yield (
        "random unit jobs, contended",
        gen_random(4, 2, args.jobs, 1, 9, max(2, args.jobs // 20), args.seed + 1),
        Fraction(3),
    )
    L = args.lb_L
    yield (f"lower-bound family L={L}", gen_lower_bound(L, "t1"), Fraction(1))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=8)
    parser.add_argument("--jobs", type=int, default=400)
    parser.add_argument("--max-size", type=int, default=6)
    parser.add_argument("--lb-L", type=int, default=1024)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if not kernel_available():
        print("compiled kernel unavailable; nothing to compare")
        return 1

    header = f"{'workload':<42} {'policy':<15} {'pure':>9} {'kernel':>9} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, inst, speed in workloads(args):
        for policy in ("release-greedy", "hdf"):
            pure_best, _, pure_out = time_run(inst, policy, speed, False, args.repeat)
            kern_best, _, kern_out = time_run(inst, policy, speed, True, args.repeat)
            assert pure_out == kern_out, f"paths diverged on {label} / {policy}"
            print(
                f"{label:<42} {policy:<15} "
                f"{pure_best * 1e3:>7.1f}ms {kern_best * 1e3:>7.1f}ms "
                f"{pure_best / kern_best:>7.1f}x"
            )
    print("\nall schedules and metrics identical across paths")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
