"""Time the compiled and pure-Python Gillespie kernels on identical runs.

    python3 benchmarks/bench_kernels.py [--horizon 2e5] [--repeat 3]
"""

import argparse
import time

from tasep_tq.mc import KERNELS, SimConfig, simulate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--horizon", type=float, default=2e5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--L", type=int, nargs="+", default=[1, 3, 5, 10])
    args = ap.parse_args()

    print(f"{'L':>3} {'kernel':>8} {'best s':>9} {'events/s':>11} {'speedup':>8}")
    for L in args.L:
        cfg = SimConfig(L, horizon=args.horizon, seed=12345)
        best, results = {}, {}
        for name in KERNELS:
            times = []
            for _ in range(args.repeat):
                t = time.perf_counter()
                results[name] = simulate(cfg, kernel=name)
                times.append(time.perf_counter() - t)
            best[name] = min(times)
        if len(results) > 1:
            stats = list(results.values())
            assert all(s.batch_means == stats[0].batch_means for s in stats), "kernels disagree"
        # entries per unit time times (L+1) roughly counts every event type
        events = results["python"].entries * (L + 1)
        for name, sec in best.items():
            speed = best["python"] / sec
            print(f"{L:>3} {name:>8} {sec:>9.4f} {events / sec:>11.3g} {speed:>7.1f}x")


if __name__ == "__main__":
    main()
