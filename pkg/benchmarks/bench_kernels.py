"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--sizes 1000 10000] [--repeat 5] [--json out.json]

Each kernel runs on random activity-loop-free graphs (activity edges only go
to higher-numbered states, tick edges go anywhere) and on the vehicle
synthesis.  Times are the best of ``--repeat`` runs.  Both backends must
return identical results; the script exits non-zero if they do not.
"""
import argparse
import json
import sys
import timeit

import numpy as np

from tickbound import vehicle
from tickbound._kernels import Kernels, available_backends, use_backend
from tickbound.bounded import sup_cbtc


def random_graph(n, n_events=6, out_degree=3, seed=0):
    rng = np.random.default_rng(seed)
    tick = n_events
    ptr, evt, dst = [0], [], []
    for q in range(n):
        used = set()
        if rng.random() < 0.7:
            evt.append(tick)
            dst.append(int(rng.integers(0, n)))
            used.add(tick)
        for _ in range(out_degree):
            e = int(rng.integers(0, n_events))
            if e in used or q == n - 1:
                continue
            used.add(e)
            evt.append(e)
            dst.append(int(rng.integers(q + 1, n)))
        ptr.append(len(evt))
    marked = (rng.random(n) < 0.1).astype(np.uint8)
    marked[n - 1] = 1
    return np.array(ptr), np.array(evt), np.array(dst), marked, tick


def workloads(n, seed):
    ptr, evt, dst, marked, tick = random_graph(n, seed=seed)
    alive = np.ones(n, dtype=np.uint8)
    return {
        "reach_mask": lambda k: k.reach_mask(ptr, dst, 0, alive),
        "coreach_mask": lambda k: k.coreach_mask(ptr, dst, marked, alive),
        "tick_longest": lambda k: k.tick_longest(ptr, evt, dst, tick, marked, alive),
        "counter_expand N=5": lambda k: k.counter_expand(ptr, evt, dst, marked, tick, 5, 0, True),
        "counter_expand N=50": lambda k: k.counter_expand(ptr, evt, dst, marked, tick, 50, 0, True),
    }


def same(a, b):
    if isinstance(a, (tuple, list)):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1_000, 10_000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", metavar="FILE")
    args = ap.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only the python backend will be timed", file=sys.stderr)
    rows, ok = [], True

    for n in args.sizes:
        for name, job in workloads(n, seed=n).items():
            times, outs = {}, {}
            for b, impl in backends.items():
                k = Kernels(impl)
                outs[b] = job(k)
                times[b] = best(lambda: job(k), args.repeat)
            agree = all(same(outs["python"], o) for o in outs.values())
            ok &= agree
            rows.append({"workload": f"{name} n={n}", **times, "agree": agree})

    specs = [vehicle.safety_spec(), vehicle.temporal_spec()]
    g, cover = vehicle.plant(), vehicle.cover()
    times, outs = {}, {}
    prev = use_backend("python")
    try:
        for b in backends:
            use_backend(b)
            outs[b] = sorted(sup_cbtc(g, specs, cover)[0].labelled_transitions())
            times[b] = best(lambda: sup_cbtc(g, specs, cover), args.repeat)
    finally:
        use_backend(prev)
    agree = all(o == outs["python"] for o in outs.values())
    ok &= agree
    rows.append({"workload": "vehicle sup_cbtc end to end", **times, "agree": agree})

    names = list(backends)
    head = f"{'workload':<34}" + "".join(f"{b + ' ms':>12}" for b in names) + f"{'speedup':>10}  agree"
    print(head)
    print("-" * len(head))
    for r in rows:
        cells = "".join(f"{1e3 * r[b]:>12.2f}" for b in names)
        speed = f"{r['python'] / r['cython']:>9.1f}x" if "cython" in r else f"{'-':>10}"
        print(f"{r['workload']:<34}{cells}{speed}  {'yes' if r['agree'] else 'NO'}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
