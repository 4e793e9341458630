"""Time the compiled kernels against the pure-Python fallback.

Usage::

    python3 benchmarks/bench_kernels.py --sizes 100 200 --repeat 3

Each kernel runs on the same inputs under both backends; the script also
checks that the two backends return identical arrays.
"""
import argparse
import time

import numpy as np

from shamap import angles, graph, kernels, spectral, synth


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def workload(n):
    spec = synth.HelixSpec(t_end=10 * np.pi, t_step=10 * np.pi / (n - 1))
    cloud = synth.gen_helix(spec)
    g = graph.knn_graph(cloud, 4)
    geo = graph.all_pairs_shortest(g)
    cosine = angles.cosine_matrix(angles.accumulated_angles(cloud, "origin", geo))
    return cloud, g, geo, cosine


def bench(n, repeat, backends):
    cloud, g, geo, cosine = workload(n)
    tasks = {
        "dijkstra": lambda b: graph.all_pairs_shortest(g, backend=b).dist,
        "accumulate": lambda b: angles.accumulated_angles(cloud, "origin", geo, backend=b),
        "jacobi": lambda b: spectral.jacobi_eigen(cosine, backend=b).vectors,
    }
    rows = []
    for name, task in tasks.items():
        timings, outputs = {}, {}
        for b in backends:
            timings[b], outputs[b] = best_of(lambda: task(b), repeat)
        same = all(np.array_equal(outputs[backends[0]], outputs[b], equal_nan=True)
                   for b in backends[1:])
        rows.append((name, n, timings, same))
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 300])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--skip-python-above", type=int, default=300,
                        help="sizes above this run only the compiled backend")
    args = parser.parse_args(argv)

    available = kernels.available_backends()
    print(f"backends available: {', '.join(available)}")
    header = f"{'kernel':<11}{'n':>6}" + "".join(f"{b + ' [s]':>16}" for b in available)
    print(header + f"{'speedup':>10}{'identical':>11}")
    for n in args.sizes:
        backends = [b for b in available if b == "compiled" or n <= args.skip_python_above]
        for name, size, timings, same in bench(n, args.repeat, backends):
            cells = "".join(f"{timings[b]:>16.4f}" if b in timings else f"{'-':>16}"
                            for b in available)
            speed = (f"{timings['python'] / timings['compiled']:>9.1f}x"
                     if {"python", "compiled"} <= timings.keys() else f"{'-':>10}")
            ident = "yes" if same else "NO"
            print(f"{name:<11}{size:>6}{cells}{speed}{ident:>11}")


if __name__ == "__main__":
    main()
