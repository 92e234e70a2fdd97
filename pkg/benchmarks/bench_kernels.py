"""Time the hot kernels under both backends.

    python benchmarks/bench_kernels.py [--repeat 3]

numba timings exclude compilation (one warm-up call first).
"""
import argparse
import time

import numpy as np

from multihol.bilinear import delta_index_table, power_form
from multihol.class2_group import GroupSpec, element_arrays, group_tables
from multihol.ff_linalg import FpMatrix
from multihol.kernels import get_backend
from multihol.tg_structure import theta_d


def cases():
    spec = GroupSpec(3, 3, FpMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3))
    tabs = group_tables(spec)
    a, c = element_arrays(spec)
    delta = delta_index_table(power_form(spec, 0))
    theta = theta_d(spec, 0).table()
    circ = None
    rng = np.random.default_rng(0)
    mats = rng.integers(0, 3, (20000, 4, 4))
    yield "mult_table |G|=729", lambda k: k.mult_table(a, c, spec.D.data, spec._pj, spec._pk, spec.p)
    yield "count_hom_failures |G|=729", lambda k: k.count_hom_failures(theta, tabs.mult, delta, tabs.cadd, tabs.pm)
    yield "circle_table |G|=729", lambda k: k.circle_table(tabs.mult, delta, tabs.cadd, tabs.pm)
    circ = np.asarray(get_backend("numpy").circle_table(tabs.mult, delta, tabs.cadd, tabs.pm))
    yield "circle_stats |G|=729", lambda k: k.circle_stats(circ, tabs.pm)
    yield "batch_invertible 20000 x 4x4", lambda k: k.batch_invertible(mats, 3)
    small = group_tables(GroupSpec.zero(3, 2))
    yield "count_assoc_failures |G|=27", lambda k: k.count_assoc_failures(small.mult)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = {"numpy": get_backend("numpy")}
    try:
        backends["numba"] = get_backend("numba")
    except ImportError:
        print("numba not importable; numpy only")
    print(f"{'kernel':34s}" + "".join(f"{name:>12s}" for name in backends) + f"{'speedup':>10s}")
    for label, run in cases():
        row = {}
        for name, k in backends.items():
            if name == "numba":
                run(k)
            row[name] = best_of(lambda: run(k), args.repeat)
        speed = f"{row['numpy'] / row['numba']:9.1f}x" if "numba" in row else ""
        print(f"{label:34s}" + "".join(f"{row[name]:11.4f}s" for name in backends) + speed)


if __name__ == "__main__":
    main()
