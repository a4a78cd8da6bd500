"""Time the numba kernels against their pure-numpy twins.

    python benchmarks/bench_kernels.py [--repeat N]

Prints one line per kernel: best-of-N seconds for each implementation,
the speed-up, and the largest relative difference between the two results.
"""

import argparse
import time

import numpy as np

from pfk import _kernels as K


def random_skew(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a - a.T


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases(rng):
    mats = [random_skew(rng, 40) for _ in range(50)]
    yield ("pfaffian 40x40 x50",
           lambda: np.array([K._pfaffian_nb(m.copy()) for m in mats]),
           lambda: np.array([K.pfaffian_numpy(m.copy()) for m in mats]))
    sub = random_skew(rng, 14)
    yield ("subpfaffians 14x14",
           lambda: K._subpfaffians_nb(sub),
           lambda: K.subpfaffians_numpy(sub))
    tables, _ = K.boolean_tables(3)
    h = np.array([[1, 1], [1, -1]], dtype=np.complex128)
    t = K.apply_wire_matrices(tables, [h] * 3)
    yield ("census scan arity 3 (255 tables)",
           lambda: K._census_scan_nb(np.ascontiguousarray(t), 3, 1e-9),
           lambda: K.census_scan_numpy(t, 3, 1e-9))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':36s} {'numba s':>10s} {'numpy s':>10s} {'speed-up':>9s} {'rel diff':>10s}")
    for name, nb, npy in cases(rng):
        nb()  # compile outside the timing
        t_nb, r_nb = best_of(nb, args.repeat)
        t_np, r_np = best_of(npy, args.repeat)
        a, b = np.asarray(r_nb, dtype=complex), np.asarray(r_np, dtype=complex)
        diff = float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))
        print(f"{name:36s} {t_nb:10.5f} {t_np:10.5f} {t_np / t_nb:9.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
