"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 32,64,128,256] [--repeat 3]

Prints one CSV row per (kernel, size, backend) with the best wall time and
the largest disagreement against the other backend.
"""
import argparse
import time

import numpy as np

from qwzeta import linalg


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="32,64,128,256")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    backends = sorted(linalg.BACKENDS)
    if len(backends) < 2:
        print("# compiled kernels not built; timing the fallback only")
    rng = np.random.default_rng(args.seed)
    print("kernel,n,backend,seconds,speedup_vs_python,max_disagreement")
    for n in sizes:
        A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        X = rng.standard_normal((n, n))
        S = X + X.T
        jobs = {
            "lu_logdet": lambda b: np.array(linalg.lu_logdet(A, backend=b).as_complex()),
            "jacobi": lambda b: linalg.symmetric_eigenvalues(S, backend=b),
        }
        for name, job in jobs.items():
            results = {b: best_time(lambda: job(b), args.repeat) for b in backends}
            ref_t, ref = results["python"]
            for b in backends:
                t, val = results[b]
                diff = float(np.abs(val - ref).max())
                print(f"{name},{n},{b},{t:.4g},{ref_t / t:.3g},{diff:.2e}")


if __name__ == "__main__":
    main()
