"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 64 128 256] [--repeat 5]

Prints one row per (kernel, n) with the best-of-repeat wall time for each
backend, the speedup, and the largest output difference between the two.
"""
import argparse
import time

import numpy as np

from phasesync import _pykernels

try:
    from phasesync import _ckernels
except ImportError:
    _ckernels = None


def _hermitian(rng, n):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (A + A.conj().T) / 2


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(n, rng):
    H = _hermitian(rng, n)
    shift = float(np.abs(H).sum(axis=1).max())
    v0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = np.exp(2j * np.pi * rng.random(n))
    y = np.exp(2j * np.pi * rng.random(n))
    S = rng.standard_normal((2 * n, 2 * n))
    S = S + S.T
    yield ("power_iterate x500",
           lambda k: k.power_iterate(H, v0, 1.0, shift, 1e-300, 500)[0],
           lambda a, b: abs(a - b))
    yield ("gpm_step x200",
           lambda k: [k.gpm_step(H, x) for _ in range(200)][-1][0],
           lambda a, b: float(np.abs(a - b).max()))
    yield ("dinf_grid 4096",
           lambda k: k.dinf_grid(x, y, 4096),
           lambda a, b: float(np.abs(a - b).max()))
    if n <= 128:
        yield (f"jacobi_eigh {2 * n}x{2 * n}",
               lambda k: np.sort(k.jacobi_eigh(S)[0]),
               lambda a, b: float(np.abs(a - b).max()))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; only the numpy timings are shown")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<24}{'n':>6}{'numpy [ms]':>14}{'cython [ms]':>14}{'speedup':>10}{'max diff':>12}")
    for n in args.sizes:
        for name, run, diff in cases(n, rng):
            tp, outp = _best(lambda: run(_pykernels), args.repeat)
            if _ckernels is None:
                print(f"{name:<24}{n:>6}{tp * 1e3:>14.2f}{'-':>14}{'-':>10}{'-':>12}")
                continue
            tc, outc = _best(lambda: run(_ckernels), args.repeat)
            print(f"{name:<24}{n:>6}{tp * 1e3:>14.2f}{tc * 1e3:>14.2f}"
                  f"{tp / tc:>9.1f}x{diff(outp, outc):>12.1e}")


if __name__ == "__main__":
    main()
