"""Time the numba kernels against the pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

Also runs one end-to-end estimate in a subprocess per backend, with the
backend chosen through SQPART_NO_NUMBA exactly as a user would.
"""
import argparse
import os
import subprocess
import sys
import time

from sqpart import _kernels


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def kernel_cases():
    flags = _kernels.NUMPY_KERNELS.sieve_two_squares(10**6)
    sig = _kernels.NUMPY_KERNELS.restricted_divisor_sums(flags, 10**6)
    return [
        ("sieve_two_squares(1e7)", lambda k: k.sieve_two_squares(10**7)),
        ("factor_flags(1e6)", lambda k: k.factor_flags(10**6)),
        ("restricted_divisor_sums(1e6)", lambda k: k.restricted_divisor_sums(flags, 10**6)),
        ("phi_sum(m=2, 1e6 terms)", lambda k: k.phi_sum(sig, 2, 1e-4, 10**6)),
    ]


_E2E = ("import time; t=time.perf_counter(); from sqpart import saddle, BACKEND; "
        "[saddle.main_estimate_log(n) for n in (1000, 10000, 100000, 1000000)]; "
        "print(BACKEND, time.perf_counter()-t)")


def end_to_end(disable):
    env = dict(os.environ, SQPART_NO_NUMBA="1" if disable else "0")
    out = subprocess.run([sys.executable, "-c", _E2E], env=env, check=True,
                         capture_output=True, text=True).stdout.split()
    return out[0], float(out[1])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels.NUMBA_KERNELS is None:
        sys.exit("numba is not installed; nothing to compare")

    print(f"{'kernel':32s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s}")
    for name, call in kernel_cases():
        call(_kernels.NUMBA_KERNELS)  # compile
        t_nb = best_of(lambda: call(_kernels.NUMBA_KERNELS), args.repeat)
        t_np = best_of(lambda: call(_kernels.NUMPY_KERNELS), args.repeat)
        print(f"{name:32s} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.1f}x")

    print("\nend-to-end: main estimate at n = 1e3, 1e4, 1e5, 1e6 (fresh process)")
    for disable in (False, True):
        backend, seconds = end_to_end(disable)
        print(f"  {backend:6s} {seconds:8.3f} s")


if __name__ == "__main__":
    main()
