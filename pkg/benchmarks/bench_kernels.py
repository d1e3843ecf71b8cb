"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel with the best wall time of each backend and
the speedup. Both backends are checked to agree before timing.
"""

import argparse
import timeit

import numpy as np

from sievelab.kernels import available_backends
from sievelab.sequences import generate_sequence

CASES = {
    "power_residue_histogram k=3 m=2*10^6": ("power_residue_histogram", lambda: (3, 5, 2_000_000)),
    "exp_sums_rational N=4096 D=4913 all a": (
        "exp_sums_rational",
        lambda: (generate_sequence("random-unit", 4096, 0, 1).coeffs, 0, 4913, np.arange(4913)),
    ),
    "cubic_sum c=10^6": ("cubic_sum", lambda: (1_000_000, 1, 7)),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the numpy fallback is available")
    width = max(len(c) for c in CASES)
    print(f"{'kernel'.ljust(width)}  {'python [s]':>11}  {'compiled [s]':>12}  {'speedup':>8}")
    for label, (fname, make_args) in CASES.items():
        call_args = make_args()
        times, results = {}, {}
        for name, mod in backends.items():
            fn = getattr(mod, fname)
            results[name] = fn(*call_args)
            times[name] = min(timeit.repeat(lambda: fn(*call_args), number=1, repeat=args.repeat))
        if len(results) == 2:
            a, b = results["python"], results["compiled"]
            np.testing.assert_allclose(np.asarray(a), np.asarray(b), rtol=1e-9, atol=1e-6)
        tp = times["python"]
        tc = times.get("compiled")
        if tc is None:
            print(f"{label.ljust(width)}  {tp:11.4f}  {'-':>12}  {'-':>8}")
        else:
            print(f"{label.ljust(width)}  {tp:11.4f}  {tc:12.4f}  {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
