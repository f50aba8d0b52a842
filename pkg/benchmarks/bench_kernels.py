"""Time the compiled and pure-Python kernels side by side.

    python3 benchmarks/bench_kernels.py [--length 5000] [--repeat 5]

Prints the best-of-``repeat`` wall time per kernel and backend, and the
largest disagreement between backends on the same input.
"""

import argparse
import timeit

import numpy as np

from placy import kernels


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--length", type=int, default=5000)
    ap.add_argument("--window", type=int, default=50)
    ap.add_argument("--stride", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    x = rng.normal(size=args.length).cumsum()
    steps = args.length - 1
    eb = np.r_[0.0, np.cumsum(0.1 * rng.normal(size=steps - 1))]
    ega, egm = rng.normal(size=(2, steps))

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (active: {kernels.BACKEND})")
    print(f"series length {args.length}, window {args.window}, stride {args.stride}\n")
    print(f"{'kernel':<12}{'backend':<10}{'best [ms]':>12}")
    outputs = {}
    for name in backends:
        impl = kernels.get_backend(name)
        t_fit = best(lambda: impl.window_fits(x, args.window, args.stride), args.repeat)
        t_ou = best(lambda: impl.ou_path(1.0, 0.02, 1.0, 0.1, 0.5, 1.0, 1.0, eb, ega, egm),
                    args.repeat)
        print(f"{'window_fits':<12}{name:<10}{1e3 * t_fit:>12.2f}")
        print(f"{'ou_path':<12}{name:<10}{1e3 * t_ou:>12.2f}")
        outputs[name] = (
            impl.window_fits(x, args.window, args.stride)[:2],
            impl.ou_path(1.0, 0.02, 1.0, 0.1, 0.5, 1.0, 1.0, eb, ega, egm),
        )
    if len(outputs) == 2:
        (fa, oa), (fb, ob) = outputs.values()
        diff_fit = max(float(np.max(np.abs(u - v))) for u, v in zip(fa, fb))
        diff_ou = float(np.max(np.abs(oa - ob) / np.maximum(1.0, np.abs(oa))))
        print(f"\nmax backend disagreement: window_fits {diff_fit:.2e}, ou_path {diff_ou:.2e}")


if __name__ == "__main__":
    main()
