"""Time the numba and numpy kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat N]

Numba compile time is excluded by one warm-up call per kernel.
"""

import argparse
import timeit

import numpy as np

from qstft import _backend, _kernels
from qstft.dstft import make_context

CASES = [
    ((12,), [(4,)]),
    ((4, 4), [(1, 1)]),
    ((8, 8), [(2, 2)]),
    ((6, 6, 2), [(3, 0, 1)]),
    ((64,), [(16,)]),
]


def inputs(ctx, rng):
    f = rng.standard_normal(ctx.group.order) + 1j * rng.standard_normal(ctx.group.order)
    g = rng.standard_normal(ctx.quotient.order) + 1j * rng.standard_normal(ctx.quotient.order)
    F = rng.standard_normal(ctx.shape) + 1j * rng.standard_normal(ctx.shape)
    return f, g, F, ctx.phase, ctx.twiddle, ctx.quotient.coset_diff, float(ctx.point_weight)


def best(fn, repeat):
    fn()  # warm-up, also triggers compilation
    n, _ = timeit.Timer(fn).autorange()
    return min(timeit.repeat(fn, number=n, repeat=repeat)) / n


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _backend.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(0)
    print(f"{'group':<14}{'|G|':>5}{'|G/H|':>7}  {'kernel':<11}{'numpy us':>10}{'numba us':>10}{'ratio':>8}")
    for factors, gens in CASES:
        ctx = make_context(factors, gens)
        f, g, F, ph, tw, cd, w = inputs(ctx, rng)
        kernels = {
            "analyze": (lambda: _kernels.analyze_numpy(f, g, ph, tw, cd, w), lambda: _kernels.analyze_numba(f, g, ph, tw, cd, w)),
            "synthesize": (lambda: _kernels.synthesize_numpy(F, g, ph, tw, cd, w), lambda: _kernels.synthesize_numba(F, g, ph, tw, cd, w)),
            "char_sum": (lambda: _kernels.char_sum_numpy(f, ph, tw, -1, w), lambda: _kernels.char_sum_numba(f, ph, tw, -1, w)),
        }
        label = "x".join(f"Z{n}" for n in factors)
        for name, (np_fn, nb_fn) in kernels.items():
            assert np.allclose(np_fn(), nb_fn(), rtol=1e-12, atol=1e-12)
            t_np, t_nb = best(np_fn, args.repeat), best(nb_fn, args.repeat)
            print(f"{label:<14}{ctx.group.order:>5}{ctx.quotient.order:>7}  {name:<11}{t_np * 1e6:>10.1f}{t_nb * 1e6:>10.1f}{t_np / t_nb:>8.2f}")


if __name__ == "__main__":
    main()
