"""Seeded random inputs shared by the CLI suites and the tests.

Every check draws from its own ``numpy.random.PCG64`` stream built from
``SeedSequence(entropy=seed, spawn_key=(suite_id, group_index, case))``, so a
check's inputs do not depend on which other checks ran or in what order.
Complex samples are ``a + ib`` with ``a, b ~ N(0, 1/2)`` drawn as one
``(..., 2)`` array of standard normals scaled by ``sqrt(1/2)``.
"""

from __future__ import annotations

import zlib

import numpy as np

from .dstft import TFContext, TimeFreqFunction, make_context
from .harmonic import GroupFunction
from .operators import MultiplierSpec

# (factors, subgroup generators)
DEFAULT_GROUPS = (
    ((4,), ((2,),)),
    ((6,), ((3,),)),
    ((2, 4), ((1, 2),)),
    ((3, 3), ((1, 1),)),
    ((8,), ((4,),)),
    ((2, 2, 2), ((1, 1, 0),)),
    ((4, 4), ((1, 1),)),
    ((12,), ((4,),)),
)


def suite_key(name: str) -> int:
    """Stable 32-bit id of a suite name, used as the first spawn-key entry."""
    return zlib.crc32(name.encode("utf-8"))


def rng_for(seed: int, suite: str, group_index: int, case: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(suite_key(suite), int(group_index), int(case)))
    return np.random.Generator(np.random.PCG64(ss))


def complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    size = (size,) if isinstance(size, int) else tuple(size)
    z = rng.standard_normal(size + (2,)) * np.sqrt(0.5)
    return z[..., 0] + 1j * z[..., 1]


def random_function(rng, domain) -> GroupFunction:
    return GroupFunction(domain, complex_normal(rng, domain.order))


def random_grid(rng, ctx: TFContext) -> TimeFreqFunction:
    return TimeFreqFunction(ctx, complex_normal(rng, ctx.shape))


def random_spec(rng, ctx: TFContext) -> MultiplierSpec:
    """Symbol, then ``u``, ``v`` on ``G``, then the window on ``G/H``, in that draw order."""
    sigma = random_grid(rng, ctx)
    u = random_function(rng, ctx.group)
    v = random_function(rng, ctx.group)
    g = random_function(rng, ctx.quotient)
    return MultiplierSpec(sigma, u, v, g)


def default_contexts() -> list:
    return [make_context(f, gens) for f, gens in DEFAULT_GROUPS]


def sample_exponent(rng, lo=1.0, hi=np.inf, *, snap: bool = True, open_lo=False, open_hi=False) -> float:
    """An exponent in ``[lo, hi]``, uniform in ``1/p``.

    With ``snap`` each closed endpoint and ``p = 2`` (when in range) is hit with
    probability 1/8 so the exact-norm paths get exercised. Open endpoints are
    never returned.
    """
    u = rng.random()
    if snap:
        c = rng.integers(8)
        if c == 0 and not open_lo:
            return float(lo)
        if c == 1 and not open_hi:
            return float(hi)
        if c == 2 and lo <= 2 <= hi and not (open_lo and lo == 2) and not (open_hi and hi == 2):
            return 2.0
    inv_lo = 1.0 / lo
    inv_hi = 0.0 if np.isinf(hi) else 1.0 / hi
    s = inv_hi + (inv_lo - inv_hi) * u
    if (open_lo and s == inv_lo) or (open_hi and s == inv_hi):
        s = 0.5 * (inv_lo + inv_hi)
    return np.inf if s == 0 else float(1.0 / s)
