"""Grid projections and the generalized Landau-Pollak-Slepian operator.

``Q_R`` multiplies a grid function by the indicator of ``Omega x D`` (dual
index first, as everywhere on the grid). ``P_C`` maps a grid function back to
``G`` with the left inverse of the transform, cuts it to ``C`` and analyzes
again. The LPS operator is ``P_{C2} Q_R P_{C1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dstft import TFContext, TimeFreqFunction, analyze, context_for, left_inverse
from .errors import DegenerateWindowError, MismatchError, RegionError
from .harmonic import GroupFunction
from .operators import MultiplierSpec, OperatorMatrix, matrix_of, two_wavelet_matrix
from .spectral import schatten_norm

EQUIV_TOL = 1e-9
PROJ_TOL = 1e-10


def _index_set(values, size, name, need_identity=True):
    idx = np.unique(np.asarray(list(values), dtype=np.int64))
    if idx.size == 0:
        raise RegionError(f"region {name} is empty")
    if idx.min() < 0 or idx.max() >= size:
        raise RegionError(f"region {name} has an index outside [0, {size})")
    if need_identity and idx[0] != 0:
        raise RegionError(f"region {name} must contain the identity")
    idx.flags.writeable = False
    return idx


@dataclass(frozen=True, eq=False)
class LocalizationRegions:
    """``C1, C2`` index ``G``; ``D`` indexes ``G/H``; ``omega`` indexes the dual of ``G``.

    Every region must be nonempty and contain the identity (index 0).
    """

    context: TFContext
    c1: np.ndarray
    c2: np.ndarray
    d: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        ctx = self.context
        object.__setattr__(self, "c1", _index_set(self.c1, ctx.group.order, "C1"))
        object.__setattr__(self, "c2", _index_set(self.c2, ctx.group.order, "C2"))
        object.__setattr__(self, "d", _index_set(self.d, ctx.quotient.order, "D"))
        object.__setattr__(self, "omega", _index_set(self.omega, ctx.dual.order, "Omega"))

    def mass(self, which: str) -> Fraction:
        """Haar mass of ``C1`` or ``C2``: count times the point weight of ``G``."""
        c = {"c1": self.c1, "c2": self.c2}[which]
        return len(c) * self.context.group.point_weight

    @property
    def alpha_squared(self) -> Fraction:
        return self.mass("c1") * self.mass("c2")

    @property
    def alpha(self) -> float:
        return math.sqrt(self.alpha_squared)

    def grid_indicator(self) -> TimeFreqFunction:
        m = np.zeros(self.context.shape)
        m[np.ix_(self.omega, self.d)] = 1
        return TimeFreqFunction(self.context, m)


def _grid_mask(ctx: TFContext, d, omega) -> np.ndarray:
    d = np.asarray(d, dtype=np.int64)
    omega = np.asarray(omega, dtype=np.int64)
    if d.size and (d.min() < 0 or d.max() >= ctx.quotient.order):
        raise RegionError("D has an index outside G/H")
    if omega.size and (omega.min() < 0 or omega.max() >= ctx.dual.order):
        raise RegionError("Omega has an index outside the dual group")
    m = np.zeros(ctx.shape)
    m[np.ix_(omega, d)] = 1
    return m


def _set_mask(n, c) -> np.ndarray:
    c = np.asarray(c, dtype=np.int64)
    if c.size and (c.min() < 0 or c.max() >= n):
        raise RegionError("region has an index outside G")
    m = np.zeros(n)
    m[c] = 1
    return m


def q_project(F: TimeFreqFunction, d, omega) -> TimeFreqFunction:
    return F * _grid_mask(F.context, d, omega)


def p_project(F: TimeFreqFunction, c, g: GroupFunction) -> TimeFreqFunction:
    """``analyze(1_C * left_inverse(F, g), g)``."""
    if F.context.quotient != g.domain:
        raise MismatchError("window and grid are over different quotients")
    if g.norm(2) ** 2 <= 1e-12:
        raise DegenerateWindowError("projection needs a nonzero window")
    f = left_inverse(F, g)
    return analyze(f * _set_mask(f.domain.order, c), g)


def q_matrix(ctx: TFContext, d, omega) -> OperatorMatrix:
    return OperatorMatrix(np.diag(_grid_mask(ctx, d, omega).reshape(-1)), ctx, ctx)


def p_matrix(ctx: TFContext, c, g: GroupFunction) -> OperatorMatrix:
    return matrix_of(lambda e: p_project(TimeFreqFunction(ctx, e), c, g).values, ctx, ctx)


def analysis_matrix(g: GroupFunction) -> OperatorMatrix:
    """The transform as a map ``L^2(G) -> L^2(grid)``."""
    Q = g.domain
    ctx = context_for(g.domain)
    return matrix_of(lambda e: analyze(GroupFunction(Q.parent, e), g).values, Q.parent, ctx)


def left_inverse_matrix(g: GroupFunction) -> OperatorMatrix:
    ctx = context_for(g.domain)
    return matrix_of(lambda e: left_inverse(TimeFreqFunction(ctx, e), g).values, ctx, ctx.group)


def lps_operator(regions: LocalizationRegions, g: GroupFunction) -> OperatorMatrix:
    ctx = regions.context
    if g.domain != ctx.quotient:
        raise MismatchError("window and regions are over different quotients")
    return p_matrix(ctx, regions.c2, g) @ q_matrix(ctx, regions.d, regions.omega) @ p_matrix(ctx, regions.c1, g)


def indicator_windows(regions: LocalizationRegions):
    """``u = 1_{C1}/sqrt|C1|`` and ``v = 1_{C2}/sqrt|C2|`` (unit ``L^2`` norm)."""
    G = regions.context.group
    u = GroupFunction(G, _set_mask(G.order, regions.c1) / math.sqrt(regions.mass("c1")))
    v = GroupFunction(G, _set_mask(G.order, regions.c2) / math.sqrt(regions.mass("c2")))
    return u, v


def projection_residuals(P: OperatorMatrix) -> dict:
    """Relative operator-norm residuals of ``P^2 - P`` and ``P* - P``."""
    scale = max(schatten_norm(P, np.inf), 1e-300)
    return {
        "idempotent": schatten_norm(P @ P - P, np.inf) / scale,
        "self_adjoint": schatten_norm(P.adjoint() - P, np.inf) / scale,
    }


def equivalence_check(regions: LocalizationRegions, g: GroupFunction) -> dict:
    """Compare ``P_{C2} Q P_{C1}`` with ``(alpha/||g||^2) D P_{u,v,g}(1_{Omega x D}) D^-1``.

    Both sides are assembled as grid matrices. The residual is reported on
    the full grid and after restricting both sides to the range of the
    transform (right-composition with the range projection).
    """
    ctx = regions.context
    lhs = lps_operator(regions, g)
    u, v = indicator_windows(regions)
    spec = MultiplierSpec(regions.grid_indicator(), u, v, g)
    Dm = analysis_matrix(g)
    Dinv = left_inverse_matrix(g)
    rhs = (regions.alpha / g.norm(2) ** 2) * (Dm @ two_wavelet_matrix(spec) @ Dinv)
    rng_proj = Dm @ Dinv

    nl, nr = schatten_norm(lhs, np.inf), schatten_norm(rhs, np.inf)
    scale = max(nl, nr, 1e-300)
    full = schatten_norm(lhs - rhs, np.inf) / scale
    restricted = schatten_norm((lhs - rhs) @ rng_proj, np.inf) / scale
    eig = np.abs(np.linalg.eigvals(lhs.entries))
    return {
        "alpha": regions.alpha,
        "alpha_squared": regions.alpha_squared,
        "lhs_norm": nl,
        "rhs_norm": nr,
        "residual_full": full,
        "residual_range": restricted,
        "max_eigenvalue_modulus": float(eig.max(initial=0.0)),
        "u_norm": u.norm(2),
        "v_norm": v.norm(2),
        # ||1_C / sqrt|C|||^2 = count * w / |C|, exactly 1 in rationals
        "window_norms_exact": all(len(c) * ctx.group.point_weight / regions.mass(k) == 1 for k, c in (("c1", regions.c1), ("c2", regions.c2))),
        "pass": bool(full <= EQUIV_TOL and restricted <= EQUIV_TOL),
    }
