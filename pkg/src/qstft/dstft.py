"""The quotient-window short-time Fourier transform.

For a subgroup ``H`` of ``G`` and a window ``g`` on ``G/H`` the transform of
``f`` on ``G`` is the function on ``dual(G) x G/H``

    D f(w, zH) = sum_x f(x) conj(<x, chi_w>) conj(g(xH - zH)) w_G.

Grids are stored as ``(|dual|, |G/H|)`` arrays, dual index first, with the
product measure ``w_dual * w_{G/H}`` per cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from . import _kernels
from .errors import DegenerateWindowError, MismatchError, NonInvertibleWindowPairError
from .groups import (
    DualGroup,
    FiniteGroup,
    Quotient,
    Subgroup,
    build_quotient,
    dual_group,
    generate_subgroup,
    phase_matrix,
    quotient_dual,
)
from .harmonic import (
    GroupFunction,
    convolve,
    fourier,
    involution,
    lp_norm,
    modulate,
    periodize,
)

WINDOW_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TFContext:
    """Everything derived from a pair ``(G, H)``: quotient, duals and lookup tables."""

    quotient: Quotient

    @property
    def group(self) -> FiniteGroup:
        return self.quotient.parent

    @property
    def subgroup(self) -> Subgroup:
        return self.quotient.subgroup

    @cached_property
    def dual(self) -> DualGroup:
        return dual_group(self.group)

    @cached_property
    def quotient_dual(self):
        return quotient_dual(self.quotient)

    @cached_property
    def phase(self) -> np.ndarray:
        return phase_matrix(self.group)

    @cached_property
    def twiddle(self) -> np.ndarray:
        return _kernels.twiddles(self.group.modulus)

    @property
    def shape(self) -> tuple:
        return (self.dual.order, self.quotient.order)

    @property
    def order(self) -> int:
        return self.dual.order * self.quotient.order

    @cached_property
    def point_weight(self):
        """Product measure of one grid cell (exact)."""
        return self.dual.point_weight * self.quotient.point_weight

    def __eq__(self, other):
        return isinstance(other, TFContext) and self.quotient == other.quotient

    def __hash__(self):
        return hash(("tf", self.quotient))


@lru_cache(maxsize=None)
def context_for(Q: Quotient) -> TFContext:
    return TFContext(Q)


def make_context(factors, generators=(), point_weight=1) -> TFContext:
    """Convenience: ``G = prod Z_n``, ``H = <generators>``."""
    G = FiniteGroup(tuple(factors), point_weight)
    H = generate_subgroup(G, [tuple(g) for g in generators])
    return context_for(build_quotient(G, H))


@dataclass(frozen=True, eq=False)
class TimeFreqFunction:
    context: TFContext
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128)
        if v.size != self.context.order:
            raise MismatchError(f"grid of size {v.size}, expected {self.context.shape}")
        v = v.reshape(self.context.shape)
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def dual_group(self) -> DualGroup:
        return self.context.dual

    @property
    def quotient(self) -> Quotient:
        return self.context.quotient

    @property
    def weight(self) -> float:
        return float(self.context.point_weight)

    def norm(self, p=2) -> float:
        return lp_norm(self.values, self.weight, p)

    def inner(self, other: TimeFreqFunction) -> complex:
        _same_context(self, other)
        return complex(np.sum(self.values * np.conj(other.values)) * self.weight)

    def with_values(self, values) -> TimeFreqFunction:
        return TimeFreqFunction(self.context, values)

    def conj(self) -> TimeFreqFunction:
        return self.with_values(np.conj(self.values))

    def __mul__(self, other):
        if isinstance(other, TimeFreqFunction):
            _same_context(self, other)
            return self.with_values(self.values * other.values)
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def __add__(self, other):
        _same_context(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        _same_context(self, other)
        return self.with_values(self.values - other.values)


def _same_context(a, b):
    if a.context != b.context:
        raise MismatchError("grid functions over different (G, H)")


def _context_of(f: GroupFunction, g: GroupFunction) -> TFContext:
    if not isinstance(g.domain, Quotient):
        raise MismatchError("window must live on a quotient G/H")
    if f.domain != g.domain.parent:
        raise MismatchError("signal and window are over different groups")
    return context_for(g.domain)


class AtomFamily:
    """Time-frequency atoms ``g_{w,zH}(x) = g(xH - zH) <x, chi_w>`` on ``G``."""

    def __init__(self, g: GroupFunction):
        if not isinstance(g.domain, Quotient):
            raise MismatchError("window must live on a quotient G/H")
        self.window = g
        self.context = context_for(g.domain)

    def atom(self, w_index: int, z_index: int) -> GroupFunction:
        ctx = self.context
        vals = self.window.values[ctx.quotient.coset_diff[:, z_index]]
        vals = vals * ctx.twiddle[ctx.phase[w_index]]
        return GroupFunction(ctx.group, vals)

    @cached_property
    def array(self) -> np.ndarray:
        """All atoms, shape ``(|dual|, |G/H|, |G|)``."""
        ctx = self.context
        shifted = self.window.values[ctx.quotient.coset_diff.T]  # (Z, X)
        chars = ctx.twiddle[ctx.phase]  # (K, X)
        return chars[:, None, :] * shifted[None, :, :]


def analyze(f: GroupFunction, g: GroupFunction) -> TimeFreqFunction:
    ctx = _context_of(f, g)
    vals = _kernels.analyze(
        f.values, g.values, ctx.phase, ctx.twiddle, ctx.quotient.coset_diff, float(ctx.group.point_weight)
    )
    return TimeFreqFunction(ctx, vals)


def analyze_quotient_form(f: GroupFunction, g: GroupFunction) -> TimeFreqFunction:
    """Same transform, computed as ``<R_H(M_{-w} f), T_zH g>`` through a quotient convolution."""
    ctx = _context_of(f, g)
    G, Q = ctx.group, ctx.quotient
    gt = involution(g)
    rows = []
    for k in range(G.order):
        R = periodize(modulate(f, G.neg(G.element(k))), ctx.subgroup, Q)
        rows.append(convolve(R, gt).values)
    return TimeFreqFunction(ctx, np.array(rows))


def analyze_fourier_form(f: GroupFunction, g: GroupFunction) -> TimeFreqFunction:
    """Same transform from the Fourier side:
    ``D f(w, zH) = sum_{eta in H-perp} fhat(eta + w) conj(conj(eta(z)) ghat(eta)) w_perp``.
    """
    ctx = _context_of(f, g)
    G, Q = ctx.group, ctx.quotient
    fh = fourier(f).values
    gh_f = fourier(g)
    gh = gh_f.values
    perp = gh_f.domain.annihilator
    w_perp = float(gh_f.domain.point_weight)
    moduli = np.asarray(G.factors, dtype=np.int64)
    eta = G.elements[perp.indices]  # (A, k)
    shifted = G.indices_of((eta[None, :, :] + G.elements[:, None, :]) % moduli)  # (K, A)
    S = fh[shifted]
    eta_at_z = ctx.twiddle[phase_matrix(G, eta, Q.elements)]  # (A, Z)
    vals = S @ (eta_at_z * np.conj(gh)[:, None]) * w_perp
    return TimeFreqFunction(ctx, vals)


def synthesize(F: TimeFreqFunction, g: GroupFunction) -> GroupFunction:
    """Adjoint of :func:`analyze`: ``sum_{w,zH} F(w,zH) <x, chi_w> g(xH - zH)`` weighted."""
    ctx = F.context
    if g.domain != ctx.quotient:
        raise MismatchError("window and grid are over different quotients")
    vals = _kernels.synthesize(
        np.ascontiguousarray(F.values), g.values, ctx.phase, ctx.twiddle, ctx.quotient.coset_diff, float(ctx.point_weight)
    )
    return GroupFunction(ctx.group, vals)


def left_inverse(F: TimeFreqFunction, g: GroupFunction) -> GroupFunction:
    """``||g||^-2 synthesize(F, g)``: inverts :func:`analyze` on its range and is the
    pseudo-inverse elsewhere."""
    n2 = g.norm(2) ** 2
    if n2 <= WINDOW_TOL:
        raise DegenerateWindowError("window has zero norm")
    return synthesize(F, g) * (1.0 / n2)


def reconstruct(f: GroupFunction, g1: GroupFunction, g2: GroupFunction) -> GroupFunction:
    """Analyze with ``g1``, synthesize with ``g2`` and divide by ``<g2, g1>``."""
    c = g2.inner(g1)
    if abs(c) <= WINDOW_TOL:
        raise NonInvertibleWindowPairError(f"<g2, g1> = {c} is numerically zero")
    return synthesize(analyze(f, g1), g2) * (1.0 / c)
