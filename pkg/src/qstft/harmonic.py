"""Functions on measured finite groups and their Fourier analysis.

A :class:`GroupFunction` pairs a value vector with the space it lives on
(``FiniteGroup``, ``DualGroup``, ``Quotient`` or ``QuotientDual``). Every
integral is a weighted sum with the domain's point weight, so Plancherel,
the Weil formula and the Fourier-slice relation hold as exact identities
up to round-off.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import InvalidExponentError, MismatchError
from .groups import (
    DualGroup,
    FiniteGroup,
    Quotient,
    QuotientDual,
    Subgroup,
    dual_group,
    phase_matrix,
    quotient_dual,
)


def lp_norm(values, weight, p) -> float:
    """``(sum |v|^p w)^(1/p)``; ``p = inf`` gives ``max |v|`` (independent of ``w``)."""
    p = float(p)
    if not p >= 1:
        raise InvalidExponentError(f"norm exponent must lie in [1, inf], got {p}")
    a = np.abs(np.asarray(values)).ravel()
    if a.size == 0:
        return 0.0
    if np.isinf(p):
        return float(a.max())
    if p == 1:
        return float(a.sum() * weight)
    if p == 2:
        return float(np.sqrt(np.sum(a * a) * weight))
    top = a.max()
    if top == 0:
        return 0.0
    # scale before powering so large p does not overflow
    return float(top * (np.sum((a / top) ** p) * weight) ** (1.0 / p))


def conjugate_exponent(p) -> float:
    p = float(p)
    if p == 1:
        return np.inf
    if np.isinf(p):
        return 1.0
    return p / (p - 1)


@dataclass(frozen=True, eq=False)
class GroupFunction:
    domain: object
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128).reshape(-1)
        if v.shape[0] != self.domain.order:
            raise MismatchError(f"{v.shape[0]} values for a domain of order {self.domain.order}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def weight(self) -> float:
        return float(self.domain.point_weight)

    def norm(self, p=2) -> float:
        return lp_norm(self.values, self.weight, p)

    def inner(self, other: GroupFunction) -> complex:
        """``<self, other> = sum self * conj(other) * w``."""
        _same_domain(self, other)
        return complex(np.sum(self.values * np.conj(other.values)) * self.weight)

    def with_values(self, values) -> GroupFunction:
        return GroupFunction(self.domain, values)

    def conj(self) -> GroupFunction:
        return self.with_values(np.conj(self.values))

    def __mul__(self, other):
        if isinstance(other, GroupFunction):
            _same_domain(self, other)
            return self.with_values(self.values * other.values)
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def __add__(self, other: GroupFunction):
        _same_domain(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: GroupFunction):
        _same_domain(self, other)
        return self.with_values(self.values - other.values)

    def __neg__(self):
        return self.with_values(-self.values)


def _same_domain(a, b):
    if a.domain != b.domain:
        raise MismatchError("functions live on different domains")


def delta(domain, index=0) -> GroupFunction:
    v = np.zeros(domain.order, dtype=np.complex128)
    v[index] = 1
    return GroupFunction(domain, v)


def constant(domain, c=1.0) -> GroupFunction:
    return GroupFunction(domain, np.full(domain.order, c, dtype=np.complex128))


@lru_cache(maxsize=None)
def _group_phase(G: FiniteGroup):
    return phase_matrix(G), _kernels.twiddles(G.modulus)


@lru_cache(maxsize=None)
def _quotient_fourier_data(Q: Quotient):
    G = Q.parent
    Qd = quotient_dual(Q)
    return Qd, phase_matrix(G, Qd.elements, Q.elements), _kernels.twiddles(G.modulus)


def character_values(G: FiniteGroup, k_index: int) -> np.ndarray:
    """Values of the character with canonical index ``k_index`` at every element of ``G``."""
    phase, tw = _group_phase(G)
    return tw[phase[k_index]]


def fourier(f: GroupFunction, fast: bool = False) -> GroupFunction:
    """Weighted transform ``fhat(chi) = sum_x f(x) conj(<x, chi>) w_x``.

    On ``G`` the result lives on the Plancherel dual; on ``G/H`` it lives on the
    annihilator of ``H`` with weight ``1/(|G/H| w_{G/H})``. ``fast=True`` uses a
    multidimensional FFT over the cyclic factors (``G`` only).
    """
    D = f.domain
    w = float(D.point_weight)
    if isinstance(D, FiniteGroup):
        if fast:
            vals = np.fft.fftn(f.values.reshape(D.factors)).reshape(-1) * w if D.rank else f.values * w
        else:
            phase, tw = _group_phase(D)
            vals = _kernels.char_sum(f.values, phase, tw, -1, w)
        return GroupFunction(dual_group(D), vals)
    if isinstance(D, Quotient):
        Qd, phase, tw = _quotient_fourier_data(D)
        return GroupFunction(Qd, _kernels.char_sum(f.values, phase, tw, -1, w))
    raise MismatchError(f"no forward transform defined on {type(D).__name__}")


def inverse_fourier(F: GroupFunction, fast: bool = False) -> GroupFunction:
    """``f(x) = sum_chi F(chi) <x, chi> w_chi`` back onto ``G`` or ``G/H``."""
    D = F.domain
    w = float(D.point_weight)
    if isinstance(D, DualGroup):
        G = D.base
        if fast:
            vals = np.fft.ifftn(F.values.reshape(G.factors)).reshape(-1) * (G.order * w) if G.rank else F.values * w
        else:
            phase, tw = _group_phase(G)
            # the pairing is symmetric in coordinates, so the phase table is its own transpose
            vals = _kernels.char_sum(F.values, phase, tw, 1, w)
        return GroupFunction(G, vals)
    if isinstance(D, QuotientDual):
        Qd, phase, tw = _quotient_fourier_data(D.quotient)
        return GroupFunction(D.quotient, _kernels.char_sum(F.values, np.ascontiguousarray(phase.T), tw, 1, w))
    raise MismatchError(f"no inverse transform defined on {type(D).__name__}")


def periodize(f: GroupFunction, H: Subgroup, Q: Quotient) -> GroupFunction:
    """Fiber sums over cosets: ``R_H f(xH) = sum_{h in H} f(x + h) w_H``."""
    if Q.subgroup != H or f.domain != Q.parent:
        raise MismatchError("quotient, subgroup and function domain do not match")
    out = np.zeros(Q.order, dtype=np.complex128)
    np.add.at(out, Q.coset_array, f.values * float(H.point_weight))
    return GroupFunction(Q, out)


def modulate(f: GroupFunction, k) -> GroupFunction:
    """``(M_k f)(x) = <x, chi_k> f(x)`` on a group or its dual (the pairing is symmetric)."""
    D = f.domain
    if not isinstance(D, (FiniteGroup, DualGroup)):
        raise MismatchError("modulation is defined on groups and their duals")
    G = D if isinstance(D, FiniteGroup) else D.base
    return f.with_values(f.values * character_values(G, G.index(k)))


def translate(f: GroupFunction, z) -> GroupFunction:
    """``(T_z f)(x) = f(x - z)``; on a quotient ``z`` is a coset index or a parent element."""
    D = f.domain
    if isinstance(D, Quotient):
        c = z if isinstance(z, (int, np.integer)) else D.coset_of(z)
        return f.with_values(f.values[D.sub_table[:, c]])
    if not isinstance(D, (FiniteGroup, DualGroup)):
        raise MismatchError("translation is defined on groups, duals and quotients")
    return f.with_values(f.values[D.sub_table[:, D.index(z)]])


def convolve(f1: GroupFunction, f2: GroupFunction) -> GroupFunction:
    """Quotient convolution ``(f1 * f2)(xH) = sum_y f1(yH) f2(xH - yH) w``."""
    _same_domain(f1, f2)
    Q = f1.domain
    if not isinstance(Q, Quotient):
        raise MismatchError("convolution is implemented on quotients")
    S = Q.sub_table  # S[a, b] = coset of rep_a - rep_b
    vals = (f2.values[S] @ f1.values) * float(Q.point_weight)
    return f1.with_values(vals)


def involution(g: GroupFunction) -> GroupFunction:
    """``g~(xH) = conj(g(-xH))``, so that ``(R * g~)(zH) = <R, T_zH g>``."""
    Q = g.domain
    return g.with_values(np.conj(g.values[Q.sub_table[0, :]]))


def stft(f: GroupFunction, g: GroupFunction) -> np.ndarray:
    """``V_g f(x, w) = sum_y f(y) conj(g(y - x)) conj(<y, chi_w>) w_y``.

    Returned as an ``(|dual|, |G|)`` array (dual index first). Its grid measure is
    ``w_G * w_dual`` per cell.
    """
    _same_domain(f, g)
    G = f.domain
    if not isinstance(G, FiniteGroup):
        raise MismatchError("stft takes functions on a group")
    phase, tw = _group_phase(G)
    return _kernels.analyze(f.values, g.values, phase, tw, G.sub_table, float(G.point_weight))
