"""Two-wavelet multipliers, generalized multipliers and measured operator matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dstft import AtomFamily, TFContext, TimeFreqFunction, analyze, left_inverse, synthesize
from .errors import DegenerateWindowError, MismatchError
from .harmonic import GroupFunction


class OperatorMatrix:
    """A linear map between two measured spaces, stored as a plain matrix.

    ``entries[i, j]`` is the ``i``-th coefficient of the image of the ``j``-th
    unit vector, so ``apply`` is an ordinary matrix-vector product. The
    measures only enter through inner products: the adjoint, norms and SVD.
    """

    def __init__(self, entries, row_space, col_space):
        A = np.array(entries, dtype=np.complex128)
        if A.shape != (row_space.order, col_space.order):
            raise MismatchError(f"matrix shape {A.shape} does not fit spaces ({row_space.order}, {col_space.order})")
        A.flags.writeable = False
        self.entries = A
        self.row_space = row_space
        self.col_space = col_space

    @property
    def shape(self):
        return self.entries.shape

    @property
    def row_weight(self) -> float:
        return float(self.row_space.point_weight)

    @property
    def col_weight(self) -> float:
        return float(self.col_space.point_weight)

    def apply(self, values) -> np.ndarray:
        return self.entries @ np.asarray(values, dtype=np.complex128).reshape(-1)

    def adjoint(self) -> OperatorMatrix:
        """Measure-weighted conjugate transpose: ``A*[j, i] = conj(A[i, j]) w_row / w_col``."""
        scale = self.row_weight / self.col_weight
        return OperatorMatrix(np.conj(self.entries.T) * scale, self.col_space, self.row_space)

    def euclidean(self) -> np.ndarray:
        """``D_row^(1/2) A D_col^(-1/2)``: same singular values as ``A`` between the measured spaces."""
        return self.entries * np.sqrt(self.row_weight / self.col_weight)

    def _check(self, other):
        if self.row_space != other.row_space or self.col_space != other.col_space:
            raise MismatchError("operators act between different spaces")

    def __matmul__(self, other: OperatorMatrix) -> OperatorMatrix:
        if self.col_space != other.row_space:
            raise MismatchError("cannot compose: intermediate spaces differ")
        return OperatorMatrix(self.entries @ other.entries, self.row_space, other.col_space)

    def __add__(self, other):
        self._check(other)
        return OperatorMatrix(self.entries + other.entries, self.row_space, self.col_space)

    def __sub__(self, other):
        self._check(other)
        return OperatorMatrix(self.entries - other.entries, self.row_space, self.col_space)

    def __mul__(self, c):
        return OperatorMatrix(self.entries * c, self.row_space, self.col_space)

    __rmul__ = __mul__

    def __repr__(self):
        return f"OperatorMatrix(shape={self.shape})"


def matrix_of(op, col_space, row_space) -> OperatorMatrix:
    """Assemble ``op`` (acting on value vectors) column by column from unit vectors."""
    n = col_space.order
    cols = []
    for j in range(n):
        e = np.zeros(n, dtype=np.complex128)
        e[j] = 1
        cols.append(np.asarray(op(e)).reshape(-1))
    return OperatorMatrix(np.array(cols).T.reshape(row_space.order, n), row_space, col_space)


@dataclass(frozen=True, eq=False)
class MultiplierSpec:
    sigma: TimeFreqFunction
    u: GroupFunction
    v: GroupFunction
    g: GroupFunction

    def __post_init__(self):
        ctx = self.sigma.context
        if self.g.domain != ctx.quotient:
            raise MismatchError("window and symbol are over different quotients")
        if self.u.domain != ctx.group or self.v.domain != ctx.group:
            raise MismatchError("u and v must live on G")

    @property
    def context(self) -> TFContext:
        return self.sigma.context

    def replace(self, **changes) -> MultiplierSpec:
        d = dict(sigma=self.sigma, u=self.u, v=self.v, g=self.g)
        d.update(changes)
        return MultiplierSpec(**d)


def apply_two_wavelet(spec: MultiplierSpec, f: GroupFunction) -> GroupFunction:
    """``P f = conj(v) * synthesize(sigma * D(u f), g)``."""
    if f.domain != spec.context.group:
        raise MismatchError("input must live on G")
    coeffs = spec.sigma * analyze(spec.u * f, spec.g)
    return spec.v.conj() * synthesize(coeffs, spec.g)


def two_wavelet_matrix(spec: MultiplierSpec) -> OperatorMatrix:
    G = spec.context.group
    return matrix_of(lambda e: apply_two_wavelet(spec, GroupFunction(G, e)).values, G, G)


def weak_form(spec: MultiplierSpec, f: GroupFunction, h: GroupFunction) -> complex:
    """``<P f, h>`` computed on the grid as ``sum sigma D(uf) conj(D(vh))``."""
    a = analyze(spec.u * f, spec.g)
    b = analyze(spec.v * h, spec.g)
    return (spec.sigma * a).inner(b)


def apply_generalized_multiplier(sigma: TimeFreqFunction, g: GroupFunction, f: GroupFunction) -> GroupFunction:
    """``M f = D^-1(sigma * D f)`` with the left inverse ``||g||^-2 synthesize``."""
    if g.norm(2) ** 2 <= 1e-12:
        raise DegenerateWindowError("generalized multiplier needs a nonzero window")
    return left_inverse(sigma * analyze(f, g), g)


def generalized_multiplier_matrix(sigma: TimeFreqFunction, g: GroupFunction) -> OperatorMatrix:
    G = sigma.context.group
    return matrix_of(lambda e: apply_generalized_multiplier(sigma, g, GroupFunction(G, e)).values, G, G)


def kernel_values(spec: MultiplierSpec) -> np.ndarray:
    """Integral kernel ``N(t; s)`` as a ``(|G|, |G|)`` array indexed ``[t, s]``.

    Summed directly over the atoms, independent of the analyze/synthesize kernels.
    """
    atoms = AtomFamily(spec.g).array  # (K, Z, X)
    ctx = spec.context
    w = float(ctx.point_weight)
    K, Z, X = atoms.shape
    A = atoms.reshape(K * Z, X)
    s = spec.sigma.values.reshape(-1) * w
    # N[t, s] = conj(v(t)) u(s) sum_c sigma_c a_c(t) conj(a_c(s))
    core = (A.T * s) @ np.conj(A)
    return np.conj(spec.v.values)[:, None] * core * spec.u.values[None, :]


def kernel_matrix(spec: MultiplierSpec) -> OperatorMatrix:
    G = spec.context.group
    return OperatorMatrix(kernel_values(spec) * float(G.point_weight), G, G)
