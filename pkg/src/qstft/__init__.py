"""Quotient-window short-time Fourier analysis on finite abelian groups.

Groups are products of cyclic factors with exact rational Haar weights. On top
of them the package provides the transform that pairs a signal on ``G`` with
modulated translates of a window on ``G/H``, the two-wavelet and generalized
multipliers built from it, Schatten and ``L^p`` norm bounds for those
operators, Landau-Pollak-Slepian type projections, and a discrete Radon demo.
"""

__version__ = "0.1.0"

from .dstft import TFContext, TimeFreqFunction, analyze, make_context, reconstruct, synthesize
from .groups import FiniteGroup, annihilator, build_group, build_quotient, generate_subgroup
from .harmonic import GroupFunction, fourier, inverse_fourier, periodize
from .operators import MultiplierSpec, OperatorMatrix, apply_two_wavelet, two_wavelet_matrix
from .spectral import bound_report, lp_operator_norm, schatten_norm, trace

__all__ = [
    "FiniteGroup",
    "GroupFunction",
    "MultiplierSpec",
    "OperatorMatrix",
    "TFContext",
    "TimeFreqFunction",
    "analyze",
    "annihilator",
    "apply_two_wavelet",
    "bound_report",
    "build_group",
    "build_quotient",
    "fourier",
    "generate_subgroup",
    "inverse_fourier",
    "lp_operator_norm",
    "make_context",
    "periodize",
    "reconstruct",
    "schatten_norm",
    "synthesize",
    "trace",
    "two_wavelet_matrix",
]
