"""Direct-summation kernels shared by the Fourier and time-frequency transforms.

Characters are never stored as complex tables. A character value is looked up
as ``twiddle[phase[k, x]]`` where ``phase`` holds exact integer residues modulo
``L = len(twiddle)`` and ``twiddle[m] = exp(2*pi*i*m/L)``. Conjugation is the
residue ``(L - m) % L``.

Every kernel has a numpy implementation (``*_numpy``) and a numba one
(``*_numba``); the unsuffixed name is bound to the backend chosen in
:mod:`qstft._backend`. Each output cell is accumulated independently in a
fixed order over ``x``, so results do not depend on scheduling.
"""

import numpy as np

from ._backend import USE_NUMBA, njit


def twiddles(modulus):
    m = np.arange(modulus)
    return np.exp(2j * np.pi * m / modulus)


# -- numpy -----------------------------------------------------------------


def char_sum_numpy(values, phase, twiddle, sign, weight):
    L = twiddle.shape[0]
    table = twiddle[(sign * phase) % L]
    return (table @ values) * weight


def analyze_numpy(f, g, phase, twiddle, coset_diff, weight):
    L = twiddle.shape[0]
    E = twiddle[(L - phase) % L] * f[None, :]
    W = np.conj(g)[coset_diff]
    return (E @ W) * weight


def synthesize_numpy(F, g, phase, twiddle, coset_diff, weight):
    chi = twiddle[phase]
    W = g[coset_diff]
    return np.sum(chi * (F @ W.T), axis=0) * weight


# -- numba -----------------------------------------------------------------


@njit
def char_sum_numba(values, phase, twiddle, sign, weight):
    L = twiddle.shape[0]
    K, X = phase.shape
    out = np.zeros(K, dtype=np.complex128)
    for k in range(K):
        acc = 0j
        for x in range(X):
            acc += twiddle[(sign * phase[k, x]) % L] * values[x]
        out[k] = acc * weight
    return out


@njit
def analyze_numba(f, g, phase, twiddle, coset_diff, weight):
    L = twiddle.shape[0]
    K, X = phase.shape
    Z = coset_diff.shape[1]
    W = np.empty((X, Z), dtype=np.complex128)  # conj(g) at each coset difference
    for x in range(X):
        for z in range(Z):
            W[x, z] = np.conj(g[coset_diff[x, z]])
    out = np.zeros((K, Z), dtype=np.complex128)
    for k in range(K):
        for x in range(X):
            e = f[x] * twiddle[(L - phase[k, x]) % L]
            for z in range(Z):
                out[k, z] += e * W[x, z]
    return out * weight


@njit
def synthesize_numba(F, g, phase, twiddle, coset_diff, weight):
    K, X = phase.shape
    Z = coset_diff.shape[1]
    w = np.empty(Z, dtype=np.complex128)
    out = np.zeros(X, dtype=np.complex128)
    for x in range(X):
        for z in range(Z):
            w[z] = g[coset_diff[x, z]]
        acc = 0j
        for k in range(K):
            inner = 0j
            for z in range(Z):
                inner += F[k, z] * w[z]
            acc += twiddle[phase[k, x]] * inner
        out[x] = acc * weight
    return out


if USE_NUMBA:
    char_sum = char_sum_numba
    analyze = analyze_numba
    synthesize = synthesize_numba
else:
    char_sum = char_sum_numpy
    analyze = analyze_numpy
    synthesize = synthesize_numpy
