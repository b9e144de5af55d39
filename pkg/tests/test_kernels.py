import os
import subprocess
import sys

import numpy as np
import pytest
from conftest import contexts, cvec, seeds
from hypothesis import given

from qstft import _backend, _kernels

needs_numba = pytest.mark.skipif(not _backend.HAVE_NUMBA, reason="numba not installed")


def kernel_args(ctx, seed):
    G, Q = ctx.group, ctx.quotient
    f = cvec(seed, G.order)
    g = cvec(seed + 1, Q.order)
    F = cvec(seed + 2, ctx.shape)
    return f, g, F, ctx.phase, ctx.twiddle, Q.coset_diff, float(ctx.point_weight)


@needs_numba
@given(contexts(), seeds)
def test_analyze_backends_agree(ctx, seed):
    f, g, _, ph, tw, cd, w = kernel_args(ctx, seed)
    a = _kernels.analyze_numpy(f, g, ph, tw, cd, w)
    b = _kernels.analyze_numba(f, g, ph, tw, cd, w)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-13)


@needs_numba
@given(contexts(), seeds)
def test_synthesize_backends_agree(ctx, seed):
    _, g, F, ph, tw, cd, w = kernel_args(ctx, seed)
    a = _kernels.synthesize_numpy(F, g, ph, tw, cd, w)
    b = _kernels.synthesize_numba(F, g, ph, tw, cd, w)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-13)


@needs_numba
@given(contexts(), seeds)
def test_char_sum_backends_agree(ctx, seed):
    f, _, _, ph, tw, _, w = kernel_args(ctx, seed)
    for sign in (-1, 1):
        a = _kernels.char_sum_numpy(f, ph, tw, sign, w)
        b = _kernels.char_sum_numba(f, ph, tw, sign, w)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-13)


def test_twiddles_are_roots_of_unity():
    tw = _kernels.twiddles(12)
    assert np.allclose(tw**12, 1)
    assert tw[0] == 1


@pytest.mark.parametrize("flag,expect", [("1", "numpy"), ("0", None)])
def test_env_flag_selects_backend(flag, expect):
    env = dict(os.environ, QSTFT_DISABLE_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from qstft._backend import BACKEND; print(BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    ).stdout.strip()
    if expect is None:
        expect = "numba" if _backend.HAVE_NUMBA else "numpy"
    assert out == expect
