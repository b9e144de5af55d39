import math

import numpy as np
import pytest
from conftest import contexts, cvec, seeds
from hypothesis import given
from hypothesis import strategies as st

from qstft.dstft import (
    AtomFamily,
    TimeFreqFunction,
    analyze,
    analyze_fourier_form,
    analyze_quotient_form,
    left_inverse,
    make_context,
    reconstruct,
    synthesize,
)
from qstft.errors import DegenerateWindowError, MismatchError, NonInvertibleWindowPairError
from qstft.groups import eval_character
from qstft.harmonic import GroupFunction, conjugate_exponent, constant, delta


def analyze_oracle(f, g):
    """Literal triple loop over (w, z, x) with scalar character evaluation."""
    Q = g.domain
    G = Q.parent
    out = np.zeros((G.order, Q.order), dtype=complex)
    for k in range(G.order):
        for z, rep in enumerate(Q.reps):
            s = 0j
            for x in range(G.order):
                xe = G.element(x)
                chi = eval_character(G, G.element(k), xe)
                s += f.values[x] * np.conj(chi) * np.conj(g.values[Q.coset_of(G.sub(xe, rep))])
            out[k, z] = s * float(G.point_weight)
    return out


def close(a, b, tol=1e-10):
    a, b = np.asarray(a), np.asarray(b)
    scale = max(np.max(np.abs(a), initial=0), np.max(np.abs(b), initial=0))
    return np.max(np.abs(a - b), initial=0) <= tol * scale + 1e-14


def pair(ctx, seed):
    return GroupFunction(ctx.group, cvec(seed, ctx.group.order)), GroupFunction(ctx.quotient, cvec(seed + 1, ctx.quotient.order))


class TestExamples:
    def test_constant_window_trivial_character(self, z4):
        f = GroupFunction(z4.group, [1, 2, 3, 4])
        D = analyze(f, constant(z4.quotient))
        assert close(D.values[0], [10, 10])

    def test_delta_delta(self, z4):
        D = analyze(delta(z4.group), delta(z4.quotient))
        expect = np.zeros((4, 2))
        expect[:, 0] = 1
        assert close(D.values, expect)
        assert close(analyze_quotient_form(delta(z4.group), delta(z4.quotient)).values, expect)

    def test_zero_window(self):
        ctx = make_context([6], [(3,)])
        f = GroupFunction(ctx.group, cvec(1, 6))
        z = GroupFunction(ctx.quotient, np.zeros(3))
        assert np.all(analyze(f, z).values == 0)
        assert np.all(analyze_quotient_form(f, z).values == 0)

    def test_mismatch(self, z4):
        other = make_context([6], [(3,)])
        with pytest.raises(MismatchError):
            analyze(delta(other.group), delta(z4.quotient))
        with pytest.raises(MismatchError):
            analyze(delta(z4.group), delta(z4.group))


class TestForms:
    @given(contexts(max_order=12), seeds)
    def test_direct_oracle(self, ctx, seed):
        f, g = pair(ctx, seed)
        assert close(analyze(f, g).values, analyze_oracle(f, g), 1e-12)

    @given(contexts(), seeds)
    def test_three_forms(self, ctx, seed):
        f, g = pair(ctx, seed)
        D = analyze(f, g).values
        assert close(analyze_quotient_form(f, g).values, D, 1e-12)
        assert close(analyze_fourier_form(f, g).values, D, 1e-10)


class TestIdentities:
    @given(contexts(), seeds)
    def test_orthogonality(self, ctx, seed):
        f1, g1 = pair(ctx, seed)
        f2, g2 = pair(ctx, seed + 10)
        lhs = analyze(f1, g1).inner(analyze(f2, g2))
        assert close(lhs, f1.inner(f2) * g2.inner(g1))

    @given(contexts(), seeds)
    def test_norm_identity(self, ctx, seed):
        f, g = pair(ctx, seed)
        assert close(analyze(f, g).norm(2), g.norm(2) * f.norm(2))

    @given(contexts(), seeds)
    def test_adjoint(self, ctx, seed):
        f, g = pair(ctx, seed)
        F = TimeFreqFunction(ctx, cvec(seed + 3, ctx.shape))
        assert close(analyze(f, g).inner(F), f.inner(synthesize(F, g)), 1e-12)

    @given(contexts(), seeds)
    def test_synthesize_analyze(self, ctx, seed):
        f, g = pair(ctx, seed)
        assert close(synthesize(analyze(f, g), g).values, g.norm(2) ** 2 * f.values)
        assert close(left_inverse(analyze(f, g), g).values, f.values)

    @given(contexts(), seeds)
    def test_reconstruct_two_windows(self, ctx, seed):
        f, g1 = pair(ctx, seed)
        g2 = GroupFunction(ctx.quotient, cvec(seed + 5, ctx.quotient.order))
        if abs(g2.inner(g1)) > 1e-6:
            assert close(reconstruct(f, g1, g2).values, f.values)

    def test_orthogonal_windows_rejected(self, z4):
        with pytest.raises(NonInvertibleWindowPairError):
            reconstruct(delta(z4.group), delta(z4.quotient, 0), delta(z4.quotient, 1))

    def test_zero_window_left_inverse(self, z4):
        with pytest.raises(DegenerateWindowError):
            left_inverse(TimeFreqFunction(z4, np.ones(z4.shape)), GroupFunction(z4.quotient, [0, 0]))


class TestBounds:
    @given(contexts(), seeds)
    def test_sup_bound(self, ctx, seed):
        f, g = pair(ctx, seed)
        assert analyze(f, g).norm(np.inf) <= g.norm(np.inf) * f.norm(1) + 1e-12

    @given(contexts(), seeds, st.sampled_from([2.0, 3.0, 4.0, np.inf]) | st.floats(2.0, 40.0))
    def test_lp_bound(self, ctx, seed, p):
        f, g = pair(ctx, seed)
        assert analyze(f, g).norm(p) <= g.norm(p) * f.norm(conjugate_exponent(p)) * (1 + 1e-9) + 1e-12


class TestAtoms:
    @given(contexts(), seeds, st.data())
    def test_atom_norm_and_modulus(self, ctx, seed, data):
        g = GroupFunction(ctx.quotient, cvec(seed, ctx.quotient.order))
        w = data.draw(st.integers(0, ctx.dual.order - 1))
        z = data.draw(st.integers(0, ctx.quotient.order - 1))
        a = AtomFamily(g).atom(w, z)
        assert close(a.norm(2), math.sqrt(ctx.subgroup.order) * g.norm(2), 1e-12)
        assert close(np.abs(a.values), np.abs(g.values[ctx.quotient.coset_diff[:, z]]), 1e-12)
        assert close(AtomFamily(g).array[w, z], a.values, 0)

    @given(contexts(), seeds)
    def test_analyze_is_pairing_with_atoms(self, ctx, seed):
        f, g = pair(ctx, seed)
        A = AtomFamily(g).array
        assert close(analyze(f, g).values, np.einsum("x,kzx->kz", f.values, np.conj(A)))
