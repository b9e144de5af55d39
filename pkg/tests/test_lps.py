import numpy as np
import pytest
from conftest import contexts, cvec, seeds
from hypothesis import given
from hypothesis import strategies as st

from qstft.dstft import TimeFreqFunction, analyze, make_context
from qstft.errors import RegionError
from qstft.harmonic import GroupFunction, delta
from qstft.lps import (
    LocalizationRegions,
    analysis_matrix,
    equivalence_check,
    indicator_windows,
    left_inverse_matrix,
    lps_operator,
    p_matrix,
    p_project,
    projection_residuals,
    q_matrix,
    q_project,
)


@st.composite
def regions(draw, ctx):
    def subset(n):
        extra = draw(st.sets(st.integers(1, n - 1), max_size=n - 1)) if n > 1 else set()
        return sorted({0} | extra)

    return LocalizationRegions(
        ctx, subset(ctx.group.order), subset(ctx.group.order), subset(ctx.quotient.order), subset(ctx.dual.order)
    )


def window(ctx, seed):
    return GroupFunction(ctx.quotient, cvec(seed, ctx.quotient.order))


class TestRegions:
    def test_alpha_example(self, z4):
        R = LocalizationRegions(z4, [0, 2], [0, 2], [0], [0, 1, 2, 3])
        assert R.alpha == 2
        assert R.alpha_squared == 4

    @pytest.mark.parametrize(
        "c1,d,omega",
        [([], [0], [0]), ([0], [0], []), ([1], [0], [0]), ([0, 9], [0], [0]), ([0], [0, 2], [0])],
    )
    def test_invalid(self, z4, c1, d, omega):
        with pytest.raises(RegionError):
            LocalizationRegions(z4, c1, [0], d, omega)

    @given(contexts(max_order=12), st.data())
    def test_indicator_windows_unit(self, ctx, data):
        R = data.draw(regions(ctx))
        u, v = indicator_windows(R)
        assert u.norm(2) == pytest.approx(1, abs=1e-14)
        assert v.norm(2) == pytest.approx(1, abs=1e-14)


class TestProjections:
    def test_q_full_is_identity(self, z4):
        F = TimeFreqFunction(z4, cvec(0, z4.shape))
        assert np.array_equal(q_project(F, range(2), range(4)).values, F.values)

    def test_q_idempotent_exact(self, z4):
        F = TimeFreqFunction(z4, cvec(1, z4.shape))
        once = q_project(F, [1], [0, 3])
        assert np.array_equal(q_project(once, [1], [0, 3]).values, once.values)

    def test_q_single_cell_rank_one(self, z4):
        Q = q_matrix(z4, [1], [2])
        assert np.linalg.matrix_rank(Q.entries) == 1
        assert Q.entries[2 * 2 + 1, 2 * 2 + 1] == 1

    def test_q_rejects_bad_index(self, z4):
        with pytest.raises(RegionError):
            q_matrix(z4, [5], [0])

    @given(contexts(max_order=12), seeds)
    def test_p_full_is_range_projection(self, ctx, seed):
        g = window(ctx, seed)
        P = p_matrix(ctx, range(ctx.group.order), g)
        oracle = analysis_matrix(g) @ left_inverse_matrix(g)
        assert np.allclose(P.entries, oracle.entries, atol=1e-12)
        res = projection_residuals(P)
        assert res["idempotent"] <= 1e-10 and res["self_adjoint"] <= 1e-10

    @given(contexts(max_order=12), seeds)
    def test_range_fixed(self, ctx, seed):
        g = window(ctx, seed)
        F = analyze(GroupFunction(ctx.group, cvec(seed + 1, ctx.group.order)), g)
        assert np.allclose(p_project(F, range(ctx.group.order), g).values, F.values, atol=1e-12)

    def test_identity_region_rank_one(self, z4):
        g = delta(z4.quotient)
        P = p_matrix(z4, [0], g)
        # analyze(delta_0) with g = delta on the identity coset is 1 on column 0
        a = analyze(delta(z4.group), g).values.reshape(-1)
        expect = np.outer(a, np.conj(a)) * float(z4.point_weight) / g.norm(2) ** 2
        assert np.allclose(P.entries, expect)
        assert np.linalg.matrix_rank(P.entries) == 1

    @given(contexts(max_order=12), seeds, st.data())
    def test_all_projections(self, ctx, seed, data):
        R = data.draw(regions(ctx))
        g = window(ctx, seed)
        for M in (p_matrix(ctx, R.c1, g), p_matrix(ctx, R.c2, g), q_matrix(ctx, R.d, R.omega)):
            res = projection_residuals(M)
            assert res["idempotent"] <= 1e-10 and res["self_adjoint"] <= 1e-10


class TestOperator:
    def test_full_regions(self, z4):
        g = window(z4, 3)
        R = LocalizationRegions(z4, range(4), range(4), range(2), range(4))
        assert np.allclose(lps_operator(R, g).entries, p_matrix(z4, range(4), g).entries, atol=1e-12)

    def test_single_coset_example(self, z4):
        R = LocalizationRegions(z4, [0, 2], [0, 2], [0], range(4))
        rep = equivalence_check(R, window(z4, 5))
        assert rep["pass"] and rep["alpha"] == 2

    def test_z6_random(self):
        ctx = make_context([6], [(3,)])
        rng = np.random.default_rng(6)
        R = LocalizationRegions(
            ctx, [0, *rng.choice(np.arange(1, 6), 2, replace=False)], [0, 4], [0, 2], [0, 1, 5]
        )
        rep = equivalence_check(R, window(ctx, 6))
        assert rep["pass"], rep
        assert rep["window_norms_exact"]

    @given(contexts(max_order=12), seeds, st.data())
    def test_equivalence_and_disc(self, ctx, seed, data):
        R = data.draw(regions(ctx))
        rep = equivalence_check(R, window(ctx, seed))
        assert rep["residual_full"] <= 1e-9
        assert rep["residual_range"] <= 1e-9
        assert rep["max_eigenvalue_modulus"] <= 1 + 1e-9

    def test_weighted_group(self):
        from fractions import Fraction

        ctx = make_context([2, 4], [(1, 2)], point_weight=Fraction(1, 2))
        R = LocalizationRegions(ctx, [0, 3], [0, 1, 5], [0, 1], [0, 2, 7])
        rep = equivalence_check(R, window(ctx, 8))
        assert rep["pass"] and rep["window_norms_exact"]
        assert rep["alpha_squared"] == Fraction(2, 2) * Fraction(3, 2)
