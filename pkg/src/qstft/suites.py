"""Property suites run by the CLI.

A suite is a function ``(runner, ctx, gi)`` that draws seeded inputs and adds
check records. Every record carries the suite, the group label, the case
number, a digest of its inputs, the two compared quantities, the residual and
a pass flag. Records are sorted by ``(suite, group, case, check)`` before they
are written, so the output never depends on execution order.
"""

from __future__ import annotations

import hashlib
import math
import traceback
from dataclasses import dataclass, field

import numpy as np

from . import corpus, radon
from ._kernels import twiddles
from .dstft import (
    AtomFamily,
    TFContext,
    TimeFreqFunction,
    analyze,
    analyze_fourier_form,
    analyze_quotient_form,
    reconstruct,
    synthesize,
)
from .errors import NonInvertibleWindowPairError
from .groups import annihilator, phase_matrix
from .harmonic import (
    GroupFunction,
    conjugate_exponent,
    delta,
    fourier,
    inverse_fourier,
    modulate,
    periodize,
    stft,
    translate,
)
from .lps import LocalizationRegions, equivalence_check, p_matrix, projection_residuals, q_matrix
from .operators import (
    MultiplierSpec,
    apply_generalized_multiplier,
    apply_two_wavelet,
    generalized_multiplier_matrix,
    kernel_matrix,
    two_wavelet_matrix,
    weak_form,
)
from .spectral import (
    THEOREMS,
    bound_report,
    eigenvalue_sum,
    lp_norm_lower_bound,
    normalize_windows,
    schatten_norm,
    trace,
    trace_formula,
    trace_formula_as_stated,
)

SUITES = (
    "weil",
    "slice",
    "stft",
    "dstft_ortho",
    "inversion",
    "multiplier",
    "schatten",
    "lp_bounds",
    "schur",
    "trace",
    "lps",
    "radon",
)

DEFAULT_SAMPLES = {
    "weil": 8,
    "slice": 8,
    "stft": 8,
    "dstft_ortho": 13,
    "inversion": 8,
    "multiplier": 13,
    "schatten": 8,
    "lp_bounds": 26,
    "schur": 8,
    "trace": 8,
    "lps": 4,
    "radon": 1,
}

DEFAULT_TOLERANCES = {
    "exact": 1e-12,  # Weil, slice, Plancherel, round trips, radon oracle
    "identity": 1e-10,  # orthogonality, inversion, adjoint, trace, operator paths
    "equivalence": 1e-9,  # LPS unitary equivalence
    "floor": 1e-14,  # absolute floor under every relative comparison
}


def digest(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(np.asarray(a, dtype=np.complex128)).tobytes())
    return h.hexdigest()[:16]


def group_label(ctx: TFContext) -> str:
    G = ctx.group
    gens = ",".join("(" + ",".join(map(str, g)) + ")" for g in ctx.subgroup.generators)
    base = "x".join(f"Z{n}" for n in G.factors) or "Z1"
    return f"{base}/<{gens}>"


@dataclass
class Runner:
    seed: int = 0
    trials: int = 1000
    samples: dict = field(default_factory=lambda: dict(DEFAULT_SAMPLES))
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    presets: dict = field(default_factory=dict)
    regions: list = field(default_factory=list)
    radon_sizes: tuple = (4, 6)
    radon_image: list | None = None
    records: list = field(default_factory=list)

    # current position, set by run_case
    _suite: str = ""
    _group: str = ""
    _case: int = 0

    def rng(self, suite, gi, case):
        return corpus.rng_for(self.seed, suite, gi, case)

    def add(self, check, lhs, rhs, residual, passed, inputs="", **details):
        self.records.append(
            {
                "suite": self._suite,
                "group": self._group,
                "case": self._case,
                "check": check,
                "inputs_digest": inputs,
                "lhs": lhs,
                "rhs": rhs,
                "residual": residual,
                "pass": bool(passed),
                "details": details,
            }
        )

    def equal(self, check, a, b, tol_key="identity", inputs=""):
        """Relative comparison of two arrays/scalars in max-abs norm."""
        a = np.asarray(a, dtype=np.complex128)
        b = np.asarray(b, dtype=np.complex128)
        tol = self.tolerances[tol_key]
        diff = float(np.max(np.abs(a - b), initial=0.0))
        scale = max(float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)))
        passed = diff <= tol * scale + self.tolerances["floor"]
        residual = diff / scale if scale > 0 else diff
        self.add(check, _scalar(a), _scalar(b), residual, passed, inputs, tolerance=tol)

    def at_most(self, check, lhs, rhs, inputs="", slack=1e-12, **details):
        lhs, rhs = float(lhs), float(rhs)
        passed = lhs <= rhs * (1 + 1e-9) + slack
        self.add(check, lhs, rhs, rhs - lhs, passed, inputs, **details)

    def flag(self, check, ok, inputs="", **details):
        self.add(check, None, None, None, ok, inputs, **details)

    def run_case(self, suite, group, case, fn, *args):
        self._suite, self._group, self._case = suite, group, case
        try:
            fn(self, *args)
        except Exception as exc:  # recorded, never raised
            self.add("error", None, None, None, False, "", error=f"{type(exc).__name__}: {exc}",
                     where=traceback.format_exc(limit=-1).strip().splitlines()[-1])

    # inputs with optional presets
    def group_fn(self, rng, domain, role):
        vals = corpus.complex_normal(rng, domain.order)  # always drawn, keeps streams aligned
        p = self.presets.get(role)
        return GroupFunction(domain, vals if p is None else preset_values(p, domain.order, role))

    def grid_fn(self, rng, ctx, role="sigma"):
        vals = corpus.complex_normal(rng, ctx.shape)
        p = self.presets.get(role)
        return TimeFreqFunction(ctx, vals if p is None else preset_values(p, ctx.order, role))

    def spec(self, rng, ctx):
        sigma = self.grid_fn(rng, ctx, "sigma")
        u = self.group_fn(rng, ctx.group, "u")
        v = self.group_fn(rng, ctx.group, "v")
        g = self.group_fn(rng, ctx.quotient, "g")
        return MultiplierSpec(sigma, u, v, g)


def preset_values(p: dict, n: int, role: str) -> np.ndarray:
    kind = p["kind"]
    out = np.zeros(n, dtype=np.complex128)
    if kind == "delta":
        out[int(p.get("index", 0)) % n] = 1
    elif kind == "constant":
        out[:] = complex(p.get("value", 1.0))
    elif kind == "indicator":
        idx = [i for i in p.get("indices", [0]) if 0 <= int(i) < n]
        out[idx] = 1
    else:  # "random" is handled by the caller keeping the drawn values
        raise ValueError(f"unknown preset {kind!r} for {role}")
    return out


def _scalar(a):
    """A compact real summary of an array for the report (value itself for real scalars)."""
    if a.ndim == 0:
        z = complex(a)
        return z.real if z.imag == 0 else [z.real, z.imag]
    return float(np.max(np.abs(a), initial=0.0))


# -- suites ------------------------------------------------------------------


def suite_weil(R: Runner, ctx, gi, case):
    rng = R.rng("weil", gi, case)
    G, Q, H = ctx.group, ctx.quotient, ctx.subgroup
    f = GroupFunction(G, corpus.complex_normal(rng, G.order))
    lhs = np.sum(periodize(f, H, Q).values) * float(Q.point_weight)
    rhs = np.sum(f.values) * float(G.point_weight)
    R.equal("weil_formula", lhs, rhs, "exact", digest(f.values))
    if case == 0:
        perp = annihilator(G, H)
        # the pairing is symmetric, so the annihilator of H-perp is computed by the same routine
        pp = annihilator(G, perp)
        R.flag("double_annihilator", tuple(pp.indices) == tuple(H.indices))
        R.flag("annihilator_order", len(perp.indices) * len(H.indices) == G.order)
        covered = np.bincount(Q.coset_array, minlength=Q.order)
        R.flag("coset_partition", bool(np.all(covered == len(H.indices))))
        ph = phase_matrix(G)
        chars = twiddles(G.modulus)[ph]
        R.equal("character_orthogonality", chars @ np.conj(chars.T), G.order * np.eye(G.order), "identity")


def suite_slice(R: Runner, ctx, gi, case):
    rng = R.rng("slice", gi, case)
    G, Q, H = ctx.group, ctx.quotient, ctx.subgroup
    f = GroupFunction(G, corpus.complex_normal(rng, G.order))
    g = GroupFunction(Q, corpus.complex_normal(rng, Q.order))
    d = digest(f.values, g.values)
    Rf = fourier(periodize(f, H, Q))
    fh = fourier(f)
    R.equal("fourier_slice", Rf.values, fh.values[Rf.domain.annihilator.indices], "exact", d)
    R.equal("plancherel_group", fh.norm(2), f.norm(2), "exact", d)
    R.equal("plancherel_quotient", fourier(g).norm(2), g.norm(2), "exact", d)
    R.equal("inverse_round_trip", inverse_fourier(fh).values, f.values, "exact", d)
    R.equal("inverse_round_trip_quotient", inverse_fourier(fourier(g)).values, g.values, "exact", d)
    R.equal("fft_path", fourier(f, fast=True).values, fh.values, "exact", d)


def suite_stft(R: Runner, ctx, gi, case):
    rng = R.rng("stft", gi, case)
    G = ctx.group
    f = GroupFunction(G, corpus.complex_normal(rng, G.order))
    g = GroupFunction(G, corpus.complex_normal(rng, G.order))
    k = G.element(int(rng.integers(G.order)))
    x = G.element(int(rng.integers(G.order)))
    d = digest(f.values, g.values, k, x)
    V = stft(f, g)
    w = float(G.point_weight) * float(ctx.dual.point_weight)
    R.equal("stft_norm", np.sum(np.abs(V) ** 2) * w, g.norm(2) ** 2 * f.norm(2) ** 2, "identity", d)
    R.equal("modulation_isometry", modulate(f, k).norm(2), f.norm(2), "exact", d)
    R.equal("translation_isometry", translate(f, x).norm(2), f.norm(2), "exact", d)
    R.equal("fourier_modulation", fourier(modulate(f, k)).values, translate(fourier(f), k).values, "exact", d)


def suite_dstft_ortho(R: Runner, ctx, gi, case):
    rng = R.rng("dstft_ortho", gi, case)
    G, Q = ctx.group, ctx.quotient
    f1, f2 = (GroupFunction(G, corpus.complex_normal(rng, G.order)) for _ in range(2))
    g1 = R.group_fn(rng, Q, "g")
    g2 = GroupFunction(Q, corpus.complex_normal(rng, Q.order))
    F = TimeFreqFunction(ctx, corpus.complex_normal(rng, ctx.shape))
    d = digest(f1.values, f2.values, g1.values, g2.values)
    D1 = analyze(f1, g1)
    R.equal("quotient_form", analyze_quotient_form(f1, g1).values, D1.values, "identity", d)
    R.equal("fourier_form", analyze_fourier_form(f1, g1).values, D1.values, "identity", d)
    R.equal("orthogonality", D1.inner(analyze(f2, g2)), f1.inner(f2) * g2.inner(g1), "identity", d)
    R.equal("norm_identity", D1.norm(2), g1.norm(2) * f1.norm(2), "identity", d)
    R.equal("adjoint", D1.inner(F), f1.inner(synthesize(F, g1)), "identity", digest(f1.values, g1.values, F.values))
    R.at_most("sup_bound", D1.norm(np.inf), g1.norm(np.inf) * f1.norm(1), d)
    for p in (2.0, 3.0, 4.0, np.inf):
        R.at_most(f"lp_bound_p{p:g}", D1.norm(p), g1.norm(p) * f1.norm(conjugate_exponent(p)), d, p=p)
    atom = AtomFamily(g1).atom(int(rng.integers(ctx.dual.order)), int(rng.integers(Q.order)))
    R.equal("atom_norm", atom.norm(2), math.sqrt(len(ctx.subgroup.indices)) * g1.norm(2), "identity", d)


def suite_inversion(R: Runner, ctx, gi, case):
    rng = R.rng("inversion", gi, case)
    G, Q = ctx.group, ctx.quotient
    f = GroupFunction(G, corpus.complex_normal(rng, G.order))
    g1 = R.group_fn(rng, Q, "g")
    g2 = GroupFunction(Q, corpus.complex_normal(rng, Q.order))
    d = digest(f.values, g1.values, g2.values)
    R.equal("two_window_round_trip", reconstruct(f, g1, g2).values, f.values, "identity", d)
    R.equal("synthesize_analyze", synthesize(analyze(f, g1), g1).values, g1.norm(2) ** 2 * f.values, "identity", d)
    one = TimeFreqFunction(ctx, np.ones(ctx.shape))
    R.equal("multiplier_identity", apply_generalized_multiplier(one, g1, f).values, f.values, "identity", d)
    R.equal("multiplier_identity_matrix", generalized_multiplier_matrix(one, g1).entries, np.eye(G.order), "identity", d)
    if case == 0 and Q.order > 1:
        a, b = delta(Q, 0), delta(Q, 1)
        try:
            reconstruct(f, a, b)
            R.flag("orthogonal_windows_rejected", False)
        except NonInvertibleWindowPairError:
            R.flag("orthogonal_windows_rejected", True)


def suite_multiplier(R: Runner, ctx, gi, case):
    rng = R.rng("multiplier", gi, case)
    G = ctx.group
    spec = R.spec(rng, ctx)
    f, h = (GroupFunction(G, corpus.complex_normal(rng, G.order)) for _ in range(2))
    sigma2 = TimeFreqFunction(ctx, corpus.complex_normal(rng, ctx.shape))
    a, b = corpus.complex_normal(rng, 2)
    d = digest(spec.sigma.values, spec.u.values, spec.v.values, spec.g.values, f.values, h.values)
    P = two_wavelet_matrix(spec)
    Pf = apply_two_wavelet(spec, f)
    R.equal("weak_form", Pf.inner(h), weak_form(spec, f, h), "identity", d)
    R.equal("matrix_path", P.apply(f.values), Pf.values, "identity", d)
    R.equal("kernel_path", kernel_matrix(spec).entries, P.entries, "identity", d)
    adj = two_wavelet_matrix(spec.replace(sigma=spec.sigma.conj(), u=spec.v, v=spec.u))
    nP = schatten_norm(P, np.inf)
    R.at_most("adjoint_identity", schatten_norm(P.adjoint() - adj, np.inf), R.tolerances["identity"] * nP, d, slack=0.0)
    lin = two_wavelet_matrix(spec.replace(sigma=spec.sigma * a + sigma2 * b))
    comb = two_wavelet_matrix(spec) * a + two_wavelet_matrix(spec.replace(sigma=sigma2)) * b
    R.equal("linearity_in_symbol", lin.entries, comb.entries, "identity", d)
    M_uf = apply_generalized_multiplier(spec.sigma, spec.g, spec.u * f)
    R.equal("generalized_relation", Pf.inner(h), spec.g.norm(2) ** 2 * (spec.v.conj() * M_uf).inner(h), "identity", d)


def suite_schatten(R: Runner, ctx, gi, case):
    rng = R.rng("schatten", gi, case)
    spec = R.spec(rng, ctx)
    d = digest(spec.sigma.values, spec.u.values, spec.v.values, spec.g.values)
    P = two_wavelet_matrix(spec)
    ps = [1.0, 1.5, 2.0, 3.0, np.inf]
    norms = [schatten_norm(P, p) for p in ps]
    R.flag("monotone_in_p", all(norms[i + 1] <= norms[i] * (1 + 1e-12) for i in range(len(ps) - 1)), d,
           norms=norms)
    A = P.euclidean()
    R.equal("s2_entrywise", norms[2], math.sqrt(float(np.sum(np.abs(A) ** 2))), "identity", d)
    R.at_most("lower_bound_below_sinf", lp_norm_lower_bound(P, 2, R.trials, R.seed), norms[-1], d)


def _theorem_exponents(rng, tid):
    th = THEOREMS[tid]
    p = r = None
    if th.exponent == "p":
        p = corpus.sample_exponent(rng, *th.p_range, open_lo=th.p_open_left)
    elif th.exponent == "rp":
        r = corpus.sample_exponent(rng, 1.0, 2.0, open_hi=tid == "lp_r_below_2")
        p = corpus.sample_exponent(rng, r, conjugate_exponent(r))
    return p, r


def suite_lp_bounds(R: Runner, ctx, gi, case):
    rng = R.rng("lp_bounds", gi, case)
    spec = R.spec(rng, ctx)
    d = digest(spec.sigma.values, spec.u.values, spec.v.values, spec.g.values)
    P = two_wavelet_matrix(spec)
    unit = normalize_windows(spec)
    Pu = two_wavelet_matrix(unit)
    for tid, th in THEOREMS.items():
        p, r = _theorem_exponents(rng, tid)
        s, M = (unit, Pu) if th.unit_windows else (spec, P)
        rep = bound_report(tid, s, p, r, trials=R.trials, seed=R.seed, matrix=M)
        R.add(f"bound_{tid}", rep.computed_lhs, rep.rhs, rep.slack, rep.passed, d,
              theorem_id=tid, lhs_method=rep.lhs_method, constants=rep.constants)


def suite_schur(R: Runner, ctx, gi, case):
    rng = R.rng("schur", gi, case)
    spec = R.spec(rng, ctx)
    d = digest(spec.sigma.values, spec.u.values, spec.v.values, spec.g.values)
    p = corpus.sample_exponent(rng)
    rep = bound_report("schur", spec, p, trials=R.trials, seed=R.seed)
    c = rep.constants
    R.at_most("kernel_column_sums", c["kernel_col_sum"], c["kernel_col_bound"], d)
    R.at_most("kernel_row_sums", c["kernel_row_sum"], c["kernel_row_bound"], d)
    R.add("bound_schur", rep.computed_lhs, rep.rhs, rep.slack, rep.passed, d, p=p, lhs_method=rep.lhs_method)
    G = ctx.group
    f = GroupFunction(G, corpus.complex_normal(rng, G.order))
    R.equal("kernel_apply", kernel_matrix(spec).apply(f.values), apply_two_wavelet(spec, f).values, "identity", d)


def suite_trace(R: Runner, ctx, gi, case):
    rng = R.rng("trace", gi, case)
    spec = R.spec(rng, ctx)
    d = digest(spec.sigma.values, spec.u.values, spec.v.values, spec.g.values)
    P = two_wavelet_matrix(spec)
    R.equal("trace_formula", trace(P), trace_formula(spec), "identity", d)
    # real windows: both orders of the window inner product agree
    real = spec.replace(u=spec.u.with_values(spec.u.values.real), v=spec.v.with_values(spec.v.values.real))
    R.equal("trace_formula_real_windows", trace(two_wavelet_matrix(real)), trace_formula_as_stated(real), "identity", d)
    normal = spec.replace(sigma=spec.sigma.with_values(spec.sigma.values.real), v=spec.u)
    Pn = two_wavelet_matrix(normal)
    R.equal("trace_eigenvalue_sum", trace(Pn), eigenvalue_sum(Pn), "identity", d)
    if case == 0:
        one = TimeFreqFunction(ctx, np.ones(ctx.shape))
        d0 = delta(ctx.group)
        inst = MultiplierSpec(one, d0, d0, delta(ctx.quotient))
        R.equal("trace_closed_form", trace(two_wavelet_matrix(inst)), 1.0, "identity")


def random_regions(rng, ctx) -> LocalizationRegions:
    def pick(n):
        k = int(rng.integers(1, n + 1))
        return [0] + [int(i) for i in rng.permutation(n)[:k]]

    return LocalizationRegions(ctx, pick(ctx.group.order), pick(ctx.group.order), pick(ctx.quotient.order),
                               pick(ctx.dual.order))


def suite_lps(R: Runner, ctx, gi, case, regions=None):
    rng = R.rng("lps", gi, case)
    regs = regions if regions is not None else random_regions(rng, ctx)
    g = R.group_fn(rng, ctx.quotient, "g")
    d = digest(regs.c1, regs.c2, regs.d, regs.omega, g.values)
    tol = R.tolerances["identity"]
    for name, M in (
        ("p_project_c1", p_matrix(ctx, regs.c1, g)),
        ("p_project_c2", p_matrix(ctx, regs.c2, g)),
        ("q_project", q_matrix(ctx, regs.d, regs.omega)),
    ):
        res = projection_residuals(M)
        R.at_most(f"{name}_idempotent", res["idempotent"], tol, d, slack=0.0)
        R.at_most(f"{name}_self_adjoint", res["self_adjoint"], tol, d, slack=0.0)
    eq = equivalence_check(regs, g)
    etol = R.tolerances["equivalence"]
    R.at_most("equivalence_full_grid", eq["residual_full"], etol, d, slack=0.0)
    R.at_most("equivalence_range", eq["residual_range"], etol, d, slack=0.0)
    R.at_most("eigenvalue_disc", eq["max_eigenvalue_modulus"], 1 + 1e-9, d, slack=0.0)
    # counting check: sqrt(#C1 #C2) in units of the point weight
    R.equal("alpha", eq["alpha"], math.sqrt(len(regs.c1) * len(regs.c2)) * float(ctx.group.point_weight), "exact", d)
    R.flag("alpha_squared_exact", eq["alpha_squared"] == regs.mass("c1") * regs.mass("c2")
           and eq["alpha_squared"] == len(regs.c1) * len(regs.c2) * ctx.group.point_weight ** 2, d,
           alpha=eq["alpha"], alpha_squared=str(eq["alpha_squared"]))
    R.flag("unit_indicator_windows", eq["window_norms_exact"], d)


def suite_radon(R: Runner, n, image):
    rng = R.rng("radon", n, 0)
    img = np.asarray(image, dtype=np.complex128) if image is not None else corpus.complex_normal(rng, (n, n)).real
    for dvec in radon.directions(n):
        Q = radon.line_quotient(n, dvec)
        g = GroupFunction(Q, corpus.complex_normal(rng, Q.order))
        d = digest(img, g.values, dvec)
        R._case = dvec[0] * n + dvec[1]
        R.equal(f"line_sums_d{dvec[0]}_{dvec[1]}", radon.discrete_radon(img, dvec).values, radon.line_sums_oracle(img, dvec), "exact", d)
        R.equal(f"directional_oracle_d{dvec[0]}_{dvec[1]}", radon.directional_dstft(img, dvec, g).values,
                radon.directional_oracle(img, dvec, g), "exact", d)
        R.equal(f"reconstruction_d{dvec[0]}_{dvec[1]}", radon.reconstruct_image(img, g), img, "identity", d)


SUITE_FUNCS = {
    "weil": suite_weil,
    "slice": suite_slice,
    "stft": suite_stft,
    "dstft_ortho": suite_dstft_ortho,
    "inversion": suite_inversion,
    "multiplier": suite_multiplier,
    "schatten": suite_schatten,
    "lp_bounds": suite_lp_bounds,
    "schur": suite_schur,
    "trace": suite_trace,
    "lps": suite_lps,
}


def run_suites(R: Runner, contexts, suites) -> list:
    for suite in suites:
        if suite == "radon":
            sizes = [len(R.radon_image)] if R.radon_image is not None else list(R.radon_sizes)
            for n in sizes:
                R.run_case("radon", f"Z{n}xZ{n}", 0, suite_radon, n, R.radon_image)
            continue
        fn = SUITE_FUNCS[suite]
        for gi, ctx in enumerate(contexts):
            label = group_label(ctx)
            for case in range(R.samples.get(suite, DEFAULT_SAMPLES[suite])):
                R.run_case(suite, label, case, fn, ctx, gi, case)
            if suite == "lps":
                for j, reg in enumerate(R.regions):
                    if reg["group"] == gi:
                        regs = LocalizationRegions(ctx, reg["c1"], reg["c2"], reg["d"], reg["omega"])
                        R.run_case("lps", label, 1000 + j, fn, ctx, gi, 1000 + j, regs)
    R.records.sort(key=lambda r: (r["suite"], r["group"], r["case"], r["check"]))
    return R.records
