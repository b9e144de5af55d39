"""One test per acceptance criterion, each printing a single PASS/FAIL line.

The corpus is ``configs/corpus.json``: eight groups of order at most 16 with
the default per-suite sample counts, two LPS region sets, and 4x4 and 6x6
images. Tolerances are pinned here rather than read back from the report, so
loosening a suite default cannot make a criterion pass.
"""

import json
import re
import time
from pathlib import Path

import pytest
from conftest import ACCEPTANCE_LINES

from qstft.cli import main
from qstft.radon import directions

CONFIG_PATH = Path(__file__).resolve().parents[1] / "configs" / "corpus.json"


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    d = tmp_path_factory.mktemp("acceptance")
    out = []
    for name in ("a.json", "b.json"):
        t0 = time.perf_counter()
        code = main(["run", "--config", str(CONFIG_PATH), "--out", str(d / name)])
        out.append({"code": code, "text": (d / name).read_text(), "seconds": time.perf_counter() - t0})
    return out


@pytest.fixture(scope="module")
def checks(runs):
    return json.loads(runs[0]["text"])["checks"]


def select(checks, suite, name=None, prefix=None):
    out = [c for c in checks if c["suite"] == suite]
    if name is not None:
        out = [c for c in out if c["check"] == name]
    if prefix is not None:
        out = [c for c in out if c["check"].startswith(prefix)]
    return out


def verdict(number, ok, summary):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {summary}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def within(recs, tol):
    """Every record has a relative residual at most ``tol``."""
    worst = max((c["residual"] for c in recs), default=float("inf"))
    return bool(recs) and worst <= tol, worst


def test_criterion_01_weil(checks):
    recs = select(checks, "weil", "weil_formula")
    ok, worst = within(recs, 1e-12)
    verdict(1, ok and len(recs) >= 50, f"Weil formula, {len(recs)} cases, max rel residual {worst:.2e} (tol 1e-12)")


def test_criterion_02_fourier_slice(checks):
    recs = select(checks, "slice", "fourier_slice")
    ok, worst = within(recs, 1e-12)
    verdict(2, ok, f"Fourier-slice relation, {len(recs)} cases, max rel residual {worst:.2e} (tol 1e-12)")


def test_criterion_03_three_forms(checks):
    recs = select(checks, "dstft_ortho", "quotient_form") + select(checks, "dstft_ortho", "fourier_form")
    ok, worst = within(recs, 1e-10)
    verdict(3, ok, f"three-form agreement, {len(recs)} comparisons, max rel residual {worst:.2e} (tol 1e-10)")


def test_criterion_04_orthogonality(checks):
    orth = select(checks, "dstft_ortho", "orthogonality")
    norm = select(checks, "dstft_ortho", "norm_identity")
    ok1, w1 = within(orth, 1e-10)
    ok2, w2 = within(norm, 1e-10)
    verdict(4, ok1 and ok2 and len(orth) >= 100,
            f"orthogonality {len(orth)} cases max {w1:.2e}, norm identity max {w2:.2e} (tol 1e-10)")


def test_criterion_05_inversion(checks):
    rt = select(checks, "inversion", "two_window_round_trip")
    ident = select(checks, "inversion", "multiplier_identity") + select(checks, "inversion", "multiplier_identity_matrix")
    ok1, w1 = within(rt, 1e-10)
    ok2, w2 = within(ident, 1e-10)
    verdict(5, ok1 and ok2, f"round trip {len(rt)} cases max {w1:.2e}, unit-symbol multiplier max {w2:.2e} (tol 1e-10)")


def test_criterion_06_adjoint(checks):
    recs = select(checks, "multiplier", "adjoint_identity")
    # lhs is the S_inf norm of the difference, rhs is 1e-10 * ||P||_{S_inf}
    ok = len(recs) >= 100 and all(c["lhs"] <= c["rhs"] for c in recs)
    worst = max(c["lhs"] / (c["rhs"] / 1e-10) for c in recs)
    verdict(6, ok, f"adjoint identity, {len(recs)} specs, max ||diff||/||P|| {worst:.2e} (tol 1e-10)")


def test_criterion_07_trace(checks):
    recs = select(checks, "trace", "trace_formula")
    closed = select(checks, "trace", "trace_closed_form")
    ok1, w1 = within(recs, 1e-10)
    ok2, _ = within(closed, 1e-10)
    verdict(7, ok1 and ok2, f"trace formula {len(recs)} specs max {w1:.2e}; closed-form instance trace 1 on {len(closed)} groups")


def test_criterion_08_norm_bounds(checks):
    recs = select(checks, "lp_bounds", prefix="bound_")
    by = {}
    for c in recs:
        by.setdefault(c["check"], []).append(c)
    failed = {k: [c for c in v if not c["pass"]] for k, v in by.items()}
    failed = {k: v for k, v in failed.items() if v}
    enough = all(len(v) >= 200 for v in by.values())
    detail = "; ".join(
        f"{k[6:]} {len(v)}/{len(by[k])} failed, worst lhs/rhs {max(c['lhs'] / c['rhs'] for c in v):.3f}"
        for k, v in sorted(failed.items())
    )
    verdict(8, enough and not failed and len(by) == 14,
            f"{len(by)} bounds x >= {min(len(v) for v in by.values())} specs" + (f"; {detail}" if detail else ", all dominated"))


def test_criterion_09_lps(checks):
    proj = select(checks, "lps", prefix="p_project") + select(checks, "lps", prefix="q_project")
    eq = select(checks, "lps", prefix="equivalence")
    alpha = select(checks, "lps", "alpha")
    ok_p = proj and all(c["lhs"] <= 1e-10 for c in proj)
    ok_e = eq and all(c["lhs"] <= 1e-9 for c in eq)
    ok_a = alpha and all(c["residual"] == 0 for c in alpha)
    example = [c for c in alpha if c["group"] == "Z4/<(2)>" and c["case"] == 1000]
    ok_x = bool(example) and example[0]["lhs"] == 2.0
    verdict(9, bool(ok_p and ok_e and ok_a and ok_x),
            f"projections max {max(c['lhs'] for c in proj):.2e} (tol 1e-10), equivalence max "
            f"{max(c['lhs'] for c in eq):.2e} (tol 1e-9), alpha exact on {len(alpha)} configurations")


def test_criterion_10_radon(checks):
    ok, parts = True, []
    for n in (4, 6):
        label = f"Z{n}xZ{n}"
        recs = [c for c in select(checks, "radon") if c["group"].startswith(label)]
        orc = [c for c in recs if c["check"].startswith("directional_oracle")]
        rec = [c for c in recs if c["check"].startswith("reconstruction")]
        o_ok, o_w = within(orc, 1e-12)
        r_ok, r_w = within(rec, 1e-10)
        ok &= o_ok and r_ok and len(orc) == len(directions(n)) == len(rec)
        parts.append(f"{n}x{n}: {len(orc)} directions oracle max {o_w:.1e} recon max {r_w:.1e}")
    verdict(10, ok, "; ".join(parts))


def test_criterion_11_determinism(runs):
    strip = lambda t: re.sub(r'"timestamp":"[^"]*"', '"timestamp":""', t)
    a, b = (strip(r["text"]) for r in runs)
    secs = max(r["seconds"] for r in runs)
    verdict(11, a == b, f"two runs byte-identical after timestamp removal ({len(a)} bytes, slowest run {secs:.1f}s)")
