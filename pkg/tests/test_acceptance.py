"""Acceptance criteria 1-9, one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the criterion lines are
printed to the terminal even when output capture is on.
"""

import math
import time
import warnings

import numpy as np
import pytest
from scipy import integrate

from rissec import channels as ch
from rissec import cli
from rissec import metrics as M
from rissec import montecarlo as mc
from rissec.figures import OMEGA_GRID
from rissec.metrics import Method, Scenario
from rissec.specfun import FoxHSpec, GammaParamPair, fox_h, meijer_g
from rissec.sweep import McSpec, SweepSpec, run_sweep

from conftest import make_cfg

EVE_SNR = {"I": ("omega_es",), "II": ("omega_rer",), "III": ("omega_es", "omega_rer")}


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    return emit


def rel(a, b):
    return abs(a - b) / abs(b)


def quad(f, a, b):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return integrate.quad(f, a, b, limit=400, epsabs=1e-13, epsrel=1e-11)[0]


def cdf_from_pdf(pdf, g):
    """``int_0^g pdf`` on a log scale, split at decades for the cusp at zero."""
    edges = np.concatenate(([-60.0], np.arange(-40.0, math.log(g), 4.0), [math.log(g)]))
    return sum(quad(lambda x: pdf(math.exp(x)) * math.exp(x), a, b) for a, b in zip(edges[:-1], edges[1:]))


def test_criterion_1_identities(report):
    t0 = time.perf_counter()
    exp_spec = FoxHSpec.meijer(1, 0, [], [0.0])
    recip_spec = FoxHSpec.meijer(1, 1, [0.0], [0.0])
    xs = np.logspace(-2, 1, 40)
    worst = max(max(rel(meijer_g(exp_spec, x), math.exp(-x)), rel(meijer_g(recip_spec, x), 1 / (1 + x)))
                for x in xs)
    # H with unit scales against the same parameters evaluated as Meijer G by
    # mpmath, and a scale-2 H against its elementary closed form
    import mpmath as mp
    worst_h = 0.0
    for r, u in [(1, 1), (1, 3), (2, 1), (2, 4)]:
        up, lo = [1.0 - u / r], [j / r for j in range(r)] + [-u / r]
        h = FoxHSpec(r, 1, tuple(GammaParamPair(a, 1.0) for a in up), tuple(GammaParamPair(b, 1.0) for b in lo))
        for x in np.logspace(-2, 1, 8):
            ref = float(mp.meijerg([up, []], [lo[:r], lo[r:]], x))
            worst_h = max(worst_h, rel(fox_h(h, x), ref))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and worst_h <= 1e-10 and elapsed < 10
    report(1, ok, f"max rel G identity {worst:.2e} (tol 1e-8); max rel H unit-scale {worst_h:.2e} "
                  f"(tol 1e-10); {elapsed:.1f} s")
    assert ok


def test_criterion_2_cdf_equals_integrated_pdf(report, links):
    t0 = time.perf_counter()
    from dataclasses import replace
    grid = np.logspace(-3, 3, 20)
    worst = {}
    rf = links["main_rf"]
    worst["rf"] = max(abs(ch.rf_snr_cdf(rf, g) - cdf_from_pdf(lambda x: ch.rf_snr_pdf(rf, x), g)) for g in grid)
    for r in (1, 2):
        uw = replace(links["main_uowc"], r=r)
        ints = [cdf_from_pdf(lambda x: ch.uowc_snr_pdf(uw, x), g) for g in grid]
        worst[f"uowc r={r} gammainc"] = max(abs(ch.uowc_snr_cdf(uw, g) - i) for g, i in zip(grid, ints))
        worst[f"uowc r={r} meijer"] = max(abs(ch.uowc_snr_cdf_meijer(uw, g) - i) for g, i in zip(grid, ints))
    elapsed = time.perf_counter() - t0
    ok = max(worst.values()) <= 1e-6 and elapsed < 60
    report(2, ok, "; ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f" (tol 1e-6 abs); {elapsed:.1f} s")
    assert ok


def test_criterion_3_moments(report, links):
    t0 = time.perf_counter()
    lines, ok = [], True
    for i, name in enumerate(("main_rf", "main_uowc")):
        rep = mc.moment_check(links[name], 3, 1_000_000, mc.RngStream(0, i))
        ok &= rep.passed()
        lines.append(f"{name} |z| " + ",".join(f"{abs(r.z):.2f}" for r in rep.rows[1:]))
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120
    report(3, ok, "; ".join(lines) + f" (k=1..3, 1e6 draws, tol 3); {elapsed:.1f} s")
    assert ok


def test_criterion_4_closed_form_vs_oracle(report):
    t0 = time.perf_counter()
    worst = {}
    for s in ("I", "II", "III"):
        for t in (0.0, 10.0, 20.0):
            for e in (0.0, 10.0, 20.0):
                cfg = make_cfg(s, omega_t=t, **{k: e for k in EVE_SNR[s]})
                worst[f"SOP {s}"] = max(worst.get(f"SOP {s}", 0.0),
                                        rel(M.sop(cfg).value, M.sop(cfg, Method.QUADRATURE_ORACLE).value))
                if s == "I":
                    worst["ASC"] = max(worst.get("ASC", 0.0),
                                       rel(M.asc(cfg).value, M.asc(cfg, Method.QUADRATURE_ORACLE).value))
    elapsed = time.perf_counter() - t0
    ok = max(worst.values()) <= 1e-3 and elapsed < 600
    report(4, ok, "; ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f" (tol 1e-3 rel); {elapsed:.1f} s")
    assert ok


def test_criterion_5_closed_form_vs_monte_carlo(report):
    t0 = time.perf_counter()
    cases = [("ASC", "I")] + [(m, s) for m in ("SOP", "SPSC", "EST") for s in ("I", "II", "III")]
    zs, bad, rare = [], [], 0
    for metric, s in cases:
        spec = SweepSpec(metric, Scenario.parse(s), "omega_t", OMEGA_GRID, mc=McSpec(1_000_000, 0),
                         asymptotic=False)
        for row in run_sweep(spec):
            zs.append(abs(row.z))
            if metric in ("SOP", "SPSC"):
                rare += 1e6 * min(row.analytic, 1.0 - row.analytic) < 10.0
            if not abs(row.z) <= 3.0:
                bad.append(f"{metric} {s} @ {row.x:g} dB z={row.z:.2f}")
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 600
    report(5, ok, f"{len(zs) - len(bad)}/{len(zs)} points within 3 sigma, max |z| {max(zs):.2f}, "
                  f"{rare} probability points with fewer than 10 expected events"
                  + (f"; outside: {', '.join(bad)}" if bad else "") + f"; {elapsed:.1f} s")
    assert ok


def test_criterion_6_asymptotics(report):
    gaps = {}
    for r in (1, 2):
        g = []
        for db in (40.0, 50.0, 60.0):
            cfg = make_cfg("I", omega_t=db, omega_rd=db, r_d=r)
            exact = ch.eq_cdf(cfg.main_rf, cfg.main_uowc, 1.0)
            g.append(rel(ch.eq_cdf_asymptotic(cfg.main_rf, cfg.main_uowc, 1.0), exact))
        gaps[f"eq_cdf r={r}"] = g
    for s in ("I", "II", "III"):
        g = []
        for db in (40.0, 50.0, 60.0):
            cfg = make_cfg(s, omega_t=db, omega_rd=db)
            g.append(rel(M.sop(cfg, Method.ASYMPTOTIC).value, M.sop(cfg).value))
        gaps[f"SOP {s}"] = g
    ok = all(g[2] <= 0.05 and g[0] > g[1] > g[2] for g in gaps.values())
    report(6, ok, "; ".join(f"{k} " + "/".join(f"{x:.1e}" for x in g) for k, g in gaps.items())
                  + " (40/50/60 dB, tol 5% at 60 dB, shrinking)")
    assert ok


ANCHOR = {1.0: 0.29, 3.0: 0.63}


def _anchor_values():
    out = {}
    for r_d in (1, 2):
        for i, alpha in enumerate(ANCHOR):
            cfg = make_cfg("III", omega_t=6.0, r_d=r_d, eve_rf__hop_r__alpha=alpha)
            est = mc.empirical_sop(cfg, 1_000_000, mc.RngStream(7, 2 * r_d + i))
            val = M.sop(cfg).value
            out[(r_d, alpha)] = (val, est.mean, est.z_score(val))
    return out


def test_criterion_7_anchor(report):
    vals = _anchor_values()
    in_band = all(abs(vals[(r_d, a)][0] - ref) <= 0.05 for r_d in (1, 2) for a, ref in ANCHOR.items())
    mc_ok = all(abs(z) <= 3.0 for _, _, z in vals.values())
    side = "; ".join(f"r_d={r_d} alpha={a:g}: closed {v:.4f} mc {m:.4f} z={z:.2f} target {ANCHOR[a]}"
                     for (r_d, a), (v, m, z) in vals.items())
    report(7, in_band and mc_ok,
           f"band 0.29 -> 0.63 +/- 0.05 {'met' if in_band else 'not met'}; "
           f"closed form vs MC {'agree' if mc_ok else 'DISAGREE'} within 3 sigma; {side}")
    # the side-by-side fallback requires closed form and MC to agree
    assert mc_ok


@pytest.mark.xfail(strict=True, reason="reference band not reachable with the stated default parameters")
def test_criterion_7_anchor_band():
    vals = _anchor_values()
    for r_d in (1, 2):
        for a, ref in ANCHOR.items():
            assert vals[(r_d, a)][0] == pytest.approx(ref, abs=0.05)


def test_criterion_8_exact_relations(report):
    mismatches, dominance_bad, n = 0, 0, 0
    for s in ("I", "II", "III"):
        for t in OMEGA_GRID:
            cfg = make_cfg(s, omega_t=t)
            sop0 = M.sop(cfg.with_r0(0.0)).value
            sop = M.sop(cfg).value
            mismatches += M.spsc(cfg).value != 1.0 - sop0
            mismatches += M.est(cfg).value != cfg.r0 * (1.0 - sop)
            n += 2
            if s == "III":
                su, sr = M.sop3_components(cfg)
                dominance_bad += not (sop >= max(1.0 - su, 1.0 - sr))
    ok = mismatches == 0 and dominance_bad == 0
    report(8, ok, f"{n - mismatches}/{n} SPSC/EST values bit-exact; "
                  f"SOP^III dominance violations {dominance_bad}/{len(OMEGA_GRID)}")
    assert ok


def test_criterion_9_determinism(report, tmp_path):
    import json
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"metric": "SOP", "scenario": "I", "sweep_var": "omega_t",
                                "grid": [0, 5, 10, 15, 20, 25, 30, 35], "mc": {"n": 300000, "seed": 42}}))
    outs = []
    for k, workers in enumerate((1, 8, 1, 8)):
        out = tmp_path / f"run{k}.csv"
        cli.main(["compare", "--spec", str(spec), "--out", str(out), "--workers", str(workers), "--quiet"])
        outs.append(out.read_bytes())
    ok = len(set(outs)) == 1 and len(outs[0]) > 0
    report(9, ok, f"4 compare runs (workers 1, 8, 1, 8): {len(set(outs))} distinct CSV output(s)")
    assert ok
