import math
import warnings
from dataclasses import replace

import numpy as np
import pytest
from scipy import integrate, special

from rissec import channels as ch
from rissec import metrics as M
from rissec.metrics import Method, Scenario

from conftest import make_cfg


def rel(a, b):
    return abs(a - b) / abs(b)


def log_quad(f, lo=-40.0, hi=30.0):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        h = lambda x: f(math.exp(x)) * math.exp(x)
        return sum(integrate.quad(h, a, a + 2.0, limit=200, epsabs=0, epsrel=1e-11)[0]
                   for a in np.arange(lo, hi, 2.0))


# --- configuration --------------------------------------------------------

def test_scenario_parse():
    assert Scenario.parse("ii") is Scenario.UOWC_EAVESDROP
    assert Scenario.parse(3) is Scenario.SIMULTANEOUS
    assert Scenario.parse("RF_EAVESDROP") is Scenario.RF_EAVESDROP
    with pytest.raises(ValueError):
        Scenario.parse("IV")


def test_config_requires_eavesdroppers(links):
    with pytest.raises(ValueError, match="eve_rf"):
        M.ScenarioConfig("I", 0.01, links["main_rf"], links["main_uowc"], None, links["eve_uowc"])
    with pytest.raises(ValueError, match="eve_uowc"):
        M.ScenarioConfig("III", 0.01, links["main_rf"], links["main_uowc"], links["eve_rf"], None)
    with pytest.raises(ValueError, match="r0"):
        M.ScenarioConfig("I", -1.0, links["main_rf"], links["main_uowc"], links["eve_rf"])


def test_phi_threshold():
    assert make_cfg(r0=1.0).phi == 2.0
    assert make_cfg(r0=0.0).phi == 1.0


def test_wrong_scenario_rejected():
    with pytest.raises(ValueError):
        M.sop_scenario2(make_cfg("I"))
    with pytest.raises(ValueError):
        M.asc(make_cfg("II"))
    with pytest.raises(ValueError):
        M.asc(make_cfg("I"), Method.ASYMPTOTIC)


def test_probability_clamping():
    res = M._probability(1.0 + 1e-3, Method.CLOSED_FORM, 0.0, [])
    assert res.value == 1.0 and res.flagged and res.raw_value == 1.0 + 1e-3
    res = M._probability(-5e-7, Method.CLOSED_FORM, 0.0, [])
    assert res.value == 0.0 and not res.flagged


def test_quantity_labels():
    cfg = make_cfg("II")
    assert M.sop(cfg).quantity == "sop_lower_bound"
    assert M.spsc(cfg).quantity == "spsc"
    assert M.est(cfg).quantity == "est"


# --- ASC -----------------------------------------------------------------

def test_asc_kernels_against_quadrature(links):
    for eta, c in [(0, 0.3), (5, 0.11)]:
        ref = log_quad(lambda g: g ** (eta / 2) * math.exp(-c * math.sqrt(g)) / (1 + g))
        assert rel(M.kernel_x1(eta, c), ref) <= 1e-8
    d = links["main_uowc"]
    for eta, c in [(0, 0.3), (4, 0.12)]:
        gd = lambda g: d.k_d ** -1 * ch.uowc_snr_cdf(d, g)  # G-part of the CDF times gamma^(u/r)
        ref = log_quad(lambda g: g ** (eta / 2) * math.exp(-c * math.sqrt(g)) * gd(g) / (1 + g))
        assert rel(M.kernel_x2(d, eta, c), ref) <= 1e-6


def test_asc_starved_eavesdropper():
    cfg = make_cfg("I", omega_es=-60.0)
    t, d = cfg.main_rf, cfg.main_uowc
    ref = log_quad(lambda g: (1 - ch.eq_cdf(t, d, g)) / (1 + g)) / math.log(2)
    assert rel(M.asc(cfg).value, ref) <= 1e-3


def test_asc_matches_oracle_default():
    cfg = make_cfg("I")
    assert rel(M.asc(cfg).value, M.asc(cfg, Method.QUADRATURE_ORACLE).value) <= 1e-6


def test_asc_independent_of_r0():
    assert M.asc(make_cfg("I", r0=0.01)).value == M.asc(make_cfg("I", r0=3.0)).value


def test_asc_kernel_failure_is_named(monkeypatch):
    def boom(*a, **k):
        raise M.SpecfunError("synthetic failure")
    monkeypatch.setattr(M, "kernel_x2", boom)
    with pytest.raises(M.KernelEvaluationError, match="X2"):
        M.asc(make_cfg("I"))


# --- SOP I ---------------------------------------------------------------

def test_sop1_identical_eavesdropper_oracle():
    cfg = make_cfg("I", r0=0.0, omega_rd=200.0, omega_es=20.0)
    val = M.sop(cfg).value
    # identical RF laws and a perfect optical hop: P(gamma_t <= gamma_es) = 1/2
    assert abs(val - 0.5) <= 1e-3
    assert rel(val, M.sop_oracle(cfg).value) <= 1e-3


def test_sop1_starved():
    assert M.sop(make_cfg("I", omega_es=-60.0)).value <= 1e-3


def test_rf_vs_rf_outage_matches_quadrature():
    cfg = make_cfg("I", r0=1.0, omega_t=10.0)
    t, e, phi = cfg.main_rf, cfg.eve_rf, cfg.phi
    ref = log_quad(lambda g: ch.rf_snr_cdf(t, phi * g) * ch.rf_snr_pdf(e, g))
    assert rel(M._rf_vs_rf_outage(t, e, phi), ref) <= 1e-8


def test_sop1_asymptote_single_residue_and_slope():
    cfg = make_cfg("I")
    assert "2 residue terms" in M.sop_asymptotic(cfg).diag
    vals = [M.sop_asymptotic(make_cfg("I", omega_t=db, omega_rd=db, omega_es=-20.0)).value for db in (80, 90)]
    slope = math.log10(vals[1] / vals[0]) / 1.0
    u_t, u_d = cfg.main_rf.fitted.u, cfg.main_uowc.fitted.u
    assert slope == pytest.approx(-min(u_t / 2, u_d / cfg.main_uowc.r), abs=1e-3)


def test_sop1_monotone():
    grid = np.arange(0, 31, 5.0)
    v = [M.sop(make_cfg("I", omega_t=x)).value for x in grid]
    assert all(b <= a + 1e-12 for a, b in zip(v, v[1:]))
    v = [M.sop(make_cfg("I", omega_es=x)).value for x in grid]
    assert all(b >= a - 1e-12 for a, b in zip(v, v[1:]))


# --- SOP II --------------------------------------------------------------

@pytest.mark.parametrize("r", [1, 2])
def test_sop2_r0_zero_oracle(r):
    cfg = make_cfg("II", r0=0.0, r_d=r, r_er=r)
    assert rel(M.sop(cfg).value, M.sop_oracle(cfg).value) <= 1e-3


def test_sop2_starved_gives_rf_term():
    cfg = make_cfg("II", r0=2.0, omega_rer=-60.0, omega_t=5.0)
    ft = ch.rf_snr_cdf(cfg.main_rf, cfg.phi - 1.0)
    assert abs(M.sop(cfg).value - ft) <= 1e-3 * ft + 1e-9


def test_sop2_monotone_in_eavesdropper():
    v = [M.sop(make_cfg("II", omega_rer=x)).value for x in np.arange(0, 31, 5.0)]
    assert all(b >= a - 1e-12 for a, b in zip(v, v[1:]))


def test_uowc_cross_term_against_quadrature():
    cfg = make_cfg("II", r_d=2, r0=0.5)
    d, e, phi = cfg.main_uowc, cfg.eve_uowc, cfg.phi
    ref = log_quad(lambda g: ch.uowc_snr_cdf(d, phi * g) * ch.uowc_snr_pdf(e, g), -60, 20)
    assert rel(M._uowc_vs_uowc_outage(d, e, phi), ref) <= 1e-7


def test_sop2_asymptote_trend():
    grid = np.linspace(42, 60, 10)
    gaps = []
    for db in grid:
        cfg = make_cfg("II", omega_t=db, omega_rd=db)
        exact = M.sop(cfg).value
        gaps.append(abs(M.sop_asymptotic(cfg).value - exact) / exact)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] <= 0.05


# --- SOP III -------------------------------------------------------------

def test_sop3_starved_is_zero():
    cfg = make_cfg("III", omega_es=-80.0, omega_rer=-80.0, omega_t=40.0, omega_rd=40.0)
    assert M.sop(cfg).value <= 1e-3
    assert M.sop_asymptotic(cfg).value <= 1e-3


@pytest.mark.parametrize("omega_t", [0.0, 10.0, 25.0])
def test_sop3_dominance(omega_t):
    cfg = make_cfg("III", omega_t=omega_t)
    su, sr = M.sop3_components(cfg)
    v = M.sop(cfg).value
    assert v >= 1 - su and v >= 1 - sr
    assert v == pytest.approx(1 - su * sr, abs=1e-15)


def test_sop3_rf_component_asymptote_is_leading_residue():
    cfg = make_cfg("III", omega_t=50.0)
    t, e = cfg.main_rf, cfg.eve_rf
    ut, ue = t.fitted.u, e.fitted.u
    k = t.c * math.sqrt(cfg.phi) / e.c
    # leading term of I_p(u_t, u_e) at small p = k / (1 + k)
    ref = k ** ut * math.exp(special.gammaln(ut + ue) - special.gammaln(ut + 1) - special.gammaln(ue))
    su, _ = M.sop3_components(cfg, Method.ASYMPTOTIC)
    assert rel(1 - su, ref) <= 1e-12


# --- SPSC and EST --------------------------------------------------------

@pytest.mark.parametrize("scenario", ["I", "II", "III"])
def test_spsc_and_est_exact(scenario):
    cfg = make_cfg(scenario, r0=0.7)
    assert M.spsc(cfg).value == 1.0 - M.sop(cfg.with_r0(0.0)).value
    assert M.est(cfg).value == 0.7 * (1.0 - M.sop(cfg).value)
    assert 0.0 <= M.spsc(cfg).value <= 1.0


def test_est_zero_rate():
    assert M.est(make_cfg("II", r0=0.0)).value == 0.0


def test_est_rises_then_diminishes():
    r0 = [0.01, 0.5, 1, 2, 3, 4, 6, 8]
    v = [M.est(make_cfg("I", r0=x, omega_t=40.0, omega_rd=40.0)).value for x in r0]
    peak = int(np.argmax(v))
    assert 0 < peak < len(v) - 1
    assert all(b > a for a, b in zip(v[:peak], v[1:peak + 1]))
    assert all(b < a for a, b in zip(v[peak:], v[peak + 1:]))


def test_shared_ris_degeneration():
    # eavesdropper on the main RIS: all RF statistics equal
    cfg = make_cfg("I", omega_t=15.0, omega_es=15.0)
    assert cfg.main_rf.fitted == cfg.eve_rf.fitted and cfg.main_rf.c == cfg.eve_rf.c
    assert rel(M.sop(cfg).value, M.sop_oracle(cfg).value) <= 1e-6
