import math
import warnings
from dataclasses import replace

import numpy as np
import pytest
from scipy import integrate, special

from rissec import channels as ch
from rissec.channels import AlphaMuHop, EggHop, RisRfLink, RisUowcLink


def quad(f, a, b):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return integrate.quad(f, a, b, limit=400, epsabs=1e-13, epsrel=1e-11)[0]


def uowc(links, **kw):
    return replace(links["main_uowc"], **kw)


# --- moments ---------------------------------------------------------------

def test_zeroth_moments(links):
    assert ch.cascade_moment_rf(links["main_rf"], 0) == 1.0
    assert ch.cascade_moment_uowc(links["main_uowc"], 0) == 1.0


def test_rf_moment_nakagami_closed_form():
    # alpha = 2, mu = m: E[R^k] = Gamma(m + k/2) / (m^(k/2) Gamma(m))
    link = RisRfLink(AlphaMuHop(2, 4, 1), AlphaMuHop(2, 4, 1))
    for k in (1, 2, 3):
        single = special.gamma(4 + k / 2) / (4 ** (k / 2) * special.gamma(4))
        assert math.isclose(ch.cascade_moment_rf(link, k), single ** 2, rel_tol=1e-13)


def test_lambda_form_matches_exact_at_alpha_two(links):
    for k in range(5):
        assert math.isclose(ch.cascade_moment_rf_lambda(links["main_rf"], k),
                            ch.cascade_moment_rf(links["main_rf"], k), rel_tol=1e-12)


def test_lambda_form_departs_when_alpha_differs():
    link = RisRfLink(AlphaMuHop(3, 2, 1), AlphaMuHop(1.5, 2, 1))
    assert not math.isclose(ch.cascade_moment_rf_lambda(link, 2), ch.cascade_moment_rf(link, 2), rel_tol=1e-3)


def test_lambda_offsets_corrupt(links):
    assert ch.cascade_moment_rf_lambda(links["main_rf"], 0, (0.1, 0, 0, 0)) > 1.1


def test_moment_invalid_order():
    with pytest.raises(ValueError):
        ch.hop_moment_alpha_mu(AlphaMuHop(1, 1, 1), -2)
    with pytest.raises(ValueError):
        ch.cascade_moment_rf(RisRfLink(AlphaMuHop(), AlphaMuHop()), -1)


def test_egg_pure_exponential_limit():
    om = 1 - 1e-12
    hs = EggHop(om, 0.4, 1.2, 1.1, 5.0, xi=1.3, A=0.9)
    hr = EggHop(om, 0.7, 1.2, 1.1, 5.0, xi=0.8, A=1.1)
    link = RisUowcLink(hs, hr)
    for k in (1, 2, 3):
        xs, xr = hs.xi ** 2, hr.xi ** 2
        ref = (xs * xr * (hs.A * hr.A * hs.lam * hr.lam) ** k * special.gamma(k + 1) ** 2
               * special.gamma(k + xs) * special.gamma(k + xr)
               / (special.gamma(k + xs + 1) * special.gamma(k + xr + 1)))
        assert math.isclose(ch.cascade_moment_uowc(link, k), ref, rel_tol=1e-9)
        assert math.isclose(ch.uowc_exponential_term(link, k), ref, rel_tol=1e-9)


def test_egg_generalized_gamma_branch_by_quadrature():
    hop = EggHop(0.3, 0.5, 1.4, 1.2, 3.0, xi=1.0)
    # density of b G^(1/c): generalized gamma; pointing factor U^(1/xi^2), E = xi^2/(xi^2+k)
    def gg_pdf(x):
        return hop.c / (hop.b * special.gamma(hop.a)) * (x / hop.b) ** (hop.a * hop.c - 1) * math.exp(-(x / hop.b) ** hop.c)
    for k in (1, 2):
        gg = quad(lambda x: x ** k * gg_pdf(x), 0, 50)
        ref = (hop.omega * hop.lam ** k * math.factorial(k) + (1 - hop.omega) * gg) / (1 + k)
        assert math.isclose(ch.hop_moment_egg(hop, k), ref, rel_tol=1e-8)


# --- gamma fit -------------------------------------------------------------

def test_fit_gamma_examples():
    f = ch.fit_gamma(1.0, 0.25, 4)
    assert (f.u_raw, f.u, f.v) == (16.0, 16, 0.25)
    f = ch.fit_gamma(1.0, 1.0, 1)
    assert (f.u, f.v) == (1, 1.0)
    assert ch.fit_gamma(1.0, 10.0, 1).u == 1


def test_fit_gamma_degenerate():
    with pytest.raises(ch.DegenerateFitError):
        ch.fit_gamma(1.0, 0.0, 1)
    with pytest.raises(ValueError):
        ch.fit_gamma(-1.0, 1.0, 1)


def test_default_rf_fit_fixture(links):
    f = links["main_rf"].fitted
    m1 = (special.gamma(4.5) / (2 * special.gamma(4))) ** 2
    assert math.isclose(f.mean, m1, rel_tol=1e-13)
    assert math.isclose(f.u_raw, m1 ** 2 / (1 - m1 ** 2), rel_tol=1e-12)
    assert f.u_raw == pytest.approx(7.5309, abs=1e-4)
    assert f.u == 8 and f.rounding_error == pytest.approx(0.4691, abs=1e-4)


def test_default_uowc_fit_fixture(links):
    f = links["main_uowc"].fitted
    assert f.u_raw == pytest.approx(0.744, abs=1e-3)
    assert f.u == 1


@pytest.mark.parametrize("t", [0.5, 3.0])
def test_fit_scaling_property(t):
    base = RisRfLink(AlphaMuHop(2.5, 1.5, 1.0), AlphaMuHop(1.5, 3.0, 1.0), n_elements=2)
    scaled = RisRfLink(AlphaMuHop(2.5, 1.5, t), AlphaMuHop(1.5, 3.0, t), n_elements=2)
    assert math.isclose(scaled.fitted.mean, t * t * base.fitted.mean, rel_tol=1e-12)
    assert math.isclose(scaled.fitted.u_raw, base.fitted.u_raw, rel_tol=1e-10)


def test_link_validation():
    with pytest.raises(ValueError):
        RisRfLink(AlphaMuHop(), AlphaMuHop(), n_elements=0)
    with pytest.raises(ValueError):
        RisUowcLink(EggHop(0.2, 1, 1, 1, 1), EggHop(0.2, 1, 1, 1, 1), r=3)
    with pytest.raises(ValueError):
        EggHop(1.0, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        AlphaMuHop(alpha=0)


def test_db_conversion():
    assert ch.db_to_linear(20) == pytest.approx(100.0)
    assert ch.db_to_linear(-10) == pytest.approx(0.1)


# --- SNR laws --------------------------------------------------------------

def test_rf_cdf_limits(links):
    link = links["main_rf"]
    assert ch.rf_snr_cdf(link, 0.0) == 0.0
    assert ch.rf_snr_cdf_sum(link, 0.0) == 0.0
    assert ch.rf_snr_cdf(link, 1e12) == 1.0


def test_rf_pdf_normalised(links):
    link = links["main_rf"]
    total = sum(quad(lambda g: ch.rf_snr_pdf(link, g), a, b)
                for a, b in [(0, 10), (10, 1e3), (1e3, 1e5), (1e5, np.inf)])
    assert abs(total - 1.0) <= 1e-8


@pytest.mark.parametrize("r", [1, 2])
def test_uowc_pdf_normalised(links, r):
    link = uowc(links, r=r)
    total = sum(quad(lambda g: ch.uowc_snr_pdf(link, g), a, b)
                for a, b in [(0, 1), (1, 1e2), (1e2, 1e4), (1e4, np.inf)])
    assert abs(total - 1.0) <= 1e-6


def test_rf_cdf_forms_align(links):
    link = links["main_rf"]
    g = np.logspace(-2, 4, 30)
    np.testing.assert_allclose(ch.rf_snr_cdf(link, g), ch.rf_snr_cdf_sum(link, g), atol=1e-14)


@pytest.mark.parametrize("r", [1, 2])
def test_uowc_cdf_meijer_form(links, r):
    link = uowc(links, r=r, hop_s=replace(links["main_uowc"].hop_s, xi=0.7),
                hop_r=replace(links["main_uowc"].hop_r, xi=0.7), n_elements=3)
    g = np.logspace(-2, 3, 12)
    np.testing.assert_allclose(ch.uowc_snr_cdf_meijer(link, g), ch.uowc_snr_cdf(link, g), rtol=1e-8, atol=1e-14)


def test_uowc_cdf_zero(links):
    assert ch.uowc_snr_cdf(links["main_uowc"], 0.0) == 0.0
    assert ch.uowc_snr_cdf_meijer(links["main_uowc"], 0.0) == 0.0


def test_cdf_monotone(links):
    g = np.logspace(-4, 6, 200)
    assert np.all(np.diff(ch.rf_snr_cdf(links["main_rf"], g)) >= 0)
    assert np.all(np.diff(ch.uowc_snr_cdf(links["main_uowc"], g)) >= 0)


def test_imdd_cdf_dominates_hd_at_low_snr(links):
    # at equal electrical SNR, intensity detection (r=2) is the worse receiver at low gamma
    g = np.logspace(-3, -1, 10)
    assert np.all(ch.uowc_snr_cdf(uowc(links, r=2), g) >= ch.uowc_snr_cdf(uowc(links, r=1), g))


# --- dual hop --------------------------------------------------------------

def test_eq_cdf_identities(links):
    rf, uw = links["main_rf"], links["main_uowc"]
    assert ch.eq_cdf(rf, uw, 0.0) == 0.0
    g = np.logspace(-2, 4, 25)
    ft, fd = ch.rf_snr_cdf(rf, g), ch.uowc_snr_cdf(uw, g)
    np.testing.assert_allclose(ch.eq_cdf(rf, uw, g), ft + fd - ft * fd, atol=1e-12)
    assert np.all(ch.eq_cdf(rf, uw, g) >= np.maximum(ft, fd) - 1e-15)
    strong = replace(rf, omega_db=300.0)
    np.testing.assert_allclose(ch.eq_cdf(strong, uw, g), fd, atol=1e-12)
    rf_gamma = float(rf.omega)
    direct = ch.rf_snr_cdf(rf, rf_gamma) + ch.uowc_snr_cdf(uw, rf_gamma) \
        - ch.rf_snr_cdf(rf, rf_gamma) * ch.uowc_snr_cdf(uw, rf_gamma)
    assert abs(ch.eq_cdf(rf, uw, rf_gamma) - direct) <= 1e-8


@pytest.mark.parametrize("r", [1, 2])
def test_eq_cdf_asymptote(links, r):
    gaps = []
    for db in (40, 50, 60):
        rf = replace(links["main_rf"], omega_db=db)
        uw = uowc(links, r=r, omega_r_db=db)
        exact = ch.eq_cdf(rf, uw, 1.0)
        gaps.append(abs(ch.eq_cdf_asymptotic(rf, uw, 1.0) - exact) / exact)
    assert gaps[-1] <= 0.05
    assert gaps[0] > gaps[1] > gaps[2]


def test_eq_cdf_asymptote_zero_and_terms(links):
    assert ch.eq_cdf_asymptotic(links["main_rf"], links["main_uowc"], 0.0) == 0.0
    assert len(ch.uowc_cdf_leading_terms(links["main_uowc"])) == 1
    assert len(ch.uowc_cdf_leading_terms(uowc(links, r=2))) == 2


def test_uowc_leading_terms_against_cdf(links):
    for r in (1, 2):
        link = uowc(links, r=r, n_elements=3)
        g = 1e-8
        approx = sum(c * g ** e for c, e in ch.uowc_cdf_leading_terms(link))
        assert math.isclose(approx, ch.uowc_snr_cdf(link, g), rel_tol=1e-3)
