"""Secrecy metrics of the RIS-assisted mixed RF-UOWC network.

Three eavesdropping scenarios are covered:

* ``RF_EAVESDROP`` (I): an eavesdropper listens to the RF hop through its own
  RIS.  The outage event is ``min(gamma_t, gamma_d) <= phi gamma_es``.
* ``UOWC_EAVESDROP`` (II): an eavesdropper listens to the optical hop.  The
  outage event is ``gamma_t <= phi - 1`` or ``gamma_d <= phi gamma_er``.
* ``SIMULTANEOUS`` (III): both eavesdroppers are present.  The link is secure
  only if both hops are, so ``SOP = 1 - SOP_u SOP_r`` with ``SOP_u`` and
  ``SOP_r`` the probabilities that the RF and the optical hop stay secure.

Here ``phi = 2^R0``.  The outage probabilities are the usual lower bounds
obtained by dropping the ``+1`` inside the capacity logarithms; the exact SOP
has no tractable closed form.

Every metric has three evaluation paths: the closed form written in Meijer-G
and (bivariate) Fox-H kernels, a high-SNR asymptote built from leading
residues, and a quadrature oracle integrating the channel CDFs and PDFs
directly.  ASC is reported in bits/s/Hz.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate, special

from . import channels as ch
from .channels import RisRfLink, RisUowcLink
from .specfun import (BivariateFoxHSpec, Diagnostics, FoxHSpec,
                      GammaParamPair, JointParam, SpecfunError, fox_h, fox_h_bivariate, meijer_g)

__all__ = [
    "Scenario",
    "Method",
    "ScenarioConfig",
    "MetricResult",
    "KernelEvaluationError",
    "PROB_EPS",
    "asc_scenario1",
    "asc_oracle",
    "sop_scenario1",
    "sop_scenario1_asymptotic",
    "sop_scenario1_oracle",
    "sop_scenario2",
    "sop_scenario2_asymptotic",
    "sop_scenario2_oracle",
    "sop_scenario3",
    "sop_scenario3_asymptotic",
    "sop_scenario3_oracle",
    "sop3_components",
    "sop",
    "sop_asymptotic",
    "sop_oracle",
    "spsc",
    "est",
    "asc",
    "kernel_x1",
    "kernel_x2",
    "kernel_x3",
]

PROB_EPS = 1e-6
# probability mass below which a kernel's relative accuracy is irrelevant
PROB_ABS_FLOOR = 1e-10
LN2 = math.log(2.0)


class Scenario(enum.Enum):
    RF_EAVESDROP = "I"
    UOWC_EAVESDROP = "II"
    SIMULTANEOUS = "III"

    @classmethod
    def parse(cls, value) -> "Scenario":
        if isinstance(value, cls):
            return value
        text = str(value).strip().upper()
        for item in cls:
            if text in (item.value, item.name, str(["I", "II", "III"].index(item.value) + 1)):
                return item
        raise ValueError(f"unknown scenario {value!r}; expected one of I, II, III")


class Method(enum.Enum):
    CLOSED_FORM = "closed_form"
    ASYMPTOTIC = "asymptotic"
    QUADRATURE_ORACLE = "quadrature_oracle"


class KernelEvaluationError(SpecfunError):
    """A named closed-form kernel failed to evaluate."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Scenario selector, target rate and the link bundles it needs."""

    scenario: Scenario
    r0: float
    main_rf: RisRfLink
    main_uowc: RisUowcLink
    eve_rf: RisRfLink | None = None
    eve_uowc: RisUowcLink | None = None

    def __post_init__(self):
        object.__setattr__(self, "scenario", Scenario.parse(self.scenario))
        if not (self.r0 >= 0 and math.isfinite(self.r0)):
            raise ValueError(f"r0 must be a nonnegative real, got {self.r0!r}")
        if self.scenario in (Scenario.RF_EAVESDROP, Scenario.SIMULTANEOUS) and self.eve_rf is None:
            raise ValueError(f"scenario {self.scenario.value} needs an RF eavesdropper link (eve_rf)")
        if self.scenario in (Scenario.UOWC_EAVESDROP, Scenario.SIMULTANEOUS) and self.eve_uowc is None:
            raise ValueError(f"scenario {self.scenario.value} needs a UOWC eavesdropper link (eve_uowc)")

    @property
    def phi(self) -> float:
        """SNR threshold ``2^R0``."""
        return 2.0 ** self.r0

    def with_r0(self, r0: float) -> "ScenarioConfig":
        return replace(self, r0=r0)

    def with_scenario(self, scenario) -> "ScenarioConfig":
        return replace(self, scenario=Scenario.parse(scenario))


@dataclass
class MetricResult:
    """A metric value with its provenance.

    Probability-valued results are clamped into ``[0, 1]``; ``raw_value``
    keeps the unclamped number and ``flagged`` is set when it fell outside
    ``[-PROB_EPS, 1 + PROB_EPS]``.
    """

    value: float
    method: Method
    error_estimate: float = 0.0
    diagnostics: list[str] = field(default_factory=list)
    raw_value: float | None = None
    flagged: bool = False
    quantity: str = ""

    def __float__(self) -> float:
        return float(self.value)

    @property
    def diag(self) -> str:
        return "; ".join(self.diagnostics)


def _probability(value: float, method: Method, error: float, notes: list[str]) -> MetricResult:
    raw = float(value)
    flagged = not (-PROB_EPS <= raw <= 1.0 + PROB_EPS)
    if flagged:
        notes = notes + [f"clamped out-of-range probability {raw:.3g}"]
    return MetricResult(min(1.0, max(0.0, raw)), method, float(error), notes, raw, flagged)


def _require(cfg: ScenarioConfig, scenario: Scenario, name: str) -> None:
    if cfg.scenario is not scenario:
        raise ValueError(f"{name} requires scenario {scenario.value}, got {cfg.scenario.value}")


class _Tracker:
    """Collects kernel diagnostics and an absolute error budget."""

    def __init__(self):
        self.error = 0.0
        self.worst = None
        self.count = 0

    def add(self, diag: Diagnostics, weight: float):
        self.count += 1
        self.error += abs(weight) * diag.error_estimate
        if self.worst is None or diag.error_estimate > self.worst.error_estimate:
            self.worst = diag

    def notes(self) -> list[str]:
        if self.worst is None:
            return []
        return [f"{self.count} kernels, worst {self.worst.summary()}"]


def _kernel(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except SpecfunError as exc:
        raise KernelEvaluationError(f"kernel {name} failed: {exc}") from exc


# ---------------------------------------------------------------------------
# ASC kernels


def kernel_x1(eta: int, c: float, diagnostics: Diagnostics | None = None) -> float:
    """``int_0^inf gamma^(eta/2) exp(-c sqrt(gamma)) / (1 + gamma) dgamma``.

    Equals ``G^{3,1}_{1,3}[c^2/4 | -eta/2; 0, 1/2, -eta/2] / sqrt(pi)``.
    """
    spec = FoxHSpec.meijer(3, 1, [-eta / 2.0], [0.0, 0.5, -eta / 2.0])
    return meijer_g(spec, c * c / 4.0, diagnostics=diagnostics) / math.sqrt(math.pi)


_G11 = FoxHSpec.meijer(1, 1, [0.0], [0.0])
_EXP = FoxHSpec(1, 0, (), (GammaParamPair(0.0, 1.0),))


def kernel_x2(link: RisUowcLink, eta: int, c: float, diagnostics: Diagnostics | None = None) -> float:
    """``int gamma^(eta/2 + u/r) exp(-c sqrt(gamma)) G_d(kappa gamma) / (1 + gamma) dgamma``.

    ``G_d`` is the Meijer-G part of the UOWC CDF.  After writing ``1/(1+gamma)``
    and ``G_d`` as Mellin-Barnes integrals the gamma integral is elementary,
    giving ``2 c^(-2 rho) H[c^-2, kappa c^-2]`` with ``rho = eta/2 + u/r + 1``
    and joint parameter ``(1 - 2 rho; 2, 2)``.
    """
    u, r = link.fitted.u, link.r
    rho = eta / 2.0 + u / r + 1.0
    spec = BivariateFoxHSpec(1, (JointParam(1.0 - 2.0 * rho, 2.0, 2.0),), (), _G11, ch.uowc_cdf_spec(link))
    return 2.0 * c ** (-2.0 * rho) * fox_h_bivariate(spec, c ** -2, link.kappa * c ** -2,
                                                     diagnostics=diagnostics)


def kernel_x3(eta: int, c1: float, c2: float, diagnostics: Diagnostics | None = None) -> float:
    """``int gamma^(eta/2) exp(-(c1 + c2) sqrt(gamma)) / (1 + gamma) dgamma``.

    The two exponentials are kept apart: ``exp(-c2 sqrt(gamma))`` becomes the
    second Mellin-Barnes kernel, which gives ``2 c1^(-2 rho) H[c1^-2, c2/c1]``
    with joint parameter ``(1 - 2 rho; 2, 1)`` and ``rho = eta/2 + 1``.
    """
    rho = eta / 2.0 + 1.0
    spec = BivariateFoxHSpec(1, (JointParam(1.0 - 2.0 * rho, 2.0, 1.0),), (), _G11, _EXP)
    return 2.0 * c1 ** (-2.0 * rho) * fox_h_bivariate(spec, c1 ** -2, c2 / c1, diagnostics=diagnostics)


def asc_scenario1(cfg: ScenarioConfig) -> MetricResult:
    """Average secrecy capacity under RF eavesdropping, in bits/s/Hz.

    Expands ``(1 - F_t)(1 - F_d) F_es / (1 + gamma)`` over the finite sums of
    both RF CDFs; each term is one of the kernels ``X1`` (exponential only),
    ``X2`` (exponential and UOWC Meijer-G), ``X3`` (two exponentials) and
    ``X4`` (``X2`` with the combined exponential rate).
    """
    _require(cfg, Scenario.RF_EAVESDROP, "asc_scenario1")
    t, es, d = cfg.main_rf, cfg.eve_rf, cfg.main_uowc
    ut, ues = t.fitted.u, es.fitted.u
    ct, ces = t.c, es.c
    kd = d.k_d
    track = _Tracker()
    x3_cache: dict[int, float] = {}
    x4_cache: dict[int, float] = {}

    def x3(n):
        if n not in x3_cache:
            dg = Diagnostics()
            x3_cache[n] = _kernel(f"X3(n={n})", kernel_x3, n, ct, ces, diagnostics=dg)
            track.add(dg, x3_cache[n])
        return x3_cache[n]

    def x4(n):
        if n not in x4_cache:
            dg = Diagnostics()
            x4_cache[n] = _kernel(f"X4(n={n})", kernel_x2, d, n, ct + ces, diagnostics=dg)
            track.add(dg, kd * x4_cache[n])
        return x4_cache[n]

    total = 0.0
    for eta in range(ut):
        wt = math.exp(eta * math.log(ct) - special.gammaln(eta + 1.0))
        dg1, dg2 = Diagnostics(), Diagnostics()
        v1 = _kernel(f"X1(eta={eta})", kernel_x1, eta, ct, diagnostics=dg1)
        v2 = _kernel(f"X2(eta={eta})", kernel_x2, d, eta, ct, diagnostics=dg2)
        track.add(dg1, wt * v1)
        track.add(dg2, wt * kd * v2)
        inner = v1 - kd * v2
        for ee in range(ues):
            we = math.exp(ee * math.log(ces) - special.gammaln(ee + 1.0))
            inner -= we * (x3(eta + ee) - kd * x4(eta + ee))
        total += wt * inner
    value = total / LN2
    return MetricResult(max(value, 0.0), Method.CLOSED_FORM, track.error / LN2,
                        track.notes(), value, value < -1e-9)


# ---------------------------------------------------------------------------
# SOP pieces


def _rf_vs_rf_outage(main: RisRfLink, eve: RisRfLink, phi: float) -> float:
    """``P(gamma_t <= phi gamma_es)`` for two fitted RF links.

    ``c sqrt(gamma)`` is Gamma(u, 1) on both links, so the event compares two
    gamma variates and its probability is the regularized incomplete beta
    ``I_p(u_t, u_es)`` with ``p = c_t sqrt(phi) / (c_t sqrt(phi) + c_es)``.
    This equals the negative-binomial finite sum over ``G^{1,1}_{1,1}``
    kernels without its cancellation at high SNR.
    """
    k = main.c * math.sqrt(phi)
    p = k / (k + eve.c)
    return float(special.betainc(main.fitted.u, eve.fitted.u, p))


def _uowc_cross_spec(main: RisUowcLink, eve: RisUowcLink) -> tuple[FoxHSpec, float, float]:
    """Kernel, argument and prefactor of ``int F_d(phi g) f_er(g) dg``."""
    ud, rd = main.fitted.u, main.r
    uer, rer = eve.fitted.u, eve.r
    alpha = ud / rd + uer / rer
    upper = (GammaParamPair(1.0 - ud / rd, 1.0), GammaParamPair(1.0 - rer * alpha, float(rer)))
    lower = tuple(GammaParamPair(j / rd, 1.0) for j in range(rd)) + (GammaParamPair(-ud / rd, 1.0),)
    spec = FoxHSpec(rd, 2, upper, lower)
    xscale = main.kappa / eve.d ** rer
    pref = main.k_d * eve.m1 * eve.d ** (-rer * alpha)
    return spec, xscale, pref


def _uowc_vs_uowc_outage(main: RisUowcLink, eve: RisUowcLink, phi: float,
                         diagnostics: Diagnostics | None = None) -> float:
    """``P(gamma_d <= phi gamma_er)`` as a univariate Fox-H function.

    ``K phi^(u/r) M1_er d_er^(-r_er alpha) H^{r,2}_{2,r+1}[kappa phi / d_er^r_er | ...]``
    with ``alpha = u_d/r_d + u_er/r_er``.
    """
    spec, xscale, pref = _uowc_cross_spec(main, eve)
    ud, rd = main.fitted.u, main.r
    return pref * phi ** (ud / rd) * _kernel("UOWC cross term", fox_h, spec, xscale * phi,
                                             diagnostics=diagnostics)


def _r3_term(cfg: ScenarioConfig, eta: int, diagnostics: Diagnostics | None = None) -> float:
    """``int (C sqrt(g))^eta / eta! exp(-C sqrt(g)) F_d(phi g) f_es(g) dg``, ``C = c_t sqrt(phi)``.

    ``exp(-c_es sqrt(g))`` of the eavesdropper density and the UOWC Meijer-G
    CDF are the two Mellin-Barnes kernels; the remaining integral against
    ``exp(-C sqrt(g))`` yields joint parameter ``(1 - 2 rho; 1, 2)`` with
    ``rho = eta/2 + u_es/2 + u_d/r_d``.
    """
    t, es, d = cfg.main_rf, cfg.eve_rf, cfg.main_uowc
    phi = cfg.phi
    C = t.c * math.sqrt(phi)
    ud, rd, ues = d.fitted.u, d.r, es.fitted.u
    rho = eta / 2.0 + ues / 2.0 + ud / rd
    spec = BivariateFoxHSpec(1, (JointParam(1.0 - 2.0 * rho, 1.0, 2.0),), (), _EXP, ch.uowc_cdf_spec(d))
    log_pref = (eta * math.log(C) - special.gammaln(eta + 1.0)
                + ues * math.log(es.c) - special.gammaln(ues) + math.log(d.k_d)
                + (ud / rd) * math.log(phi) - 2.0 * rho * math.log(C))
    # 1/2 from the density and 2 from the gamma integral cancel
    floor = math.exp(math.log(PROB_ABS_FLOOR) - log_pref) if log_pref < 600 else 0.0
    h = fox_h_bivariate(spec, es.c / C, d.kappa * phi / (C * C), abs_floor=floor, diagnostics=diagnostics)
    return math.exp(log_pref) * h


def sop_scenario1(cfg: ScenarioConfig) -> MetricResult:
    """Lower-bound SOP under RF eavesdropping.

    ``SOP = P(gamma_t <= phi gamma_es) + sum_eta R3(eta)`` where the first
    part is the RF-versus-RF outage and ``R3`` collects the UOWC outage in
    the region where the RF hop is not in outage.
    """
    _require(cfg, Scenario.RF_EAVESDROP, "sop_scenario1")
    track = _Tracker()
    a = _rf_vs_rf_outage(cfg.main_rf, cfg.eve_rf, cfg.phi)
    total = a
    for eta in range(cfg.main_rf.fitted.u):
        dg = Diagnostics()
        term = _kernel(f"R3(eta={eta})", _r3_term, cfg, eta, diagnostics=dg)
        track.add(dg, term)
        total += term
    return _probability(total, Method.CLOSED_FORM, track.error, track.notes())


def sop_scenario2(cfg: ScenarioConfig) -> MetricResult:
    """Lower-bound SOP under UOWC eavesdropping.

    ``SOP = F_t(phi - 1) + (1 - F_t(phi - 1)) P(gamma_d <= phi gamma_er)``.
    At ``R0 = 0`` the RF term vanishes identically and is not evaluated.
    """
    _require(cfg, Scenario.UOWC_EAVESDROP, "sop_scenario2")
    phi = cfg.phi
    ft = 0.0 if phi == 1.0 else float(ch.rf_snr_cdf(cfg.main_rf, phi - 1.0))
    dg = Diagnostics()
    x = _uowc_vs_uowc_outage(cfg.main_uowc, cfg.eve_uowc, phi, diagnostics=dg)
    total = ft + (1.0 - ft) * x
    return _probability(total, Method.CLOSED_FORM, abs(x) * dg.error_estimate, [dg.summary()])


def sop3_components(cfg: ScenarioConfig, method: Method = Method.CLOSED_FORM) -> tuple[float, float]:
    """Probabilities ``(SOP_u, SOP_r)`` that the RF and the UOWC hop stay secure."""
    phi = cfg.phi
    if method is Method.CLOSED_FORM:
        sop_u = 1.0 - _rf_vs_rf_outage(cfg.main_rf, cfg.eve_rf, phi)
        sop_r = 1.0 - _uowc_vs_uowc_outage(cfg.main_uowc, cfg.eve_uowc, phi)
    elif method is Method.ASYMPTOTIC:
        sop_u = 1.0 - _moment_sum(ch.rf_cdf_leading_terms(cfg.main_rf), phi,
                                  lambda e: _rf_power_moment(cfg.eve_rf, e))
        sop_r = 1.0 - _moment_sum(ch.uowc_cdf_leading_terms(cfg.main_uowc), phi,
                                  lambda e: _uowc_power_moment(cfg.eve_uowc, e))
    else:
        sop_u = 1.0 - _oracle_outage(lambda g: ch.rf_snr_cdf(cfg.main_rf, phi * g), cfg.eve_rf)[0]
        sop_r = 1.0 - _oracle_outage(lambda g: ch.uowc_snr_cdf(cfg.main_uowc, phi * g), cfg.eve_uowc)[0]
    return sop_u, sop_r


def sop_scenario3(cfg: ScenarioConfig) -> MetricResult:
    """Lower-bound SOP with simultaneous RF and UOWC eavesdroppers, ``1 - SOP_u SOP_r``."""
    _require(cfg, Scenario.SIMULTANEOUS, "sop_scenario3")
    sop_u, sop_r = sop3_components(cfg, Method.CLOSED_FORM)
    return _probability(1.0 - sop_u * sop_r, Method.CLOSED_FORM, 0.0,
                        [f"SOP_u={sop_u:.6g} SOP_r={sop_r:.6g}"])


# ---------------------------------------------------------------------------
# asymptotics


def _rf_power_moment(link: RisRfLink, e: float) -> float:
    """``E[gamma^e] = Gamma(u + 2e) / (Gamma(u) c^(2e))`` for a fitted RF link."""
    u = link.fitted.u
    return math.exp(special.gammaln(u + 2.0 * e) - special.gammaln(u) - 2.0 * e * math.log(link.c))


def _uowc_power_moment(link: RisUowcLink, e: float) -> float:
    """``E[gamma^e] = Gamma(u + r e) / (Gamma(u) d^(r e))`` for a fitted UOWC link."""
    u, r = link.fitted.u, link.r
    return math.exp(special.gammaln(u + r * e) - special.gammaln(u) - r * e * math.log(link.d))


def _moment_sum(terms, phi, moment) -> float:
    return float(sum(coef * phi ** e * moment(e) for coef, e in terms))


def sop_scenario1_asymptotic(cfg: ScenarioConfig) -> MetricResult:
    """High main-link SNR asymptote of :func:`sop_scenario1`.

    Replaces ``F_eq`` by the leading residues of ``F_t`` and ``F_d`` and
    integrates each power law against the eavesdropper density in closed form.
    """
    _require(cfg, Scenario.RF_EAVESDROP, "sop_scenario1_asymptotic")
    terms = ch.rf_cdf_leading_terms(cfg.main_rf) + ch.uowc_cdf_leading_terms(cfg.main_uowc)
    value = _moment_sum(terms, cfg.phi, lambda e: _rf_power_moment(cfg.eve_rf, e))
    return _probability(value, Method.ASYMPTOTIC, 0.0, [f"{len(terms)} residue terms"])


def sop_scenario2_asymptotic(cfg: ScenarioConfig) -> MetricResult:
    """High main-link SNR asymptote of :func:`sop_scenario2`."""
    _require(cfg, Scenario.UOWC_EAVESDROP, "sop_scenario2_asymptotic")
    phi = cfg.phi
    ft = 0.0 if phi == 1.0 else float(ch._power_sum(ch.rf_cdf_leading_terms(cfg.main_rf), phi - 1.0))
    x = _moment_sum(ch.uowc_cdf_leading_terms(cfg.main_uowc), phi,
                    lambda e: _uowc_power_moment(cfg.eve_uowc, e))
    return _probability(ft + x, Method.ASYMPTOTIC, 0.0, [])


def sop_scenario3_asymptotic(cfg: ScenarioConfig) -> MetricResult:
    """High main-link SNR asymptote of :func:`sop_scenario3`."""
    _require(cfg, Scenario.SIMULTANEOUS, "sop_scenario3_asymptotic")
    sop_u, sop_r = sop3_components(cfg, Method.ASYMPTOTIC)
    return _probability(1.0 - sop_u * sop_r, Method.ASYMPTOTIC, 0.0,
                        [f"SOP_u={sop_u:.6g} SOP_r={sop_r:.6g}"])


# ---------------------------------------------------------------------------
# quadrature oracles


def _log_quad(fn, x_lo: float, x_hi: float, step: float = 4.0) -> tuple[float, float]:
    """``int fn(g) dg`` over ``g = e^x`` for ``x`` in ``[x_lo, x_hi]``, piecewise."""
    edges = np.arange(x_lo, x_hi + step, step)
    edges[-1] = max(edges[-1], x_hi)
    total, err = 0.0, 0.0
    h = lambda x: float(fn(math.exp(x))) * math.exp(x)
    with warnings.catch_warnings():
        # the returned error estimate carries the information quad would warn about
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            val, e = integrate.quad(h, a, b, limit=200, epsabs=0.0, epsrel=1e-10)
            total += val
            err += e
    return total, err


def _rf_upper(link: RisRfLink) -> float:
    u = link.fitted.u
    return 2.0 * math.log((u + 80.0 + 12.0 * math.sqrt(u)) / link.c)


def _uowc_upper(link: RisUowcLink) -> float:
    u = link.fitted.u
    return link.r * math.log((u + 80.0 + 12.0 * math.sqrt(u)) / link.d)


def _oracle_outage(cdf_of_scaled, eve) -> tuple[float, float]:
    """``int F(phi g) f_e(g) dg`` by quadrature over the eavesdropper density."""
    if isinstance(eve, RisRfLink):
        pdf, hi = (lambda g: ch.rf_snr_pdf(eve, g)), _rf_upper(eve)
    else:
        pdf, hi = (lambda g: ch.uowc_snr_pdf(eve, g)), _uowc_upper(eve)
    return _log_quad(lambda g: cdf_of_scaled(g) * pdf(g), -80.0, hi)


def asc_oracle(cfg: ScenarioConfig) -> MetricResult:
    """``int F_es(g) (1 - F_eq(g)) / (1 + g) dg`` by adaptive quadrature, in bits."""
    _require(cfg, Scenario.RF_EAVESDROP, "asc_oracle")
    t, d, es = cfg.main_rf, cfg.main_uowc, cfg.eve_rf

    def f(g):
        return ch.rf_snr_sf(t, g) * ch.uowc_snr_sf(d, g) * ch.rf_snr_cdf(es, g) / (1.0 + g)

    val, err = _log_quad(f, -80.0, min(_rf_upper(t), _uowc_upper(d)))
    return MetricResult(val / LN2, Method.QUADRATURE_ORACLE, err / LN2, ["quad"], val / LN2)


def sop_scenario1_oracle(cfg: ScenarioConfig) -> MetricResult:
    _require(cfg, Scenario.RF_EAVESDROP, "sop_scenario1_oracle")
    val, err = _oracle_outage(lambda g: ch.eq_cdf(cfg.main_rf, cfg.main_uowc, cfg.phi * g), cfg.eve_rf)
    return _probability(val, Method.QUADRATURE_ORACLE, err, ["quad"])


def sop_scenario2_oracle(cfg: ScenarioConfig) -> MetricResult:
    _require(cfg, Scenario.UOWC_EAVESDROP, "sop_scenario2_oracle")
    phi = cfg.phi
    ft = float(ch.rf_snr_cdf(cfg.main_rf, phi - 1.0))
    x, err = _oracle_outage(lambda g: ch.uowc_snr_cdf(cfg.main_uowc, phi * g), cfg.eve_uowc)
    return _probability(ft + (1.0 - ft) * x, Method.QUADRATURE_ORACLE, err, ["quad"])


def sop_scenario3_oracle(cfg: ScenarioConfig) -> MetricResult:
    _require(cfg, Scenario.SIMULTANEOUS, "sop_scenario3_oracle")
    sop_u, sop_r = sop3_components(cfg, Method.QUADRATURE_ORACLE)
    return _probability(1.0 - sop_u * sop_r, Method.QUADRATURE_ORACLE, 0.0,
                        [f"SOP_u={sop_u:.6g} SOP_r={sop_r:.6g}"])


# ---------------------------------------------------------------------------
# dispatch and derived metrics

_SOP = {
    Method.CLOSED_FORM: {Scenario.RF_EAVESDROP: sop_scenario1, Scenario.UOWC_EAVESDROP: sop_scenario2,
                         Scenario.SIMULTANEOUS: sop_scenario3},
    Method.ASYMPTOTIC: {Scenario.RF_EAVESDROP: sop_scenario1_asymptotic,
                        Scenario.UOWC_EAVESDROP: sop_scenario2_asymptotic,
                        Scenario.SIMULTANEOUS: sop_scenario3_asymptotic},
    Method.QUADRATURE_ORACLE: {Scenario.RF_EAVESDROP: sop_scenario1_oracle,
                               Scenario.UOWC_EAVESDROP: sop_scenario2_oracle,
                               Scenario.SIMULTANEOUS: sop_scenario3_oracle},
}


def sop(cfg: ScenarioConfig, method: Method = Method.CLOSED_FORM) -> MetricResult:
    """Lower-bound SOP of the configured scenario (``quantity = "sop_lower_bound"``)."""
    res = _SOP[Method(method)][cfg.scenario](cfg)
    res.quantity = "sop_lower_bound"
    return res


def sop_asymptotic(cfg: ScenarioConfig) -> MetricResult:
    return sop(cfg, Method.ASYMPTOTIC)


def sop_oracle(cfg: ScenarioConfig) -> MetricResult:
    return sop(cfg, Method.QUADRATURE_ORACLE)


def spsc(cfg: ScenarioConfig, method: Method = Method.CLOSED_FORM) -> MetricResult:
    """Probability of strictly positive secrecy capacity, ``1 - SOP(R0 = 0)``."""
    base = sop(cfg.with_r0(0.0), method)
    return MetricResult(1.0 - base.value, base.method, base.error_estimate, base.diagnostics,
                        1.0 - base.value, base.flagged, "spsc")


def est(cfg: ScenarioConfig, method: Method = Method.CLOSED_FORM) -> MetricResult:
    """Effective secrecy throughput ``R0 (1 - SOP)`` in bits/s/Hz."""
    base = sop(cfg, method)
    value = cfg.r0 * (1.0 - base.value)
    return MetricResult(value, base.method, cfg.r0 * base.error_estimate, base.diagnostics,
                        value, base.flagged, "est")


def asc(cfg: ScenarioConfig, method: Method = Method.CLOSED_FORM) -> MetricResult:
    """Average secrecy capacity; defined for the RF eavesdropping scenario only."""
    method = Method(method)
    if method is Method.ASYMPTOTIC:
        raise ValueError("ASC has no asymptotic form")
    res = asc_scenario1(cfg) if method is Method.CLOSED_FORM else asc_oracle(cfg)
    res.quantity = "asc"
    return res
