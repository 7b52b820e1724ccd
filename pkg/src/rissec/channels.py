"""Per-hop fading models, RIS cascade moments and end-to-end SNR laws.

An RIS link with ``N`` co-phased elements has amplitude ``S = sum_i X_i Y_i``
where ``X_i`` and ``Y_i`` are the source-side and receiver-side hop gains.
The sum is replaced by a gamma variate ``S ~ Gamma(u, v)`` whose mean and
variance match those of ``S`` (shape ``u = N E[M]^2 / Var(M)``, scale
``v = Var(M) / E[M]`` with ``M = X Y`` a single element product).

RF links (alpha-mu hops) map the amplitude to ``gamma = Omega S^2 / l``, so
``sqrt(gamma)`` is gamma distributed.  UOWC links (mixture EGG hops with
pointing error) map it to ``gamma = Omega_r (S / E[M])^r`` where ``r = 1``
is heterodyne detection and ``r = 2`` intensity modulation with direct
detection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import special

from .specfun import FoxHSpec, GammaParamPair, meijer_g

__all__ = [
    "AlphaMuHop",
    "EggHop",
    "RisRfLink",
    "RisUowcLink",
    "FittedGamma",
    "DegenerateFitError",
    "db_to_linear",
    "hop_moment_alpha_mu",
    "hop_moment_egg",
    "cascade_moment_rf",
    "cascade_moment_rf_lambda",
    "cascade_moment_uowc",
    "uowc_exponential_term",
    "fit_gamma",
    "rf_snr_pdf",
    "rf_snr_cdf",
    "rf_snr_cdf_sum",
    "rf_snr_sf",
    "uowc_snr_pdf",
    "uowc_snr_cdf",
    "uowc_snr_sf",
    "uowc_snr_cdf_meijer",
    "uowc_cdf_spec",
    "eq_cdf",
    "eq_cdf_asymptotic",
    "rf_cdf_leading_terms",
    "uowc_cdf_leading_terms",
]


class DegenerateFitError(ValueError):
    """Raised when a moment-matched fit is requested for a zero variance."""


def db_to_linear(db: float) -> float:
    """Convert a power ratio in dB to linear scale."""
    return 10.0 ** (float(db) / 10.0)


def _positive(name: str, value: float) -> None:
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class AlphaMuHop:
    """alpha-mu envelope: ``(R / phi)^alpha`` is Gamma(mu, 1/mu) distributed."""

    alpha: float = 2.0
    mu: float = 4.0
    phi: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "mu", "phi"):
            _positive(name, getattr(self, name))


@dataclass(frozen=True)
class EggHop:
    """Mixture exponential / generalized-gamma irradiance with pointing error.

    With probability ``omega`` the turbulence gain is exponential with mean
    ``lam``, otherwise it is ``b * G^(1/c)`` with ``G ~ Gamma(a, 1)``.  The
    pointing-error factor ``A * U^(1/xi^2)`` multiplies either branch.
    """

    omega: float
    lam: float
    a: float
    b: float
    c: float
    xi: float = 1.0
    A: float = 1.0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not 0.0 < self.omega < 1.0:
            raise ValueError(f"omega must lie in (0, 1), got {self.omega!r}")
        for key in ("lam", "a", "b", "c", "xi", "A"):
            _positive(key, getattr(self, key))


@dataclass(frozen=True)
class FittedGamma:
    """Moment-matched gamma law for the RIS amplitude sum."""

    u_raw: float
    u: int
    v: float
    mean: float
    var: float

    @property
    def rounding_error(self) -> float:
        return self.u - self.u_raw


@dataclass(frozen=True)
class RisRfLink:
    """Two alpha-mu hops bridged by an RIS with ``n_elements`` elements."""

    hop_s: AlphaMuHop = AlphaMuHop()
    hop_r: AlphaMuHop = AlphaMuHop()
    n_elements: int = 1
    path_loss: float = 1.0
    omega_db: float = 20.0

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ValueError(f"n_elements must be a positive integer, got {self.n_elements!r}")
        _positive("path_loss", self.path_loss)

    @property
    def omega(self) -> float:
        return db_to_linear(self.omega_db)

    @cached_property
    def fitted(self) -> FittedGamma:
        m1 = cascade_moment_rf(self, 1)
        m2 = cascade_moment_rf(self, 2)
        return fit_gamma(m1, m2 - m1 * m1, self.n_elements)

    @property
    def c(self) -> float:
        """Rate ``sqrt(l / (Omega v^2))`` so that ``c sqrt(gamma) ~ Gamma(u, 1)``."""
        return math.sqrt(self.path_loss / (self.omega * self.fitted.v ** 2))


@dataclass(frozen=True)
class RisUowcLink:
    """Two EGG hops bridged by an RIS, detected with ``r`` in {1, 2}."""

    hop_s: EggHop
    hop_r: EggHop
    n_elements: int = 1
    r: int = 1
    omega_r_db: float = 20.0

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ValueError(f"n_elements must be a positive integer, got {self.n_elements!r}")
        if self.r not in (1, 2):
            raise ValueError(f"detection r must be 1 (HD) or 2 (IM/DD), got {self.r!r}")

    @property
    def omega(self) -> float:
        return db_to_linear(self.omega_r_db)

    @cached_property
    def fitted(self) -> FittedGamma:
        m1 = cascade_moment_uowc(self, 1)
        m2 = cascade_moment_uowc(self, 2)
        return fit_gamma(m1, m2 - m1 * m1, self.n_elements)

    @property
    def d(self) -> float:
        """Rate ``E[M] / (v Omega_r^(1/r))`` so that ``d gamma^(1/r) ~ Gamma(u, 1)``."""
        f = self.fitted
        return f.mean / (f.v * self.omega ** (1.0 / self.r))

    @property
    def m1(self) -> float:
        """Density prefactor ``E^u / (Gamma(u) v^u Omega_r^(u/r))``."""
        u = self.fitted.u
        return math.exp(u * math.log(self.d) - special.gammaln(u))

    @property
    def kappa(self) -> float:
        """Argument scale ``E^r / (Omega_r (v r)^r)`` of the Meijer-G CDF."""
        return (self.d / self.r) ** self.r

    @property
    def k_d(self) -> float:
        """Prefactor ``M1 / (sqrt(r) (2 pi)^((r - 1) / 2))`` of the Meijer-G CDF."""
        return self.m1 / (math.sqrt(self.r) * (2.0 * math.pi) ** ((self.r - 1) / 2.0))


# ---------------------------------------------------------------------------
# moments


def hop_moment_alpha_mu(hop: AlphaMuHop, k: float) -> float:
    """``E[R^k] = phi^k Gamma(mu + k/alpha) / (mu^(k/alpha) Gamma(mu))``."""
    arg = hop.mu + k / hop.alpha
    if arg <= 0:
        raise ValueError(f"moment order {k} invalid for alpha-mu hop {hop}")
    return math.exp(k * math.log(hop.phi) + special.gammaln(arg)
                    - (k / hop.alpha) * math.log(hop.mu) - special.gammaln(hop.mu))


def hop_moment_egg(hop: EggHop, k: float) -> float:
    """k-th moment of one EGG hop including its pointing-error factor."""
    if k <= -min(hop.a * hop.c, 1.0, hop.xi ** 2):
        raise ValueError(f"moment order {k} invalid for EGG hop")
    expo = hop.lam ** k * special.gamma(k + 1.0)
    gg = hop.b ** k * math.exp(special.gammaln(hop.a + k / hop.c) - special.gammaln(hop.a))
    pointing = hop.A ** k * hop.xi ** 2 / (hop.xi ** 2 + k)
    return (hop.omega * expo + (1.0 - hop.omega) * gg) * pointing


def cascade_moment_rf(link: RisRfLink, k: int) -> float:
    """``E[M^k]`` of the single-element alpha-mu product ``M = X Y``.

    The hops are independent, so the moment factorises into the two
    single-hop moments.
    """
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    return hop_moment_alpha_mu(link.hop_s, k) * hop_moment_alpha_mu(link.hop_r, k)


def cascade_moment_rf_lambda(link: RisRfLink, k: int,
                             offsets: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)) -> float:
    """Product moment written through the four exponent constants lambda_1..4.

    This form coincides with :func:`cascade_moment_rf` when both hops have
    ``alpha = 2`` and departs from it otherwise.  ``offsets`` are added to
    the four constants, which gives a controlled corruption for negative
    control checks.

    Raises
    ------
    ValueError
        If a gamma argument is not positive.
    """
    s, r = link.hop_s, link.hop_r
    am_s, am_r = s.alpha * s.mu, r.alpha * r.mu
    diff = (am_s - am_r) / (2.0 * s.alpha)
    tot = (2.0 * k + am_s + am_r) / 4.0
    lam1 = s.mu - diff - tot + offsets[0]
    lam2 = r.mu + diff - tot + offsets[1]
    lam3 = (am_s - am_r) / 2.0 + s.alpha * tot - am_s + offsets[2]
    lam4 = r.alpha * tot - (am_s - am_r) / 2.0 - am_r + offsets[3]
    g1 = (am_s + am_r) / 4.0 + diff + k / 2.0
    g2 = (am_s + am_r) / 4.0 - diff + k / 2.0
    if g1 <= 0 or g2 <= 0:
        raise ValueError(f"gamma arguments {g1:g}, {g2:g} must be positive")
    log = (math.log(r.alpha / 2.0) + lam1 * math.log(s.mu) + lam2 * math.log(r.mu)
           + lam3 * math.log(s.phi) + lam4 * math.log(r.phi)
           - special.gammaln(s.mu) - special.gammaln(r.mu)
           + special.gammaln(g1) + special.gammaln(g2))
    return math.exp(log)


def uowc_exponential_term(link: RisUowcLink, k: int) -> float:
    """Exponential-exponential share of the EGG cascade moment.

    Written with the gamma-ratio constants ``R = (1, xi_r^2, 1, xi_s^2)``
    and ``Q = (xi_r^2 + 1, xi_s^2 + 1)``; it is the only surviving part of
    the moment in the pure-exponential limit.
    """
    s, r = link.hop_s, link.hop_r
    R = np.array([1.0, r.xi ** 2, 1.0, s.xi ** 2])
    Q = np.array([r.xi ** 2 + 1.0, s.xi ** 2 + 1.0])
    log = (k * math.log(s.A * r.A * s.lam * r.lam) + np.sum(special.gammaln(k + R))
           - np.sum(special.gammaln(k + Q)))
    return s.omega * r.omega * s.xi ** 2 * r.xi ** 2 * math.exp(log)


def cascade_moment_uowc(link: RisUowcLink, k: int) -> float:
    """``E[M^k]`` of the single-element EGG product including pointing error.

    Each hop is a two-component mixture, so the product moment expands into
    four exponential / generalized-gamma cross terms.
    """
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    return hop_moment_egg(link.hop_s, k) * hop_moment_egg(link.hop_r, k)


def fit_gamma(mean: float, var: float, n_elements: int) -> FittedGamma:
    """Match a gamma law to the sum of ``n_elements`` i.i.d. products.

    Examples
    --------
    >>> fit_gamma(1.0, 0.25, 4)
    FittedGamma(u_raw=16.0, u=16, v=0.25, mean=1.0, var=0.25)
    """
    if var == 0:
        raise DegenerateFitError("variance is zero; the gamma fit is degenerate")
    _positive("mean", mean)
    _positive("var", var)
    mean, var = float(mean), float(var)
    u_raw = n_elements * mean * mean / var
    return FittedGamma(u_raw=u_raw, u=max(1, int(round(u_raw))), v=var / mean, mean=mean, var=var)


# ---------------------------------------------------------------------------
# RF SNR law


def rf_snr_pdf(link: RisRfLink, gamma):
    """Density of ``gamma = Omega S^2 / l`` with ``S ~ Gamma(u, v)``."""
    g = np.asarray(gamma, dtype=float)
    u, c = link.fitted.u, link.c
    with np.errstate(divide="ignore", invalid="ignore"):
        sq = np.sqrt(g)
        logf = u * math.log(c) + (u / 2.0 - 1.0) * np.log(g) - c * sq - math.log(2.0) - special.gammaln(u)
        out = np.where(g > 0, np.exp(logf), 0.0 if u > 2 else (np.inf if u < 2 else c * c / 2.0))
    return out if out.ndim else float(out)


def rf_snr_cdf(link: RisRfLink, gamma):
    """CDF of the RF SNR, the regularized incomplete gamma ``P(u, c sqrt(gamma))``.

    This is the closed form of the finite sum
    ``1 - sum_{eta<u} (c sqrt(gamma))^eta exp(-c sqrt(gamma)) / eta!``.
    """
    g = np.clip(np.asarray(gamma, dtype=float), 0.0, None)
    out = special.gammainc(link.fitted.u, link.c * np.sqrt(g))
    return out if out.ndim else float(out)


def rf_snr_sf(link: RisRfLink, gamma):
    """Survival function ``1 - F(gamma)`` without cancellation."""
    g = np.clip(np.asarray(gamma, dtype=float), 0.0, None)
    out = special.gammaincc(link.fitted.u, link.c * np.sqrt(g))
    return out if out.ndim else float(out)


def rf_snr_cdf_sum(link: RisRfLink, gamma):
    """CDF written as the explicit finite sum over ``eta = 0 .. u - 1``."""
    g = np.clip(np.asarray(gamma, dtype=float), 0.0, None)
    z = link.c * np.sqrt(g)
    total = np.zeros_like(z)
    for eta in range(link.fitted.u):
        total = total + np.exp(eta * np.log(np.where(z > 0, z, 1.0)) - z - special.gammaln(eta + 1.0)) \
            * np.where((z > 0) | (eta == 0), 1.0, 0.0)
    out = 1.0 - total
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# UOWC SNR law


def uowc_snr_pdf(link: RisUowcLink, gamma):
    """Density of ``gamma = Omega_r (S / E[M])^r``."""
    g = np.asarray(gamma, dtype=float)
    u, r, d = link.fitted.u, link.r, link.d
    with np.errstate(divide="ignore", invalid="ignore"):
        logf = (math.log(link.m1 / r) + (u / r - 1.0) * np.log(g) - d * g ** (1.0 / r))
        zero_val = 0.0 if u > r else (np.inf if u < r else link.m1 / r)
        out = np.where(g > 0, np.exp(logf), zero_val)
    return out if out.ndim else float(out)


def uowc_snr_cdf(link: RisUowcLink, gamma):
    """CDF ``P(u, d gamma^(1/r))`` of the UOWC SNR."""
    g = np.clip(np.asarray(gamma, dtype=float), 0.0, None)
    out = special.gammainc(link.fitted.u, link.d * g ** (1.0 / link.r))
    return out if out.ndim else float(out)


def uowc_snr_sf(link: RisUowcLink, gamma):
    g = np.clip(np.asarray(gamma, dtype=float), 0.0, None)
    out = special.gammaincc(link.fitted.u, link.d * g ** (1.0 / link.r))
    return out if out.ndim else float(out)


def uowc_cdf_spec(link: RisUowcLink) -> FoxHSpec:
    """Meijer-G kernel ``G^{r,1}_{1,r+1}[. | 1 - u/r; 0, .., (r-1)/r, -u/r]``."""
    u, r = link.fitted.u, link.r
    return FoxHSpec.meijer(r, 1, [1.0 - u / r], [j / r for j in range(r)] + [-u / r])


def uowc_snr_cdf_meijer(link: RisUowcLink, gamma, **kwargs):
    """UOWC CDF evaluated through its Meijer-G representation.

    ``F(gamma) = K gamma^(u/r) G^{r,1}_{1,r+1}[kappa gamma | ...]``; agrees
    with :func:`uowc_snr_cdf` and exercises the Mellin-Barnes engine.
    """
    spec = uowc_cdf_spec(link)
    u, r = link.fitted.u, link.r
    g = np.atleast_1d(np.asarray(gamma, dtype=float))
    out = np.array([0.0 if x <= 0 else link.k_d * x ** (u / r) * meijer_g(spec, link.kappa * x, **kwargs)
                    for x in g])
    return out if np.ndim(gamma) else float(out[0])


# ---------------------------------------------------------------------------
# dual hop


def eq_cdf(rf: RisRfLink, uowc: RisUowcLink, gamma):
    """CDF of ``min(gamma_t, gamma_d)``: ``F_t + F_d - F_t F_d``.

    Evaluated as ``1 - (1 - F_t)(1 - F_d)`` from the survival functions,
    which avoids the cancellation of the expanded form near one.
    """
    return 1.0 - rf_snr_sf(rf, gamma) * uowc_snr_sf(uowc, gamma)


def rf_cdf_leading_terms(link: RisRfLink) -> list[tuple[float, float]]:
    """Leading power law of the RF CDF as ``[(coef, exponent)]``.

    ``P(u, z) ~ z^u / u!`` for small ``z = c sqrt(gamma)``.
    """
    u = link.fitted.u
    return [(math.exp(u * math.log(link.c) - special.gammaln(u + 1.0)), u / 2.0)]


def uowc_cdf_leading_terms(link: RisUowcLink) -> list[tuple[float, float]]:
    """First residue of every pole family of the Meijer-G CDF.

    The poles at ``s = j / r`` (``j = 0 .. r-1``) give
    ``K kappa^(j/r) prod_{i != j} Gamma((i - j)/r) Gamma(u/r + j/r) / Gamma(1 + u/r + j/r)``
    multiplying ``gamma^(u/r + j/r)``.  For ``r = 1`` a single term remains.
    """
    u, r = link.fitted.u, link.r
    b = [j / r for j in range(r)]
    terms = []
    for j, bj in enumerate(b):
        ratio = math.prod(special.gamma(bi - bj) for i, bi in enumerate(b) if i != j)
        log = (math.log(link.k_d) + bj * math.log(link.kappa)
               + special.gammaln(u / r + bj) - special.gammaln(1.0 + u / r + bj))
        terms.append((ratio * math.exp(log), u / r + bj))
    return terms


def _power_sum(terms, gamma):
    g = np.clip(np.asarray(gamma, dtype=float), 0.0, None)
    out = np.zeros_like(g)
    for coef, expo in terms:
        out = out + coef * g ** expo
    return out


def eq_cdf_asymptotic(rf: RisRfLink, uowc: RisUowcLink, gamma):
    """High-SNR expansion of :func:`eq_cdf` from the leading residues of both hops."""
    out = _power_sum(rf_cdf_leading_terms(rf), gamma) + _power_sum(uowc_cdf_leading_terms(uowc), gamma)
    return out if out.ndim else float(out)
