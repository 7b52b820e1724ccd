"""Monte-Carlo channel simulator used to validate the closed forms.

Draws are organised in fixed-size chunks.  Chunk ``k`` of stream
``(seed, stream_id)`` is generated by a Philox generator keyed by
``SeedSequence([seed, stream_id, k])``, so every variate depends only on its
position, never on how chunks are distributed over workers.  Per-chunk sums
are reduced in chunk order, which makes estimates bit-identical for any
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats

from . import channels as ch
from .channels import AlphaMuHop, EggHop, RisRfLink, RisUowcLink
from .metrics import Scenario, ScenarioConfig

__all__ = [
    "CHUNK_SIZE",
    "DEFAULT_SAMPLES",
    "RngStream",
    "McEstimate",
    "MomentRow",
    "MomentReport",
    "sample_alpha_mu",
    "sample_egg",
    "sample_ris_snr",
    "sample_snrs",
    "empirical_sop",
    "empirical_asc",
    "empirical_spsc",
    "empirical_est",
    "empirical_moments",
    "moment_check",
]

CHUNK_SIZE = 1 << 16
DEFAULT_SAMPLES = 1_000_000


@dataclass(frozen=True)
class RngStream:
    """Identifies a reproducible family of random variates."""

    seed: int = 0
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def generator(self, chunk: int = 0) -> np.random.Generator:
        ss = np.random.SeedSequence([int(self.seed), int(self.stream_id), int(chunk)])
        return np.random.Generator(np.random.Philox(ss))

    def substream(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)


@dataclass(frozen=True)
class McEstimate:
    """Sample estimate with its standard error."""

    mean: float
    std_error: float
    n_samples: int
    kind: str = "mean"

    def z_score(self, reference: float) -> float:
        """Standardised deviation from ``reference``.

        For probabilities this is the normal deviate equivalent to the
        mid-p tail of the exact binomial law at the reference value; it
        approaches ``(p_hat - p) / sqrt(p (1 - p) / n)`` when ``n p`` is large
        and keeps the nominal error rate when only a few events are expected.
        A mean-type estimate whose draws were all equal has no error
        estimate; its z-score is undetermined (``nan``) unless it equals the
        reference.
        """
        if self.kind == "probability":
            return _binomial_z(round(self.mean * self.n_samples), self.n_samples, reference)
        diff = self.mean - reference
        se = self.std_error
        if se == 0.0 and diff != 0.0:
            return math.nan
        if se == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / se

    def scaled(self, a: float, b: float = 0.0) -> "McEstimate":
        """Estimate of ``a X + b``."""
        return McEstimate(a * self.mean + b, abs(a) * self.std_error, self.n_samples, self.kind)


def _binomial_z(k: int, n: int, p: float) -> float:
    p = min(max(float(p), 0.0), 1.0)
    mid = 0.5 * stats.binom.pmf(k, n, p)
    if k >= n * p:
        upper = stats.binom.sf(k, n, p) + mid
        return math.inf if upper <= 0.0 else float(stats.norm.isf(upper))
    lower = stats.binom.cdf(k - 1, n, p) + mid
    return -math.inf if lower <= 0.0 else float(stats.norm.ppf(lower))


def _as_stream(rng) -> RngStream:
    if isinstance(rng, RngStream):
        return rng
    if rng is None:
        return RngStream()
    return RngStream(int(rng))


def _run_chunks(kernel: Callable[[np.random.Generator, int], np.ndarray], n: int,
                stream: RngStream, workers: int = 1) -> np.ndarray:
    """Column sums of ``kernel`` outputs over ``n`` draws, reduced in chunk order."""
    if n <= 0:
        raise ValueError("number of samples must be positive")
    sizes = [min(CHUNK_SIZE, n - k) for k in range(0, n, CHUNK_SIZE)]

    def one(k):
        return np.asarray(kernel(stream.generator(k), sizes[k]), dtype=float)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, range(len(sizes))))
    else:
        parts = [one(k) for k in range(len(sizes))]
    total = parts[0].copy()
    for p in parts[1:]:
        total += p
    return total


# ---------------------------------------------------------------------------
# variates


def sample_alpha_mu(hop: AlphaMuHop, rng: np.random.Generator, size=None):
    """alpha-mu envelope ``phi G^(1/alpha)`` with ``G ~ Gamma(mu, 1/mu)``."""
    return hop.phi * rng.gamma(hop.mu, 1.0 / hop.mu, size) ** (1.0 / hop.alpha)


def sample_egg(hop: EggHop, rng: np.random.Generator, size=None):
    """Mixture EGG irradiance times the pointing-error factor ``A U^(1/xi^2)``."""
    pick = rng.random(size) < hop.omega
    expo = rng.exponential(hop.lam, size)
    gg = hop.b * rng.gamma(hop.a, 1.0, size) ** (1.0 / hop.c)
    pointing = hop.A * rng.random(size) ** (1.0 / hop.xi ** 2)
    return np.where(pick, expo, gg) * pointing


def _amplitude(link, rng, size, fitted: bool):
    if fitted:
        f = link.fitted
        return rng.gamma(f.u, f.v, size)
    draw = sample_alpha_mu if isinstance(link, RisRfLink) else sample_egg
    shape = (link.n_elements,) + ((size,) if size is not None else ())
    return np.sum(draw(link.hop_s, rng, shape) * draw(link.hop_r, rng, shape), axis=0)


def sample_ris_snr(link, rng: np.random.Generator, fitted: bool = True, size=None):
    """Instantaneous SNR of an RIS link.

    RF: ``Omega S^2 / l``; UOWC: ``Omega_r (S / E[M])^r``.  ``S`` is the
    co-phased element sum (physical mode) or its moment-matched gamma law
    (fitted mode).
    """
    s = _amplitude(link, rng, size, fitted)
    if isinstance(link, RisRfLink):
        return link.omega * s * s / link.path_loss
    return link.omega * (s / link.fitted.mean) ** link.r


def sample_snrs(cfg: ScenarioConfig, rng: np.random.Generator, size: int, fitted: bool = True) -> dict:
    """Joint draw of every SNR the scenario involves."""
    out = {"t": sample_ris_snr(cfg.main_rf, rng, fitted, size),
           "d": sample_ris_snr(cfg.main_uowc, rng, fitted, size)}
    if cfg.eve_rf is not None:
        out["es"] = sample_ris_snr(cfg.eve_rf, rng, fitted, size)
    if cfg.eve_uowc is not None:
        out["er"] = sample_ris_snr(cfg.eve_uowc, rng, fitted, size)
    return out


def _outage(cfg: ScenarioConfig, g: dict, phi: float) -> np.ndarray:
    if cfg.scenario is Scenario.RF_EAVESDROP:
        return np.minimum(g["t"], g["d"]) <= phi * g["es"]
    if cfg.scenario is Scenario.UOWC_EAVESDROP:
        return (g["t"] <= phi - 1.0) | (g["d"] <= phi * g["er"])
    return (g["t"] <= phi * g["es"]) | (g["d"] <= phi * g["er"])


# ---------------------------------------------------------------------------
# estimators


def empirical_sop(cfg: ScenarioConfig, n: int = DEFAULT_SAMPLES, rng=None, fitted: bool = True,
                  workers: int = 1) -> McEstimate:
    """Fraction of draws in the scenario's outage event.

    Scenario I: ``min(gamma_t, gamma_d) <= phi gamma_es``; II:
    ``gamma_t <= phi - 1`` or ``gamma_d <= phi gamma_er``; III: either hop
    fails its own secrecy condition.
    """
    phi = cfg.phi

    def kernel(gen, size):
        return [np.count_nonzero(_outage(cfg, sample_snrs(cfg, gen, size, fitted), phi))]

    hits = _run_chunks(kernel, n, _as_stream(rng), workers)[0]
    p = hits / n
    return McEstimate(p, math.sqrt(p * (1.0 - p) / n), n, "probability")


def empirical_spsc(cfg: ScenarioConfig, n: int = DEFAULT_SAMPLES, rng=None, fitted: bool = True,
                   workers: int = 1) -> McEstimate:
    return empirical_sop(cfg.with_r0(0.0), n, rng, fitted, workers).scaled(-1.0, 1.0)


def empirical_est(cfg: ScenarioConfig, n: int = DEFAULT_SAMPLES, rng=None, fitted: bool = True,
                  workers: int = 1) -> McEstimate:
    est = empirical_sop(cfg, n, rng, fitted, workers).scaled(-cfg.r0, cfg.r0)
    return McEstimate(est.mean, est.std_error, est.n_samples, "mean")


def empirical_asc(cfg: ScenarioConfig, n: int = DEFAULT_SAMPLES, rng=None, fitted: bool = True,
                  workers: int = 1) -> McEstimate:
    """Mean of ``max(0, log2(1 + min(gamma_t, gamma_d)) - log2(1 + gamma_es))``."""
    if cfg.eve_rf is None:
        raise ValueError("ASC needs an RF eavesdropper link")

    def kernel(gen, size):
        g = sample_snrs(cfg, gen, size, fitted)
        cs = np.maximum(np.log2(1.0 + np.minimum(g["t"], g["d"])) - np.log2(1.0 + g["es"]), 0.0)
        return [cs.sum(), (cs * cs).sum()]

    s, s2 = _run_chunks(kernel, n, _as_stream(rng), workers)
    mean = s / n
    var = max(s2 / n - mean * mean, 0.0) * n / max(n - 1, 1)
    return McEstimate(mean, math.sqrt(var / n), n, "mean")


# ---------------------------------------------------------------------------
# moments


def empirical_moments(link, k_max: int, n: int = DEFAULT_SAMPLES, rng=None,
                      workers: int = 1) -> list[McEstimate]:
    """Sample moments ``E[M^k]``, ``k = 1..k_max``, of the single-element product."""
    draw = sample_alpha_mu if isinstance(link, RisRfLink) else sample_egg

    def kernel(gen, size):
        m = draw(link.hop_s, gen, size) * draw(link.hop_r, gen, size)
        out = []
        for k in range(1, k_max + 1):
            mk = m ** k
            out += [mk.sum(), (mk * mk).sum()]
        return out

    sums = _run_chunks(kernel, n, _as_stream(rng), workers)
    est = []
    for k in range(k_max):
        mean = sums[2 * k] / n
        var = max(sums[2 * k + 1] / n - mean * mean, 0.0) * n / max(n - 1, 1)
        est.append(McEstimate(mean, math.sqrt(var / n), n))
    return est


@dataclass(frozen=True)
class MomentRow:
    k: int
    analytic: float
    sampled: float
    std_error: float
    z: float


@dataclass(frozen=True)
class MomentReport:
    rows: tuple[MomentRow, ...]

    def passed(self, threshold: float = 3.0) -> bool:
        return all(abs(r.z) <= threshold for r in self.rows)

    def format(self) -> str:
        lines = ["k,analytic,sampled,std_error,z"]
        lines += [f"{r.k},{r.analytic:.10g},{r.sampled:.10g},{r.std_error:.4g},{r.z:.3f}" for r in self.rows]
        return "\n".join(lines)


def moment_check(link, k_max: int = 3, n: int = DEFAULT_SAMPLES, rng=None,
                 moment: Callable | None = None, workers: int = 1) -> MomentReport:
    """Compare analytic cascade moments with sampled ones.

    ``moment(link, k)`` defaults to the exact product moment of the link
    type; any other function (for example a deliberately corrupted one) can
    be supplied.  The ``k = 0`` row is exact for a normalised moment, so any
    other value there is flagged with an infinite z-score.
    """
    if moment is None:
        moment = ch.cascade_moment_rf if isinstance(link, RisRfLink) else ch.cascade_moment_uowc
    a0 = float(moment(link, 0))
    z0 = 0.0 if a0 == 1.0 else math.copysign(math.inf, 1.0 - a0)
    rows = [MomentRow(0, a0, 1.0, 0.0, z0)]
    for k, e in enumerate(empirical_moments(link, k_max, n, rng, workers), start=1):
        a = float(moment(link, k))
        rows.append(MomentRow(k, a, e.mean, e.std_error, e.z_score(a)))
    return MomentReport(tuple(rows))
