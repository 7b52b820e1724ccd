"""Mellin-Barnes evaluation of Meijer G, Fox H and bivariate Fox H functions.

Conventions
-----------
The univariate H-function is

    H^{m,n}_{p,q}[x | (a_j, A_j); (b_j, B_j)] = 1/(2 pi i) \\int theta(s) x^s ds

    theta(s) = prod_{j<=m} Gamma(b_j - B_j s) prod_{j<=n} Gamma(1 - a_j + A_j s)
               / ( prod_{j>m} Gamma(1 - b_j + B_j s) prod_{j>n} Gamma(a_j - A_j s) )

with the vertical contour Re(s) = c separating the poles of the two numerator
families.  Meijer's G is the special case with all scales equal to one.

The bivariate H-function follows the Mittal-Gupta convention

    H[x, y] = 1/(2 pi i)^2 \\iint phi(s, t) theta_1(s) theta_2(t) x^s y^t ds dt

where ``phi`` is built from joint parameters ``(a; A, B)``: the first ``n``
upper ones contribute ``Gamma(1 - a + A s + B t)`` to the numerator, the
remaining upper ones ``Gamma(a - A s - B t)`` to the denominator and all lower
ones ``Gamma(1 - b + A s + B t)`` to the denominator.

All parameters are real and arguments positive, so the integrand at
``conj(s)`` is the conjugate of the integrand at ``s`` and only half of each
contour needs to be integrated.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

import mpmath
import numpy as np
from scipy import optimize, special

__all__ = [
    "GammaParamPair",
    "FoxHSpec",
    "JointParam",
    "BivariateFoxHSpec",
    "Diagnostics",
    "SpecfunError",
    "PoleError",
    "ContourError",
    "ConvergenceError",
    "PoleCollisionWarning",
    "log_gamma_complex",
    "meijer_g",
    "fox_h",
    "fox_h_bivariate",
    "residue_series",
    "leading_residues",
    "DEFAULT_WINDOW",
]

DEFAULT_WINDOW = (1e-8, 1e8)

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


class SpecfunError(ArithmeticError):
    """Base class for special-function evaluation failures."""


class PoleError(SpecfunError, ValueError):
    """Raised when the gamma function is evaluated at one of its poles."""


class ContourError(SpecfunError):
    """Raised when no straight contour separates the pole families."""


class ConvergenceError(SpecfunError):
    """Raised when a truncated integral or series fails to converge.

    The best estimate and its error estimate are kept on the exception.
    """

    def __init__(self, message: str, estimate: float = math.nan, error: float = math.inf):
        super().__init__(f"{message} (estimate={estimate:.6g}, error~{error:.3g})")
        self.estimate = estimate
        self.error = error


class PoleCollisionWarning(UserWarning):
    """Two residue families nearly coincide; a parameter was perturbed."""


@dataclass(frozen=True)
class GammaParamPair:
    """An ``(a, A)`` entry of an H-function parameter list."""

    a: float
    A: float = 1.0

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError(f"scale must be positive, got {self.A}")


@dataclass(frozen=True)
class FoxHSpec:
    """Orders and parameter lists of a univariate H-function."""

    m: int
    n: int
    upper: tuple[GammaParamPair, ...] = ()
    lower: tuple[GammaParamPair, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(_as_pair(x) for x in self.upper))
        object.__setattr__(self, "lower", tuple(_as_pair(x) for x in self.lower))
        if not (0 <= self.m <= len(self.lower) and 0 <= self.n <= len(self.upper)):
            raise ValueError(
                f"invalid orders m={self.m}, n={self.n} for p={len(self.upper)}, q={len(self.lower)}"
            )

    @classmethod
    def meijer(cls, m: int, n: int, a: Sequence[float] = (), b: Sequence[float] = ()) -> "FoxHSpec":
        """Build the parameter set of ``G^{m,n}_{p,q}[x | a; b]``."""
        return cls(m, n, tuple(GammaParamPair(float(x)) for x in a),
                   tuple(GammaParamPair(float(x)) for x in b))

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    @property
    def is_meijer(self) -> bool:
        return all(x.A == 1.0 for x in self.upper + self.lower)

    def strip(self) -> tuple[float, float]:
        """Open interval of admissible contour abscissae ``(lo, hi)``."""
        lo = max(((x.a - 1.0) / x.A for x in self.upper[: self.n]), default=-math.inf)
        hi = min((x.a / x.A for x in self.lower[: self.m]), default=math.inf)
        return lo, hi

    def log_kernel(self, s: np.ndarray) -> np.ndarray:
        """Complex log of the Mellin kernel ``theta(s)``."""
        s = np.asarray(s, dtype=complex)
        out = np.zeros_like(s)
        for j, x in enumerate(self.lower):
            if j < self.m:
                out += special.loggamma(x.a - x.A * s)
            else:
                out -= special.loggamma(1.0 - x.a + x.A * s)
        for j, x in enumerate(self.upper):
            if j < self.n:
                out += special.loggamma(1.0 - x.a + x.A * s)
            else:
                out -= special.loggamma(x.a - x.A * s)
        return out

    def decay_rate(self) -> float:
        """Exponential decay rate (in units of pi/2) of ``|theta(c + i tau)|``."""
        num = sum(x.A for x in self.lower[: self.m]) + sum(x.A for x in self.upper[: self.n])
        den = sum(x.A for x in self.lower[self.m:]) + sum(x.A for x in self.upper[self.n:])
        return num - den


@dataclass(frozen=True)
class JointParam:
    """A joint ``(a; A, B)`` entry coupling both Mellin variables."""

    a: float
    A: float
    B: float


@dataclass(frozen=True)
class BivariateFoxHSpec:
    """Parameters of the bivariate H-function ``H[x, y]``."""

    n: int
    upper: tuple[JointParam, ...]
    lower: tuple[JointParam, ...]
    kernel1: FoxHSpec
    kernel2: FoxHSpec

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(self.upper))
        object.__setattr__(self, "lower", tuple(self.lower))
        if not 0 <= self.n <= len(self.upper):
            raise ValueError(f"invalid joint order n={self.n}")

    def log_joint(self, s: np.ndarray, t: np.ndarray) -> np.ndarray:
        out = np.zeros(np.broadcast(s, t).shape, dtype=complex)
        for j, x in enumerate(self.upper):
            if j < self.n:
                out += special.loggamma(1.0 - x.a + x.A * s + x.B * t)
            else:
                out -= special.loggamma(x.a - x.A * s - x.B * t)
        for x in self.lower:
            out -= special.loggamma(1.0 - x.a + x.A * s + x.B * t)
        return out


@dataclass
class Diagnostics:
    """How a value was obtained: contour, truncation, panels and error."""

    method: str = "quadrature"
    contour: tuple[float, ...] = ()
    truncation: tuple[float, ...] = ()
    panels: int = 0
    nodes: int = 0
    error_estimate: float = 0.0
    notes: list[str] = field(default_factory=list)

    def summary(self) -> str:
        parts = [self.method]
        if self.contour:
            parts.append("c=" + ",".join(f"{c:.3g}" for c in self.contour))
        if self.truncation:
            parts.append("T=" + ",".join(f"{t:.3g}" for t in self.truncation))
        parts.append(f"err={self.error_estimate:.2g}")
        parts.extend(self.notes)
        return " ".join(parts)


def _as_pair(x) -> GammaParamPair:
    if isinstance(x, GammaParamPair):
        return x
    if isinstance(x, (tuple, list)):
        return GammaParamPair(float(x[0]), float(x[1]))
    return GammaParamPair(float(x))


def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = ((x + 1.0) / 2.0, w / 2.0)
    return _GL_CACHE[n]


def log_gamma_complex(z) -> complex:
    """Principal branch of ``log Gamma(z)`` for complex ``z``.

    Raises
    ------
    PoleError
        If ``z`` is zero or a negative integer.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"log-gamma pole at z={z.real:g}")
    return complex(special.loggamma(z))


def _panel_nodes(T: float, width: float, first: float, order: int, symmetric: bool):
    """Gauss-Legendre nodes on [0, T] (or [-T, T]) graded towards zero."""
    edges = [0.0]
    h = min(first, width)
    while edges[-1] < T:
        edges.append(min(T, edges[-1] + h))
        h = min(width, 2.0 * h)
    edges = np.asarray(edges)
    x, w = _gauss_legendre(order)
    lengths = np.diff(edges)
    nodes = (edges[:-1, None] + lengths[:, None] * x[None, :]).ravel()
    weights = (lengths[:, None] * w[None, :]).ravel()
    if symmetric:
        nodes = np.concatenate([-nodes[::-1], nodes])
        weights = np.concatenate([weights[::-1], weights])
    return nodes, weights, len(lengths)


def _choose_contour_1d(spec: FoxHSpec, logx: float) -> tuple[float, float]:
    """Pick the abscissa minimising the integrand magnitude inside the strip.

    Returns the abscissa and its distance to the nearest pole family.
    """
    lo, hi = spec.strip()
    if not lo < hi:
        raise ContourError(f"pole families interleave: strip ({lo:g}, {hi:g}) is empty")
    if math.isinf(lo) and math.isinf(hi):
        lo, hi = -60.0, 60.0
        margin = 0.0
    else:
        width = hi - lo
        margin = 0.5 if math.isinf(width) else min(0.5, 0.3 * width)
        span = 20.0 + 4.0 * abs(logx)
        if math.isinf(lo):
            lo = hi - span
        if math.isinf(hi):
            hi = lo + span
    a, b = lo + margin, hi - margin
    if a >= b:
        c = 0.5 * (lo + hi)
    else:
        def objective(c):
            return float(np.real(spec.log_kernel(np.array([c + 0.5j]))[0])) + c * logx

        res = optimize.minimize_scalar(objective, bounds=(a, b), method="bounded",
                                       options={"xatol": 1e-3})
        c = float(res.x)
    lo0, hi0 = spec.strip()
    dist = min(c - lo0, hi0 - c)
    return c, dist


def _tail_extent(logf, tol: float, start: float, limit: float) -> float:
    """Smallest tau beyond which ``logf(tau) - peak < log(tol)`` (coarse scan)."""
    taus = np.concatenate([np.linspace(0.0, 4.0, 9), np.arange(5.0, limit + 1.0, 1.0)])
    vals = logf(taus)
    peak = np.max(vals)
    below = np.nonzero(vals < peak + math.log(tol))[0]
    # last crossing from above
    above = np.nonzero(vals >= peak + math.log(tol))[0]
    if len(above) == 0:
        return start
    last = taus[above[-1]]
    return max(start, last + 2.0) if len(below) else limit


def fox_h(spec: FoxHSpec, x: float, *, tol: float = 1e-10, window=DEFAULT_WINDOW,
          order: int = 20, max_T: float = 2048.0, diagnostics: Diagnostics | None = None) -> float:
    """Evaluate a univariate H-function at ``x > 0``.

    Inside ``window`` the Mellin-Barnes integral is computed by Gauss-Legendre
    panels on a truncated vertical contour whose height is doubled until the
    tail estimate drops below ``tol``.  Outside the window the residue series
    on the appropriate side is used when it exists.

    Raises
    ------
    ContourError
        If the numerator pole families cannot be separated by a straight line.
    ConvergenceError
        If neither the truncation nor the series settles to ``tol``.
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"argument must be positive, got {x}")
    diag = diagnostics if diagnostics is not None else Diagnostics()
    if x < window[0] or x > window[1]:
        side = "small" if x < window[0] else "large"
        try:
            return residue_series(spec, x, side=side, tol=tol, diagnostics=diag)
        except ConvergenceError as exc:
            diag.notes.append(f"residue fallback failed: {exc}")
    return _fox_h_quadrature(spec, x, tol, order, max_T, diag)


def _fox_h_quadrature(spec, x, tol, order, max_T, diag):
    logx = math.log(x)
    c, dist = _choose_contour_1d(spec, logx)

    def logf(tau):
        s = c + 1j * np.asarray(tau, dtype=float)
        return spec.log_kernel(s) + s * logx

    mag = lambda tau: np.real(logf(tau))
    T = _tail_extent(mag, tol * 1e-3, 8.0, 400.0)
    width = min(1.0, 6.0 / (1.0 + abs(logx) / 2.0))
    first = max(min(width, 2.0 * dist), 1e-3)
    # the kernels used here have nonnegative decay rates; a zero rate still
    # converges for the x ranges the channel formulas generate
    while True:
        nodes, weights, npan = _panel_nodes(T, width, first, order, symmetric=False)
        vals = np.exp(logf(nodes))
        value = float(np.sum(weights * vals.real)) / math.pi
        coarse_nodes, coarse_w, _ = _panel_nodes(T, width, first, max(order // 2 + 2, 8), symmetric=False)
        coarse = float(np.sum(coarse_w * np.exp(logf(coarse_nodes)).real)) / math.pi
        tail = float(np.max(np.abs(vals[-order:]))) * 2.0 / math.pi
        err = abs(value - coarse) + tail
        scale = max(abs(value), 1e-300)
        if err <= tol * scale or T >= max_T:
            break
        if tail <= tol * scale:
            # truncation fine, resolution is not: refine the panels
            width /= 2.0
            first /= 2.0
            if width < 1e-3:
                break
        else:
            T *= 2.0
    diag.method = "quadrature"
    diag.contour = (c,)
    diag.truncation = (T,)
    diag.panels = npan
    diag.nodes = len(nodes)
    diag.error_estimate = err / scale
    if err > max(tol, 1e-6) * scale and err > 1e-280:
        raise ConvergenceError("Mellin-Barnes quadrature did not settle", value, err / scale)
    return value


def meijer_g(spec: FoxHSpec, x: float, **kwargs) -> float:
    """Evaluate ``G^{m,n}_{p,q}[x | a; b]``; see :func:`fox_h` for keywords."""
    if not spec.is_meijer:
        raise ValueError("meijer_g requires unit scales; use fox_h")
    return fox_h(spec, x, **kwargs)


# ---------------------------------------------------------------------------
# residue expansions


def _pole_families(spec: FoxHSpec, side: str):
    """(index, start, spacing, scale) for the poles closed over on ``side``."""
    if side == "small":
        return [(j, p.a / p.A, 1.0 / p.A, p.A) for j, p in enumerate(spec.lower[: spec.m])]
    return [(j, (p.a - 1.0) / p.A, -1.0 / p.A, p.A) for j, p in enumerate(spec.upper[: spec.n])]


def _separate_families(spec: FoxHSpec, side: str, depth: int) -> dict[int, float]:
    """Offsets that split pole ladders coinciding within ``depth`` steps.

    The result maps a parameter index on ``side`` to the shift of its offset
    (``1e-9`` times the family rank).  A warning is issued when it is nonempty.
    """
    fams = _pole_families(spec, side)
    starts = [f[1] for f in fams]
    offsets: dict[int, float] = {}
    for i in range(len(fams)):
        for k in range(i):
            ladder_i = starts[i] + fams[i][2] * np.arange(depth)
            ladder_k = starts[k] + fams[k][2] * np.arange(depth)
            if np.min(np.abs(ladder_i[:, None] - ladder_k[None, :])) < 1e-7:
                j = fams[i][0]
                offsets[j] = 1e-9 * (i + 1)
                starts[i] += offsets[j] / fams[i][3]
    if offsets:
        warnings.warn("coincident residue families; perturbed a parameter by 1e-9",
                      PoleCollisionWarning, stacklevel=3)
    return offsets


def _residue_series_mp(spec: FoxHSpec, offsets: dict[int, float], x: float, side: str,
                       tol: float, max_terms: int, terms: int | None):
    """Residue sum with perturbed offsets, carried out in 40-digit arithmetic.

    Residues of nearly coincident poles are of size ``1/delta`` and cancel to
    an O(1) result, far beyond double precision for ``delta = 1e-9``.
    """
    mp = mpmath.mp
    with mpmath.workdps(40):
        delta = {j: mpmath.mpf(d) for j, d in offsets.items()}
        lower = [(mpmath.mpf(p.a) + (delta.get(j, 0) if side == "small" else 0), mpmath.mpf(p.A))
                 for j, p in enumerate(spec.lower)]
        upper = [(mpmath.mpf(p.a) + (delta.get(j, 0) if side == "large" else 0), mpmath.mpf(p.A))
                 for j, p in enumerate(spec.upper)]
        if side == "small":
            fams = [(j, b / B, 1 / B, B) for j, (b, B) in enumerate(lower[: spec.m])]
        else:
            fams = [(j, (a - 1) / A, -1 / A, A) for j, (a, A) in enumerate(upper[: spec.n])]
        logx = mpmath.log(mpmath.mpf(x))

        def theta_excluding(s, skip):
            val = mpmath.mpf(1)
            for j, (b, B) in enumerate(lower):
                if j < spec.m:
                    if not (side == "small" and j == skip):
                        val *= mp.gamma(b - B * s)
                else:
                    val *= mp.rgamma(1 - b + B * s)
            for j, (a, A) in enumerate(upper):
                if j < spec.n:
                    if not (side == "large" and j == skip):
                        val *= mp.gamma(1 - a + A * s)
                else:
                    val *= mp.rgamma(a - A * s)
            return val

        total = mpmath.mpf(0)
        k = 0
        quiet = 0
        last = mpmath.inf
        chunk = 20 if terms is None else terms
        while True:
            block_max = mpmath.mpf(0)
            for kk in range(k, k + chunk):
                for j, start, step, scale in fams:
                    s = start + step * kk
                    term = (-1) ** kk / (mp.factorial(kk) * scale) * theta_excluding(s, j) * mpmath.exp(s * logx)
                    total += term
                    block_max = max(block_max, abs(term))
            k += chunk
            if terms is not None:
                break
            if block_max <= tol * abs(total):
                quiet += 1
                if quiet >= 2:
                    break
            else:
                quiet = 0
            if k >= max_terms:
                raise ConvergenceError("residue series not converged", float(total),
                                       float(block_max / max(abs(total), mpmath.mpf(1e-300))))
            last = block_max
        err = 0.0 if terms is not None else float(last / max(abs(total), mpmath.mpf(1e-300)))
        return float(total), k, err


def _real_log_kernel_excluding(spec: FoxHSpec, s: np.ndarray, side: str, skip: int):
    """log|theta(s)| and sign of theta(s) with one numerator factor removed."""
    logmag = np.zeros_like(s)
    sign = np.ones_like(s)

    def add(z, power):
        nonlocal logmag, sign
        logmag = logmag + power * special.gammaln(z)
        sign = sign * special.gammasgn(z)

    def add_reciprocal(z):
        nonlocal logmag, sign
        rg = special.rgamma(z)
        zero = rg == 0.0
        logmag = np.where(zero, -np.inf, logmag - special.gammaln(np.where(zero, 0.5, z)))
        sign = sign * np.where(zero, 0.0, np.sign(rg))

    for j, p in enumerate(spec.lower):
        if j < spec.m:
            if not (side == "small" and j == skip):
                add(p.a - p.A * s, 1.0)
        else:
            add_reciprocal(1.0 - p.a + p.A * s)
    for j, p in enumerate(spec.upper):
        if j < spec.n:
            if not (side == "large" and j == skip):
                add(1.0 - p.a + p.A * s, 1.0)
        else:
            add_reciprocal(p.a - p.A * s)
    return logmag, sign


def residue_series(spec: FoxHSpec, x: float, *, side: str = "small", tol: float = 1e-12,
                   max_terms: int = 400, terms: int | None = None,
                   diagnostics: Diagnostics | None = None) -> float:
    """Sum the residues of the Mellin-Barnes integrand.

    ``side="small"`` closes the contour to the right (poles of the
    ``Gamma(b_j - B_j s)`` factors, a convergent expansion for small ``x``);
    ``side="large"`` closes it to the left.  With ``terms`` given, exactly
    that many residues per family are kept and no convergence test is made,
    which yields the truncated asymptotic expansion.
    """
    x = float(x)
    fams = _pole_families(spec, side)
    if not fams:
        raise ConvergenceError(f"no poles to close over on the {side} side")
    depth = terms if terms is not None else max_terms
    offsets = _separate_families(spec, side, min(depth, 60))
    if offsets:
        total, k0, err = _residue_series_mp(spec, offsets, x, side, tol, max_terms, terms)
        if diagnostics is not None:
            diagnostics.method = f"residue-{side}"
            diagnostics.truncation = (float(k0),)
            diagnostics.error_estimate = err
            diagnostics.notes.append("pole collision resolved at 40 digits")
        return total
    logx = math.log(x)
    total = 0.0
    last = np.inf
    k0 = 0
    chunk = 20 if terms is None else terms
    quiet = 0
    while True:
        k = np.arange(k0, k0 + chunk, dtype=float)
        block = 0.0
        block_max = 0.0
        for j, start, step, scale in fams:
            s = start + step * k
            logmag, sign = _real_log_kernel_excluding(spec, s, side, j)
            lt = logmag + s * logx - special.gammaln(k + 1.0) - math.log(scale)
            with np.errstate(over="ignore", invalid="ignore"):
                vals = sign * (-1.0) ** k * np.exp(lt)
            vals = np.where(sign == 0.0, 0.0, vals)
            block += float(np.sum(vals))
            block_max = max(block_max, float(np.max(np.abs(vals))) if len(vals) else 0.0)
        total += block
        k0 += chunk
        if terms is not None:
            break
        if not math.isfinite(total):
            raise ConvergenceError("residue series overflowed", total, math.inf)
        if block_max <= tol * abs(total):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
        if k0 >= max_terms:
            raise ConvergenceError("residue series not converged", total, block_max / max(abs(total), 1e-300))
        last = block_max
    if diagnostics is not None:
        diagnostics.method = f"residue-{side}"
        diagnostics.truncation = (float(k0),)
        diagnostics.error_estimate = 0.0 if terms is not None else float(last) / max(abs(total), 1e-300)
    return total


def leading_residues(spec: FoxHSpec, x: float, side: str = "small") -> float:
    """Keep only the first residue of every pole family on ``side``.

    This is the leading high-SNR (small argument) expansion used by the
    asymptotic formulas.
    """
    return residue_series(spec, x, side=side, terms=1)


# ---------------------------------------------------------------------------
# bivariate H


def _bivariate_constraints(spec: BivariateFoxHSpec):
    """Linear constraints ``G @ c < h`` describing the admissible contours."""
    rows, rhs = [], []
    lo1, hi1 = spec.kernel1.strip()
    lo2, hi2 = spec.kernel2.strip()
    if not (lo1 < hi1 and lo2 < hi2):
        raise ContourError("an inner kernel has no admissible strip")
    if math.isfinite(hi1):
        rows.append([1.0, 0.0]); rhs.append(hi1)
    if math.isfinite(lo1):
        rows.append([-1.0, 0.0]); rhs.append(-lo1)
    if math.isfinite(hi2):
        rows.append([0.0, 1.0]); rhs.append(hi2)
    if math.isfinite(lo2):
        rows.append([0.0, -1.0]); rhs.append(-lo2)
    for x in spec.upper[: spec.n]:
        # 1 - a + A c1 + B c2 > 0
        rows.append([-x.A, -x.B]); rhs.append(1.0 - x.a)
    return np.asarray(rows, dtype=float).reshape(-1, 2), np.asarray(rhs, dtype=float)


def _choose_contour_2d(spec: BivariateFoxHSpec, logx: float, logy: float):
    G, h = _bivariate_constraints(spec)
    norms = np.linalg.norm(G, axis=1)
    box = 40.0 + 4.0 * max(abs(logx), abs(logy))
    # Chebyshev centre of the (boxed) feasible polygon
    Gb = np.vstack([G, np.eye(2), -np.eye(2)])
    hb = np.concatenate([h, [box, box, box, box]])
    nb = np.linalg.norm(Gb, axis=1)
    lp = optimize.linprog([0.0, 0.0, -1.0], A_ub=np.hstack([Gb, nb[:, None]]), b_ub=hb,
                          bounds=[(None, None), (None, None), (0.0, None)], method="highs")
    if lp.status != 0 or lp.x[2] <= 0.0:
        raise ContourError("no double contour separates the pole families")
    centre, radius = lp.x[:2], lp.x[2]
    margin = min(0.5, 0.6 * radius)

    def objective(c):
        s = np.array([c[0] + 0.5j])
        t = np.array([c[1] + 0.5j])
        val = spec.log_joint(s, t) + spec.kernel1.log_kernel(s) + spec.kernel2.log_kernel(t)
        return float(np.real(val[0])) + c[0] * logx + c[1] * logy

    cons = {"type": "ineq", "fun": lambda c: hb - Gb @ c - margin * nb}
    res = optimize.minimize(objective, centre, method="SLSQP", constraints=[cons],
                            options={"maxiter": 200, "ftol": 1e-6})
    c = res.x if res.success and np.all(hb - Gb @ res.x - margin * nb > -1e-9) else centre
    slack = (h - G @ c) / norms if len(h) else np.array([margin])
    return c, float(np.min(slack)) if len(slack) else margin


def fox_h_bivariate(spec: BivariateFoxHSpec, x: float, y: float, *, tol: float = 1e-7,
                    order: int = 16, max_T: float = 512.0, abs_floor: float = 0.0,
                    diagnostics: Diagnostics | None = None) -> float:
    """Evaluate the bivariate H-function ``H[x, y]`` for ``x, y > 0``.

    The double Mellin-Barnes integral is computed on a tensor grid of
    Gauss-Legendre panels over the truncated rectangle ``|Im s| <= T1``,
    ``0 <= Im t <= T2``; both heights are doubled until the integrand on the
    rectangle's outer edges is below ``tol`` relative to the value.

    A result whose absolute error estimate is below ``abs_floor`` is
    accepted even when the relative target is missed; callers use this for
    terms too small to matter after their prefactor is applied.
    """
    x, y = float(x), float(y)
    if not (x > 0.0 and y > 0.0):
        raise ValueError("arguments must be positive")
    diag = diagnostics if diagnostics is not None else Diagnostics()
    logx, logy = math.log(x), math.log(y)
    (c1, c2), dist = _choose_contour_2d(spec, logx, logy)

    def logf(t1, t2):
        s = c1 + 1j * t1
        t = c2 + 1j * t2
        return (spec.log_joint(s, t) + spec.kernel1.log_kernel(s) + spec.kernel2.log_kernel(t)
                + s * logx + t * logy)

    probe = np.arange(0.0, 401.0, 1.0)
    zeros = np.zeros_like(probe)
    eps = math.log(tol * 1e-4)
    m1 = np.maximum(np.real(logf(probe, zeros)), np.real(logf(-probe, zeros)))
    m2 = np.maximum(np.real(logf(zeros, probe)), np.real(logf(-probe / 2, probe)))
    m2 = np.maximum(m2, np.real(logf(probe / 2, probe)))
    peak = max(m1.max(), m2.max())
    T1 = float(probe[np.nonzero(m1 >= peak + eps)[0][-1]]) + 2.0
    T2 = float(probe[np.nonzero(m2 >= peak + eps)[0][-1]]) + 2.0
    width1 = min(1.0, 6.0 / (1.0 + abs(logx) / 2.0))
    width2 = min(1.0, 6.0 / (1.0 + abs(logy) / 2.0))
    first = max(min(1.0, 2.0 * dist), 1e-3)
    while True:
        n1, w1, p1 = _panel_nodes(T1, width1, first, order, symmetric=True)
        n2, w2, p2 = _panel_nodes(T2, width2, first, order, symmetric=False)
        vals = np.exp(logf(n1[:, None], n2[None, :]))
        value = 2.0 * float(np.real(np.einsum("i,ij,j->", w1, vals, w2))) / (4.0 * math.pi ** 2)
        absval = np.abs(vals)
        edge = max(absval[:order].max(), absval[-order:].max(), absval[:, -order:].max())
        tail = 2.0 * edge * (T1 + T2) / (4.0 * math.pi ** 2)
        scale = max(abs(value), 1e-300)
        if tail <= tol * scale or (T1 >= max_T and T2 >= max_T):
            break
        T1, T2 = min(2.0 * T1, max_T), min(2.0 * T2, max_T)
    # resolution check on a coarser rule
    n1c, w1c, _ = _panel_nodes(T1, width1, first, order // 2 + 2, symmetric=True)
    n2c, w2c, _ = _panel_nodes(T2, width2, first, order // 2 + 2, symmetric=False)
    coarse = 2.0 * float(np.real(np.einsum("i,ij,j->", w1c, np.exp(logf(n1c[:, None], n2c[None, :])), w2c)))
    coarse /= 4.0 * math.pi ** 2
    err = (abs(value - coarse) + tail) / scale
    diag.method = "quadrature-2d"
    diag.contour = (float(c1), float(c2))
    diag.truncation = (T1, T2)
    diag.panels = p1 * p2
    diag.nodes = len(n1) * len(n2)
    diag.error_estimate = err
    if err > max(100 * tol, 1e-4):
        if err * scale > abs_floor:
            raise ConvergenceError("bivariate Mellin-Barnes quadrature did not settle", value, err)
        diag.notes.append("accepted below absolute floor")
    return value
