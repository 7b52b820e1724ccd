"""Parameter sweeps: spec parsing, grid evaluation and CSV output."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Sequence

from . import config as cfgmod
from . import metrics as M
from . import montecarlo as mc
from .channels import RisRfLink, cascade_moment_rf_lambda, fit_gamma

__all__ = [
    "CSV_HEADER",
    "METRICS",
    "McSpec",
    "SweepSpec",
    "SweepRow",
    "evaluate_point",
    "run_sweep",
    "format_csv",
    "write_csv",
    "compare_rows",
]

CSV_HEADER = ("sweep_var", "analytic", "asymptotic", "mc_mean", "mc_stderr", "diag")
METRICS = ("ASC", "SOP", "SPSC", "EST")


@dataclass(frozen=True)
class McSpec:
    n: int = mc.DEFAULT_SAMPLES
    seed: int = 0
    fitted: bool = True

    def __post_init__(self):
        if int(self.n) != self.n or self.n <= 0:
            raise cfgmod.ConfigError(f"mc.n must be a positive integer, got {self.n!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise cfgmod.ConfigError(f"mc.seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class SweepSpec:
    """One curve: a metric evaluated over a grid of one parameter.

    ``also_set`` lists further parameter paths that follow the sweep value
    (used to tie an eavesdropper SNR to the main one).  ``analytic_lambda_offsets``
    perturbs the RF moment constants on the analytic side only, which turns
    a comparison into a negative control.
    """

    metric: str
    scenario: M.Scenario
    sweep_var: str
    grid: tuple[float, ...]
    overrides: Mapping[str, Any] = field(default_factory=dict)
    mc: McSpec | None = None
    asymptotic: bool = True
    also_set: tuple[str, ...] = ()
    base: Mapping[str, Any] | None = None
    analytic_lambda_offsets: tuple[float, ...] | None = None
    label: str = ""

    @classmethod
    def from_dict(cls, data: Mapping) -> "SweepSpec":
        if not isinstance(data, Mapping):
            raise cfgmod.ConfigError("spec must be a JSON object")
        known = {"metric", "scenario", "sweep_var", "grid", "overrides", "mc", "asymptotic",
                 "also_set", "preset", "params", "analytic_lambda_offsets", "label"}
        extra = set(data) - known
        if extra:
            raise cfgmod.ConfigError(f"unknown spec field(s): {sorted(extra)}")
        for key in ("metric", "sweep_var", "grid"):
            if key not in data:
                raise cfgmod.ConfigError(f"missing spec field {key!r}")
        preset = data.get("preset", "defaults")
        if preset != "defaults":
            raise cfgmod.ConfigError(f"preset: only 'defaults' is built in, got {preset!r}")
        base = cfgmod.merge(cfgmod.default_params(), data.get("params", {}))
        mc_data = data.get("mc")
        try:
            mcs = None if mc_data is None else McSpec(**mc_data)
        except TypeError as exc:
            raise cfgmod.ConfigError(f"mc: {exc}") from exc
        try:
            grid = tuple(float(x) for x in data["grid"])
        except (TypeError, ValueError) as exc:
            raise cfgmod.ConfigError(f"grid: {exc}") from exc
        offsets = data.get("analytic_lambda_offsets")
        spec = cls(metric=str(data["metric"]).upper(),
                   scenario=_parse_scenario(data.get("scenario", "I")),
                   sweep_var=str(data["sweep_var"]), grid=grid,
                   overrides=dict(data.get("overrides", {})), mc=mcs,
                   asymptotic=bool(data.get("asymptotic", True)),
                   also_set=tuple(data.get("also_set", ())), base=base,
                   analytic_lambda_offsets=None if offsets is None else tuple(float(x) for x in offsets),
                   label=str(data.get("label", "")))
        spec.validate()
        return spec

    def validate(self) -> None:
        if self.metric not in METRICS:
            raise cfgmod.ConfigError(f"metric: expected one of {METRICS}, got {self.metric!r}")
        if not self.grid:
            raise cfgmod.ConfigError("grid: must be nonempty")
        if any(not math.isfinite(x) for x in self.grid):
            raise cfgmod.ConfigError("grid: values must be finite")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise cfgmod.ConfigError("grid: must be strictly increasing")
        if self.metric == "ASC" and self.scenario is not M.Scenario.RF_EAVESDROP:
            raise cfgmod.ConfigError("scenario: ASC is defined for scenario I only")
        params = self.params()
        for path in (self.sweep_var,) + self.also_set:
            cfgmod.get_path(params, path.replace(".hops.", ".hop_s."))
        cfgmod.build_config(params, self.scenario)

    def params(self, value: float | None = None) -> dict:
        params = self.base if self.base is not None else cfgmod.default_params()
        for path, v in self.overrides.items():
            params = cfgmod.set_path(params, path, v)
        if value is not None:
            for path in (self.sweep_var,) + self.also_set:
                params = cfgmod.set_path(params, path, _cast(cfgmod.get_path(
                    params, path.replace(".hops.", ".hop_s.")), value))
        return params

    def with_mc(self, n: int | None = None, seed: int | None = None) -> "SweepSpec":
        base = self.mc or McSpec()
        return replace(self, mc=McSpec(n if n is not None else base.n,
                                       seed if seed is not None else base.seed, base.fitted))


def _parse_scenario(value):
    try:
        return M.Scenario.parse(value)
    except ValueError as exc:
        raise cfgmod.ConfigError(f"scenario: {exc}") from exc


def _cast(old, value: float):
    if isinstance(old, bool):
        return bool(value)
    if isinstance(old, int):
        if float(value) != int(value):
            raise cfgmod.ConfigError(f"integer parameter cannot take value {value}")
        return int(value)
    return float(value)


@dataclass(frozen=True)
class SweepRow:
    x: float
    analytic: float | None
    asymptotic: float | None = None
    mc_mean: float | None = None
    mc_stderr: float | None = None
    diag: str = ""
    z: float | None = None


def _corrupt_rf(link: RisRfLink, offsets) -> RisRfLink:
    """Copy of ``link`` whose fitted law comes from perturbed moment constants."""
    new = replace(link)
    m1 = cascade_moment_rf_lambda(link, 1, offsets)
    m2 = cascade_moment_rf_lambda(link, 2, offsets)
    try:
        new.__dict__["fitted"] = fit_gamma(m1, m2 - m1 * m1, link.n_elements)
    except ValueError as exc:
        raise cfgmod.ConfigError(f"analytic_lambda_offsets: {exc}") from exc
    return new


def _analytic(metric: str, cfg: M.ScenarioConfig, method: M.Method) -> M.MetricResult:
    if metric == "ASC":
        return M.asc(cfg, method)
    if metric == "SOP":
        return M.sop(cfg, method)
    if metric == "SPSC":
        return M.spsc(cfg, method)
    return M.est(cfg, method)


def _empirical(metric: str, cfg, n, stream, fitted) -> mc.McEstimate:
    fn = {"ASC": mc.empirical_asc, "SOP": mc.empirical_sop,
          "SPSC": mc.empirical_spsc, "EST": mc.empirical_est}[metric]
    return fn(cfg, n, stream, fitted)


def evaluate_point(spec: SweepSpec, index: int) -> SweepRow:
    """Analytic, asymptotic and Monte-Carlo values at ``spec.grid[index]``."""
    x = spec.grid[index]
    cfg = cfgmod.build_config(spec.params(x), spec.scenario)
    acfg = cfg
    if spec.analytic_lambda_offsets is not None:
        acfg = replace(cfg, main_rf=_corrupt_rf(cfg.main_rf, spec.analytic_lambda_offsets),
                       eve_rf=_corrupt_rf(cfg.eve_rf, spec.analytic_lambda_offsets))
    res = _analytic(spec.metric, acfg, M.Method.CLOSED_FORM)
    notes = list(res.diagnostics)
    asym = None
    if spec.asymptotic and spec.metric != "ASC":
        asym = _analytic(spec.metric, acfg, M.Method.ASYMPTOTIC).value
    mc_mean = mc_se = z = None
    if spec.mc is not None:
        est = _empirical(spec.metric, cfg, spec.mc.n, mc.RngStream(spec.mc.seed, index), spec.mc.fitted)
        mc_mean, mc_se = est.mean, est.std_error
        z = est.z_score(res.value)
        notes.append(f"z={z:.3f}")
    if res.flagged:
        notes.append("flagged")
    return SweepRow(x, res.value, asym, mc_mean, mc_se, "; ".join(notes), z)


def _evaluate(args):
    return evaluate_point(*args)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Evaluate every grid point; rows come back in grid order."""
    jobs = [(spec, i) for i in range(len(spec.grid))]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_evaluate, jobs))
    return [evaluate_point(*j) for j in jobs]


def _fmt(v) -> str:
    return "" if v is None else repr(float(v))


def format_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(r.x), _fmt(r.analytic), _fmt(r.asymptotic), _fmt(r.mc_mean),
                    _fmt(r.mc_stderr), r.diag])
    return buf.getvalue()


def write_csv(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(rows))


def compare_rows(rows: Sequence[SweepRow], threshold: float = 3.0) -> tuple[bool, str]:
    """Pass/fail summary of analytic-vs-MC z-scores.

    Points with an undetermined z-score (no sample variance) are listed as
    skipped; they never count as passes.
    """
    zs = [r.z for r in rows if r.z is not None]
    tested = [z for z in zs if not math.isnan(z)]
    skipped = len(zs) - len(tested)
    if not tested:
        return False, "no Monte-Carlo estimates with a usable standard error"
    worst = max(abs(z) for z in tested)
    bad = sum(abs(z) > threshold for z in tested)
    ok = bad == 0
    msg = (f"{'PASS' if ok else 'FAIL'}: {len(tested) - bad}/{len(tested)} points within "
           f"|z| <= {threshold:g}; max |z| = {worst:.3f}")
    if skipped:
        msg += f"; {skipped} point(s) skipped (zero sample variance)"
    return ok, msg
