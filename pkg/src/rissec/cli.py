"""Command-line interface: ``rissec {sweep,compare,figure,moments}``.

Sweep spec (JSON)::

    {
      "metric": "SOP",                  # ASC | SOP | SPSC | EST
      "scenario": "I",                  # I | II | III
      "sweep_var": "main_rf.omega_db",  # dotted path or alias (omega_t, r_d, ...)
      "grid": [0, 5, 10],               # nonempty, strictly increasing
      "overrides": {"n_t": 2},          # optional path -> value map
      "mc": {"n": 1000000, "seed": 1},  # optional Monte-Carlo run
      "preset": "defaults"              # only built-in parameter tree
    }

Optional keys: ``params`` (nested tree merged over the defaults),
``also_set`` (paths that follow the sweep value), ``asymptotic`` (bool) and
``analytic_lambda_offsets`` (perturbs the RF moment constants on the
analytic side only, a negative control for ``compare``).

Moments spec (JSON)::

    {"links": ["main_rf", "main_uowc"], "k_max": 3, "overrides": {},
     "lambda_offsets": [0, 0, 0, 0]}

EGG preset files are JSON objects ``{"presets": {name: {"omega", "lam",
"a", "b", "c"}}}``; every ``*.json`` in the directory named by the
``RISSEC_PRESET_DIR`` environment variable is merged over the built-in set.

Output CSV header: ``sweep_var,analytic,asymptotic,mc_mean,mc_stderr,diag``.
Floats are written in shortest round-trip form and absent values as empty
fields, so a fixed spec and seed give byte-identical files.

Exit codes: 0 success, 1 comparison failed, 2 invalid input, 3 kernel
evaluation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from functools import partial
from pathlib import Path

from . import config as cfgmod
from . import figures
from . import montecarlo as mc
from . import sweep as sw
from .channels import RisRfLink, cascade_moment_rf_lambda
from .specfun import SpecfunError

__all__ = ["main", "build_parser", "cmd_sweep", "cmd_compare", "cmd_figure", "cmd_moments"]

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_KERNEL = 0, 1, 2, 3


def _log(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr)


def _load_json(path) -> dict:
    if path is None:
        raise cfgmod.ConfigError("--spec is required for this command")
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise cfgmod.ConfigError(f"--spec: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise cfgmod.ConfigError(f"--spec: invalid JSON ({exc})") from exc


def _samples(value: int | None) -> int | None:
    if value is not None and value <= 0:
        raise cfgmod.ConfigError(f"--mc-samples must be positive, got {value}")
    return value


def _load_sweep(args) -> sw.SweepSpec:
    spec = sw.SweepSpec.from_dict(_load_json(args.spec))
    n = _samples(args.mc_samples)
    if n is not None or args.seed is not None:
        spec = spec.with_mc(n, args.seed)
    return spec


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="") as fh:
            fh.write(text)


def cmd_sweep(args) -> int:
    spec = _load_sweep(args)
    _log(args, f"sweep {spec.metric} scenario {spec.scenario.value} over {spec.sweep_var} "
               f"({len(spec.grid)} points)")
    rows = sw.run_sweep(spec, args.workers)
    _emit(sw.format_csv(rows), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    spec = _load_sweep(args)
    if spec.mc is None:
        spec = spec.with_mc()
    rows = sw.run_sweep(spec, args.workers)
    _emit(sw.format_csv(rows), args.out)
    ok, summary = sw.compare_rows(rows)
    if not args.quiet:
        print("point,analytic,mc_mean,mc_stderr,z", file=sys.stderr)
        for r in rows:
            print(f"{r.x:g},{r.analytic:.8g},{r.mc_mean:.8g},{r.mc_stderr:.3g},{r.z:.3f}", file=sys.stderr)
        if args.physical:
            _physical_gap(spec, rows)
    print(summary, file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def _physical_gap(spec: sw.SweepSpec, rows) -> None:
    """Report the physical-sampler estimate next to the fitted-mode one."""
    phys = replace(spec, mc=sw.McSpec(spec.mc.n, spec.mc.seed, fitted=False), asymptotic=False)
    print("point,fitted_mc,physical_mc,gap", file=sys.stderr)
    for r, p in zip(rows, sw.run_sweep(phys)):
        print(f"{r.x:g},{r.mc_mean:.8g},{p.mc_mean:.8g},{p.mc_mean - r.mc_mean:+.3g}", file=sys.stderr)


def cmd_figure(args) -> int:
    n = None if args.no_mc else (_samples(args.mc_samples) or figures.FIGURE_CAP_SAMPLES)
    curves = figures.figure_curves(args.figure_id, n, args.seed or 0)
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    for curve in curves:
        path = out_dir / figures.curve_filename(args.figure_id, curve)
        sw.write_csv(sw.run_sweep(curve, args.workers), path)
        _log(args, f"wrote {path}")
    return EXIT_OK


def cmd_moments(args) -> int:
    data = _load_json(args.spec) if args.spec else {}
    extra = set(data) - {"links", "k_max", "overrides", "lambda_offsets"}
    if extra:
        raise cfgmod.ConfigError(f"unknown moments field(s): {sorted(extra)}")
    params = cfgmod.default_params()
    for path, v in data.get("overrides", {}).items():
        params = cfgmod.set_path(params, path, v)
    links = dict(zip(("main_rf", "main_uowc", "eve_rf", "eve_uowc"), cfgmod.build_links(params)))
    names = data.get("links", ["main_rf", "main_uowc"])
    k_max = int(data.get("k_max", 3))
    if k_max < 1:
        raise cfgmod.ConfigError("k_max must be at least 1")
    n = _samples(args.mc_samples) or mc.DEFAULT_SAMPLES
    offsets = data.get("lambda_offsets")
    ok = True
    lines = []
    for i, name in enumerate(names):
        if name not in links:
            raise cfgmod.ConfigError(f"links: unknown link {name!r}; known: {sorted(links)}")
        link = links[name]
        moment = None
        if offsets is not None and isinstance(link, RisRfLink):
            moment = partial(cascade_moment_rf_lambda, offsets=tuple(float(x) for x in offsets))
        report = mc.moment_check(link, k_max, n, mc.RngStream(args.seed or 0, i), moment, args.workers)
        ok &= report.passed()
        lines.append(f"# {name}: {'PASS' if report.passed() else 'FAIL'}")
        lines.append(report.format())
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="JSON spec file")
    common.add_argument("--out", help="output file (figure: directory); stdout if omitted")
    common.add_argument("--mc-samples", type=int, help="Monte-Carlo draws per grid point")
    common.add_argument("--seed", type=int, help="unsigned 64-bit seed")
    common.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--quiet", action="store_true", help="suppress progress output")

    parser = argparse.ArgumentParser(prog="rissec", description="Secrecy metrics of RIS-assisted mixed RF-UOWC links.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="evaluate a metric over a parameter grid").set_defaults(func=cmd_sweep)
    p = sub.add_parser("compare", parents=[common], help="closed form vs Monte Carlo with z-scores")
    p.add_argument("--physical", action="store_true", help="also report the physical-sampler gap")
    p.set_defaults(func=cmd_compare)
    p = sub.add_parser("figure", parents=[common], help="CSV bundle for a registered figure")
    p.add_argument("figure_id", help=f"one of: {', '.join(figures.figure_ids())}")
    p.add_argument("--no-mc", action="store_true", help="skip the Monte-Carlo columns")
    p.set_defaults(func=cmd_figure)
    sub.add_parser("moments", parents=[common], help="analytic vs sampled cascade moments").set_defaults(func=cmd_moments)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.workers < 1:
            raise cfgmod.ConfigError("--workers must be at least 1")
        if args.seed is not None and not 0 <= args.seed < 2 ** 64:
            raise cfgmod.ConfigError("--seed must be an unsigned 64-bit integer")
        return args.func(args)
    except cfgmod.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SpecfunError as exc:
        print(f"error: kernel evaluation failed: {exc}", file=sys.stderr)
        return EXIT_KERNEL


if __name__ == "__main__":
    sys.exit(main())
