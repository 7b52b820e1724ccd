"""Registry of the standard figure sweeps.

Every figure is a list of curves.  A curve is a :class:`~rissec.sweep.SweepSpec`
on the ``defaults`` tree with the legend parameters set as overrides; its
label (``name=value`` pairs) becomes part of the CSV file name.
"""

from __future__ import annotations

import itertools
import re
from typing import Callable, Mapping, Sequence

from . import config as cfgmod
from .metrics import Scenario
from .sweep import McSpec, SweepSpec

__all__ = ["FIGURE_CAP_SAMPLES", "FIGURES", "figure_ids", "figure_curves", "curve_filename"]

FIGURE_CAP_SAMPLES = 100_000

OMEGA_GRID = tuple(float(x) for x in range(0, 42, 2))
R0_GRID = (0.01, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0)


def _grid_product(legend: Mapping[str, Sequence]) -> list[dict]:
    keys = list(legend)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(legend[k] for k in keys))]


def _label(values: Mapping) -> str:
    return ",".join(f"{k}={v}" for k, v in values.items())


def _curves(metric: str, scenario: str, legend: Mapping[str, Sequence], paths: Mapping[str, str],
            sweep_var: str = "omega_t", grid: Sequence[float] = OMEGA_GRID,
            fixed: Mapping | None = None, also_set: Sequence[str] = ()) -> list[SweepSpec]:
    out = []
    for values in _grid_product(legend):
        overrides = dict(fixed or {})
        for name, v in values.items():
            targets = paths[name]
            for p in (targets if isinstance(targets, tuple) else (targets,)):
                overrides[p] = v
        out.append(SweepSpec(metric=metric, scenario=Scenario.parse(scenario), sweep_var=sweep_var,
                             grid=tuple(grid), overrides=overrides, also_set=tuple(also_set),
                             base=cfgmod.default_params(), label=_label(values)))
    return out


def _shared_ris() -> list[SweepSpec]:
    # Eavesdropper on the main RIS: its RF link equals the main one in every
    # statistic, so Omega_es tracks Omega_t along the sweep.
    out = []
    for xi in (0.5, 1.5):
        fixed = {"main_uowc.hops.xi": xi}
        out.append(SweepSpec("ASC", Scenario.RF_EAVESDROP, "omega_t", OMEGA_GRID, dict(fixed),
                             base=cfgmod.default_params(), label=f"ris=separate,xi_d={xi}"))
        shared = dict(fixed, **{"eve_rf.n_elements": 1, "eve_rf.path_loss": 1.0})
        out.append(SweepSpec("ASC", Scenario.RF_EAVESDROP, "omega_t", OMEGA_GRID, shared,
                             also_set=("omega_es",), base=cfgmod.default_params(),
                             label=f"ris=shared,xi_d={xi}"))
    return out


_BL = ("fresh_bl2.4", "fresh_bl4.7", "fresh_bl7.1")

FIGURES: dict[str, tuple[str, Callable[[], list[SweepSpec]]]] = {
    "fig2": ("SOP^I vs Omega_t by N_t", lambda: _curves(
        "SOP", "I", {"n_t": (1, 2, 3)}, {"n_t": "n_t"})),
    "fig3": ("SOP^I vs Omega_t by N_d and Omega_es", lambda: _curves(
        "SOP", "I", {"n_d": (1, 3), "omega_es": (20.0, 25.0)}, {"n_d": "n_d", "omega_es": "omega_es"})),
    "fig4": ("SOP^I vs Omega_t by N_es and phi_t,r", lambda: _curves(
        "SOP", "I", {"n_es": (1, 3), "phi_tr": (1.0, 2.0)}, {"n_es": "n_es", "phi_tr": "main_rf.hop_r.phi"})),
    "fig5": ("SPSC^III vs Omega_t by N_er and Omega_rer", lambda: _curves(
        "SPSC", "III", {"n_er": (1, 3), "omega_rer": (15.0, 20.0)},
        {"n_er": "n_er", "omega_rer": "omega_rer"})),
    "fig6": ("SOP^II vs Omega_t by alpha_t and Omega_rer", lambda: _curves(
        "SOP", "II", {"alpha_t": (1.0, 3.0), "omega_rer": (15.0, 20.0)},
        {"alpha_t": "main_rf.hops.alpha", "omega_rer": "omega_rer"})),
    "fig7": ("SPSC^II vs Omega_t by mu_t and Omega_rer", lambda: _curves(
        "SPSC", "II", {"mu_t": (1.0, 10.0), "omega_rer": (15.0, 20.0)},
        {"mu_t": "main_rf.hops.mu", "omega_rer": "omega_rer"})),
    "fig8": ("SOP^III vs Omega_t by alpha_es,r and r_d", lambda: _curves(
        "SOP", "III", {"alpha_esr": (1.0, 2.0, 3.0), "r_d": (1, 2)},
        {"alpha_esr": "eve_rf.hop_r.alpha", "r_d": "r_d"})),
    "fig9": ("SOP^I vs Omega_t by alpha_es,s, mu_es,s and Omega_rd", lambda: _curves(
        "SOP", "I", {"alpha_ess": (2.0, 3.0), "mu_ess": (1.0, 2.0), "omega_rd": (20.0, 30.0)},
        {"alpha_ess": "eve_rf.hop_s.alpha", "mu_ess": "eve_rf.hop_s.mu", "omega_rd": "omega_rd"})),
    "fig10": ("EST^III vs Omega_t by mu_es,r and Omega_rer", lambda: _curves(
        "EST", "III", {"mu_esr": (1.0, 4.0), "omega_rer": (15.0, 20.0)},
        {"mu_esr": "eve_rf.hop_r.mu", "omega_rer": "omega_rer"})),
    "fig11": ("ASC vs Omega_t by bubble level and xi_d", lambda: _curves(
        "ASC", "I", {"h": _BL, "xi_d": (0.5, 1.5)},
        {"h": "main_uowc.hops.preset", "xi_d": "main_uowc.hops.xi"})),
    "fig12": ("SOP^II vs Omega_t by eavesdropper bubble level and xi_er", lambda: _curves(
        "SOP", "II", {"h_e": (_BL[0], _BL[2]), "xi_er": (0.5, 1.5)},
        {"h_e": "eve_uowc.hops.preset", "xi_er": "eve_uowc.hops.xi"})),
    "fig13": ("SOP^III vs Omega_t by bubble level and path loss", lambda: _curves(
        "SOP", "III", {"h": (_BL[0], _BL[2]), "l": (1.0, 2.0)},
        {"h": ("main_uowc.hops.preset", "eve_uowc.hops.preset"), "l": ("l_t", "eve_rf.path_loss")})),
    "fig14": ("EST^I vs R0 by N_t", lambda: _curves(
        "EST", "I", {"n_t": (1, 3)}, {"n_t": "n_t"}, sweep_var="r0", grid=R0_GRID,
        fixed={"omega_t": 40.0, "omega_rd": 40.0})),
    "fig15": ("EST^II vs Omega_t by RIS element counts", lambda: _curves(
        "EST", "II", {"n_t": (1, 3), "n_d": (1, 3)}, {"n_t": "n_t", "n_d": "n_d"})),
    "fig16": ("SOP vs Omega_rd for the three scenarios", lambda: [
        c for s in ("I", "II", "III") for c in _curves(
            "SOP", s, {"scenario": (s,)}, {"scenario": ()}, sweep_var="omega_rd")]),
    "fig_shared_ris": ("ASC vs Omega_t, separate vs shared eavesdropper RIS", _shared_ris),
}


def figure_ids() -> list[str]:
    return list(FIGURES)


def figure_curves(fig_id: str, mc_samples: int | None = FIGURE_CAP_SAMPLES, seed: int = 0) -> list[SweepSpec]:
    """Curves of ``fig_id`` with Monte-Carlo settings applied (``None`` disables MC)."""
    if fig_id not in FIGURES:
        raise cfgmod.ConfigError(f"unknown figure id {fig_id!r}; known ids: {', '.join(FIGURES)}")
    curves = FIGURES[fig_id][1]()
    if mc_samples is None:
        return curves
    return [c.__class__(**{**c.__dict__, "mc": McSpec(int(mc_samples), seed)}) for c in curves]


def curve_filename(fig_id: str, curve: SweepSpec) -> str:
    label = re.sub(r"[^A-Za-z0-9_.=,-]", "_", curve.label).replace("=", "-").replace(",", "_")
    return f"{fig_id}_{label}.csv" if label else f"{fig_id}.csv"
