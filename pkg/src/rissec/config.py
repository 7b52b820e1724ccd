"""Parameter trees, presets and their conversion into link objects.

A parameter tree is a JSON-compatible nested dict.  The built-in ``defaults``
tree is the standard assumption list: one RIS element per link, alpha = 2,
mu = 4, phi = 1 on every RF hop, pointing error xi = 1, R0 = 0.01 bits/s/Hz,
an RF eavesdropper at 25 dB and both optical links at 20 dB electrical SNR.
The main RF SNR (usually the sweep variable) defaults to 20 dB, path loss to
1 and the optical hops to the ``fresh_bl2.4`` turbulence preset.

Dotted paths address leaves, e.g. ``main_rf.hop_r.alpha`` or
``eve_uowc.omega_r_db``; a few short aliases (``omega_t``, ``r_d`` ...) exist
for the sweep variables used most often.
"""

from __future__ import annotations

import copy
import json
import os
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .channels import AlphaMuHop, EggHop, RisRfLink, RisUowcLink
from .metrics import Scenario, ScenarioConfig

__all__ = [
    "PRESET_DIR_ENV",
    "DEFAULTS",
    "ALIASES",
    "ConfigError",
    "load_egg_presets",
    "default_params",
    "merge",
    "resolve_path",
    "get_path",
    "set_path",
    "build_links",
    "build_config",
]

PRESET_DIR_ENV = "RISSEC_PRESET_DIR"


class ConfigError(ValueError):
    """A spec or parameter tree is malformed; the message names the field."""


_RF_HOP = {"alpha": 2.0, "mu": 4.0, "phi": 1.0}
_EGG_HOP = {"preset": "fresh_bl2.4", "xi": 1.0, "A": 1.0}

DEFAULTS: dict[str, Any] = {
    "r0": 0.01,
    "main_rf": {"hop_s": dict(_RF_HOP), "hop_r": dict(_RF_HOP), "n_elements": 1,
                "path_loss": 1.0, "omega_db": 20.0},
    "eve_rf": {"hop_s": dict(_RF_HOP), "hop_r": dict(_RF_HOP), "n_elements": 1,
               "path_loss": 1.0, "omega_db": 25.0},
    "main_uowc": {"hop_s": dict(_EGG_HOP), "hop_r": dict(_EGG_HOP), "n_elements": 1,
                  "r": 1, "omega_r_db": 20.0},
    "eve_uowc": {"hop_s": dict(_EGG_HOP), "hop_r": dict(_EGG_HOP), "n_elements": 1,
                 "r": 1, "omega_r_db": 20.0},
}

ALIASES = {
    "omega_t": "main_rf.omega_db",
    "omega_es": "eve_rf.omega_db",
    "omega_rd": "main_uowc.omega_r_db",
    "omega_rer": "eve_uowc.omega_r_db",
    "n_t": "main_rf.n_elements",
    "n_es": "eve_rf.n_elements",
    "n_d": "main_uowc.n_elements",
    "n_er": "eve_uowc.n_elements",
    "r_d": "main_uowc.r",
    "r_er": "eve_uowc.r",
    "l_t": "main_rf.path_loss",
    "xi_d": "main_uowc.hop_r.xi",
    "xi_er": "eve_uowc.hop_r.xi",
}


def load_egg_presets(preset_dir: str | os.PathLike | None = None) -> dict[str, dict]:
    """Built-in EGG presets updated with every ``*.json`` file in ``preset_dir``.

    ``preset_dir`` defaults to the directory named by ``RISSEC_PRESET_DIR``.
    User files use the same layout as the shipped one (a ``presets`` map).
    """
    text = resources.files("rissec").joinpath("data/egg_presets.json").read_text()
    presets = dict(json.loads(text)["presets"])
    preset_dir = preset_dir if preset_dir is not None else os.environ.get(PRESET_DIR_ENV)
    if preset_dir:
        for path in sorted(Path(preset_dir).glob("*.json")):
            try:
                data = json.loads(path.read_text())
            except json.JSONDecodeError as exc:
                raise ConfigError(f"preset file {path}: {exc}") from exc
            presets.update(data.get("presets", {}))
    return presets


def default_params() -> dict[str, Any]:
    return copy.deepcopy(DEFAULTS)


def merge(base: dict, overrides: Mapping) -> dict:
    """Recursive dict update returning a new tree."""
    out = copy.deepcopy(base)
    for key, value in overrides.items():
        if isinstance(value, Mapping) and isinstance(out.get(key), dict):
            out[key] = merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def resolve_path(path: str) -> str:
    return ALIASES.get(path, path)


def get_path(params: Mapping, path: str):
    node = params
    full = resolve_path(path)
    for part in full.split("."):
        if not isinstance(node, Mapping) or part not in node:
            raise ConfigError(f"unknown parameter path {path!r}")
        node = node[part]
    return node


def set_path(params: dict, path: str, value) -> dict:
    """Return a copy of ``params`` with the leaf at ``path`` replaced.

    Setting a hop field on ``*.hops`` writes both hops of that link.
    """
    full = resolve_path(path)
    parts = full.split(".")
    if len(parts) >= 2 and parts[-2] == "hops":
        out = params
        for hop in ("hop_s", "hop_r"):
            out = set_path(out, ".".join(parts[:-2] + [hop, parts[-1]]), value)
        return out
    get_path(params, full)  # validates
    out = copy.deepcopy(params)
    node = out
    for part in parts[:-1]:
        node = node[part]
    node[parts[-1]] = value
    return out


def _rf_hop(d: Mapping, where: str) -> AlphaMuHop:
    try:
        return AlphaMuHop(float(d["alpha"]), float(d["mu"]), float(d.get("phi", 1.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _egg_hop(d: Mapping, where: str, presets: Mapping) -> EggHop:
    fields = {}
    name = d.get("preset", "")
    if name:
        if name not in presets:
            raise ConfigError(f"{where}.preset: unknown EGG preset {name!r}; known: {sorted(presets)}")
        fields.update(presets[name])
    fields.update({k: v for k, v in d.items() if k != "preset"})
    try:
        return EggHop(float(fields["omega"]), float(fields["lam"]), float(fields["a"]),
                      float(fields["b"]), float(fields["c"]), float(fields.get("xi", 1.0)),
                      float(fields.get("A", 1.0)), name=name)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _rf_link(d: Mapping, where: str) -> RisRfLink:
    try:
        return RisRfLink(_rf_hop(d["hop_s"], where + ".hop_s"), _rf_hop(d["hop_r"], where + ".hop_r"),
                         int(d.get("n_elements", 1)), float(d.get("path_loss", 1.0)), float(d["omega_db"]))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _uowc_link(d: Mapping, where: str, presets: Mapping) -> RisUowcLink:
    try:
        return RisUowcLink(_egg_hop(d["hop_s"], where + ".hop_s", presets),
                           _egg_hop(d["hop_r"], where + ".hop_r", presets),
                           int(d.get("n_elements", 1)), int(d.get("r", 1)), float(d["omega_r_db"]))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def build_links(params: Mapping, presets: Mapping | None = None):
    """``(main_rf, main_uowc, eve_rf, eve_uowc)`` from a parameter tree."""
    presets = load_egg_presets() if presets is None else presets
    return (_rf_link(params["main_rf"], "main_rf"), _uowc_link(params["main_uowc"], "main_uowc", presets),
            _rf_link(params["eve_rf"], "eve_rf"), _uowc_link(params["eve_uowc"], "eve_uowc", presets))


def build_config(params: Mapping, scenario, presets: Mapping | None = None) -> ScenarioConfig:
    main_rf, main_uowc, eve_rf, eve_uowc = build_links(params, presets)
    try:
        r0 = float(params["r0"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"r0: {exc}") from exc
    try:
        return ScenarioConfig(Scenario.parse(scenario), r0, main_rf, main_uowc, eve_rf, eve_uowc)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
