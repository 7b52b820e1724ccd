"""Secrecy metrics of RIS-assisted mixed RF-UOWC relaying networks.

Modules
-------
specfun     Fox H and Meijer G evaluation (univariate and bivariate).
channels    Fading models, cascade moments and SNR distributions.
metrics     ASC, SOP, SPSC and EST in closed, asymptotic and oracle form.
montecarlo  Reproducible channel simulator used for validation.
cli         ``rissec`` command-line entry point.
"""

from .channels import AlphaMuHop, EggHop, RisRfLink, RisUowcLink
from .config import build_config, default_params
from .metrics import Method, MetricResult, Scenario, ScenarioConfig, asc, est, sop, spsc

__version__ = "0.1.0"

__all__ = [
    "AlphaMuHop",
    "EggHop",
    "RisRfLink",
    "RisUowcLink",
    "Method",
    "MetricResult",
    "Scenario",
    "ScenarioConfig",
    "asc",
    "sop",
    "spsc",
    "est",
    "build_config",
    "default_params",
]
