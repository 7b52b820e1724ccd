"""Secrecy metrics of the default network against the main RF SNR.

Prints closed-form SOP for the three eavesdropping scenarios and the ASC,
each next to a fitted-mode Monte-Carlo estimate.

    python3 demos/secrecy_vs_snr.py [n_samples]
"""

import sys

from rissec import config, metrics, montecarlo as mc

N = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000


def cfg_at(scenario, omega_t):
    params = config.set_path(config.default_params(), "omega_t", omega_t)
    return config.build_config(params, scenario)


print(f"{'Omega_t':>8} {'SOP I':>10} {'SOP II':>10} {'SOP III':>10} {'ASC bits':>10} {'MC ASC':>10}")
for i, omega_t in enumerate(range(0, 41, 5)):
    row = [metrics.sop(cfg_at(s, float(omega_t))).value for s in ("I", "II", "III")]
    c1 = cfg_at("I", float(omega_t))
    asc = metrics.asc(c1).value
    sim = mc.empirical_asc(c1, N, mc.RngStream(1, i)).mean
    print(f"{omega_t:>8d} " + " ".join(f"{v:10.4g}" for v in row) + f" {asc:10.4g} {sim:10.4g}")
