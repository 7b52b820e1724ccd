"""Effective secrecy throughput against the target secrecy rate.

A small target rate is almost never in outage but carries little data; a
large one is rarely achieved.  The product peaks in between.

    python3 demos/throughput_vs_rate.py
"""

from rissec import config, metrics

params = config.default_params()
for path, value in {"omega_t": 40.0, "omega_rd": 40.0}.items():
    params = config.set_path(params, path, value)

for n_t in (1, 3):
    p = config.set_path(params, "n_t", n_t)
    print(f"N_t = {n_t}")
    for r0 in (0.01, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0):
        cfg = config.build_config(config.set_path(p, "r0", r0), "I")
        print(f"  R0 = {r0:5.2f}  EST = {metrics.est(cfg).value:.4f}  SOP = {metrics.sop(cfg).value:.4f}")
