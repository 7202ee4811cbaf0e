#!/usr/bin/env python3
"""Switching-gain study: reaching speed versus chattering for q and r sweeps.

For each gain the slave (1.1, 0, 1, 0) is driven onto the master orbit from
(2, 0, 2, 0); the script records the reaching time of the boundary layer and
the post-reaching total variation of the control input, and plots s(t) and
u1(t) per gain.
"""

import argparse
import os

import numpy as np

from qchaos import (
    ControllerConfig,
    PhaseState,
    control_variation,
    derive_params,
    reaching_time,
    simulate_sync,
)
from qchaos.svgplot import write_plot

MASTER = PhaseState(2, 0, 2, 0)
SLAVE = PhaseState(1.1, 0, 1, 0)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="gain_sweep_out")
    ap.add_argument("--gains", type=float, nargs="+", default=[1.0, 3.0, 6.0])
    ap.add_argument("--t-final", type=float, default=50.0)
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)
    params = derive_params(0.8, 0.4)

    rows = []
    for sweep in ("q", "r"):
        s_series = []
        u_series = []
        for g in args.gains:
            cfg = (ControllerConfig(q=g, r=1.0) if sweep == "q"
                   else ControllerConfig(q=1.0, r=g))
            run = simulate_sync(params, cfg, MASTER, SLAVE, args.t_final,
                                dt=1e-3, sample_stride=10)
            t_reach = reaching_time(run)
            tv = control_variation(run, t_reach)
            rows.append((sweep, g, t_reach, tv))
            print(f"{sweep} = {g:g}: T_reach = {t_reach:.3f}, TV(u) = {tv:.3f}")
            mask = run.t <= 10.0
            s_series.append((f"{sweep}={g:g}", run.t[mask], run.sliding[mask]))
            u_series.append((f"{sweep}={g:g}", run.t[mask], run.control[mask, 0]))
        write_plot(os.path.join(args.out_dir, f"sliding_{sweep}_sweep.svg"),
                   s_series, title=f"sliding value, {sweep} sweep",
                   xlabel="t", ylabel="s")
        write_plot(os.path.join(args.out_dir, f"control_{sweep}_sweep.svg"),
                   u_series, title=f"control input u1, {sweep} sweep",
                   xlabel="t", ylabel="u1")

    with open(os.path.join(args.out_dir, "gain_study.csv"), "w") as fh:
        fh.write("sweep,gain,t_reach,total_variation\n")
        for sweep, g, t_reach, tv in rows:
            fh.write(f"{sweep},{g:g},{t_reach:.6f},{tv:.6f}\n")
    print(f"wrote results to {args.out_dir}/")


if __name__ == "__main__":
    main()
