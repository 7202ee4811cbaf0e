#!/usr/bin/env python3
"""Trajectory gallery: quasi-periodic ground state, chaotic excited state,
imaginary-perturbation multipath pair, and the total-potential landscape.

Writes CSV data and SVG plots for each experiment into --out-dir.
"""

import argparse
import os

import numpy as np

from qchaos import (
    EigenstateSpec,
    PhaseState,
    derive_params,
    excited_state_field,
    ground_state_field,
    integrate,
    pair_divergence,
    total_potential_grid,
)
from qchaos.svgplot import write_plot


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="scenario_out")
    ap.add_argument("--beta", type=float, default=0.8)
    ap.add_argument("--gamma", type=float, default=0.4)
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)
    params = derive_params(args.beta, args.gamma)

    def save(name, traj):
        with open(os.path.join(args.out_dir, f"{name}.csv"), "w") as fh:
            fh.write(traj.to_csv())

    print("ground state from (1, 0, 1, 0), t = 1000 (quasi-periodic)")
    ground = integrate(ground_state_field(params), PhaseState(1, 0, 1, 0), 1000.0,
                       dt=1e-3, sample_stride=100)
    save("ground_quasiperiodic", ground)
    write_plot(os.path.join(args.out_dir, "ground_plane.svg"),
               [("", ground.x_r, ground.y_r)],
               title="ground state, real plane", xlabel="x_r", ylabel="y_r")

    print("first excited state from (0.4, 0, 0.8, 0), t = 3000 (chaotic)")
    excited = integrate(excited_state_field(params), PhaseState(0.4, 0, 0.8, 0),
                        3000.0, dt=1e-3, sample_stride=100)
    save("excited_chaotic", excited)
    write_plot(os.path.join(args.out_dir, "excited_plane.svg"),
               [("", excited.x_r, excited.y_r)],
               title="first excited state, real plane", xlabel="x_r", ylabel="y_r")

    print("multipath pair: same real start, perturbed imaginary start, t = 200")
    field = excited_state_field(params)
    a = integrate(field, PhaseState(1, 0, 0, 0), 200.0, dt=1e-3, sample_stride=100)
    b = integrate(field, PhaseState(1, 0.5, 0, 0.5), 200.0, dt=1e-3, sample_stride=100)
    save("multipath_a", a)
    save("multipath_b", b)
    div = pair_divergence(a, b)
    with open(os.path.join(args.out_dir, "multipath_divergence.csv"), "w") as fh:
        fh.write("t,separation\n")
        fh.writelines("%.17g,%.17g\n" % (t, s) for t, s in div)
    write_plot(os.path.join(args.out_dir, "multipath_divergence.svg"),
               [("separation", div[:, 0], div[:, 1])],
               title="real-projection separation", xlabel="t", ylabel="distance")
    write_plot(os.path.join(args.out_dir, "multipath_planes.svg"),
               [("imag start 0", a.x_r, a.y_r), ("imag start 0.5", b.x_r, b.y_r)],
               title="multipath trajectories", xlabel="x_r", ylabel="y_r")

    print("total-potential landscape (first excited state, x_i = y_i = 0)")
    axis = np.linspace(-5.0, 5.0, 81)
    grid = total_potential_grid(params, EigenstateSpec(1, 0), 0.0, 0.0, axis, axis)
    with open(os.path.join(args.out_dir, "potential_landscape.csv"), "w") as fh:
        fh.write("x_r,y_r,v_total,ok\n")
        for iy, yv in enumerate(grid.y):
            for ix, xv in enumerate(grid.x):
                fh.write("%.17g,%.17g,%.17g,%d\n"
                         % (xv, yv, grid.v_total[iy, ix], int(grid.ok[iy, ix])))
    mid = 40
    write_plot(os.path.join(args.out_dir, "potential_section.svg"),
               [("y_r = 0", grid.x, grid.v_total[mid, :]),
                ("y_r = 1.25", grid.x, grid.v_total[mid + 10, :])],
               title="total potential sections", xlabel="x_r", ylabel="V_total")
    print(f"wrote results to {args.out_dir}/")


if __name__ == "__main__":
    main()
