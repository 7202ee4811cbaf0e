"""Command-line front end: scenario configs in, CSV data and SVG plots out.

Exit codes: 0 success, 2 configuration error, 3 numerical abort
(nodal-singularity truncation), 4 failed checks in `reproduce`.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Dict, Optional, Tuple

import numpy as np

from . import reproduce as reproduce_mod
from .config import ScenarioConfig, parse_config
from .control import simulate_sync
from .diagnostics import (
    divergence_csv,
    dominant_peaks,
    largest_lyapunov,
    periodogram,
    spectrum_csv,
    top_peak_power_fraction,
)
from .errors import ConfigError, NodalSingularityError, QchaosError
from .integrate import PhaseState, Trajectory, integrate, pair_divergence
from .oscillator import (
    EigenstateSpec,
    derive_params,
    excited_state_field,
    ground_state_field,
    total_potential_grid,
)
from .svgplot import write_plot

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_CHECKS = 4


def _load_config(args: argparse.Namespace) -> ScenarioConfig:
    overrides: Dict[Tuple[str, str], str] = {}
    for section, key, attr in (
        ("model", "beta", "beta"), ("model", "gamma", "gamma"),
        ("model", "branch", "branch"), ("model", "n1", "n1"), ("model", "n2", "n2"),
        ("run", "initial", "initial"), ("run", "initial_b", "initial_b"),
        ("run", "t_final", "t_final"), ("run", "dt", "dt"), ("run", "stride", "stride"),
        ("controller", "q", "q"), ("controller", "r", "r"),
        ("controller", "epsilon", "epsilon"), ("controller", "master", "master"),
        ("analysis", "embed_dim", "embed_dim"), ("analysis", "k_max", "k_max"),
        ("analysis", "x_imag", "x_imag"), ("analysis", "y_imag", "y_imag"),
        ("analysis", "grid_n", "grid_n"),
        ("analysis", "grid_min", "grid_min"), ("analysis", "grid_max", "grid_max"),
        ("output", "directory", "out_dir"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[(section, key)] = str(value)
    with open(args.config) as fh:
        text = fh.read()
    return parse_config(text, overrides)


def _field_for(cfg: ScenarioConfig):
    params = derive_params(cfg.model.beta, cfg.model.gamma, cfg.model.branch)
    if (cfg.model.n1, cfg.model.n2) == (0, 0):
        return params, ground_state_field(params)
    return params, excited_state_field(params)


def _out_dir(cfg: ScenarioConfig) -> str:
    os.makedirs(cfg.output.directory, exist_ok=True)
    return cfg.output.directory


def _write(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


def _run_trajectory(cfg: ScenarioConfig, initial) -> Trajectory:
    params, field = _field_for(cfg)
    return integrate(field, PhaseState(*initial), cfg.run.t_final,
                     cfg.run.dt, cfg.run.stride,
                     meta={"beta": cfg.model.beta, "gamma": cfg.model.gamma,
                           "branch": cfg.model.branch,
                           "n1": cfg.model.n1, "n2": cfg.model.n2,
                           "initial": tuple(initial)})


def cmd_params(args) -> int:
    cfg = _load_config(args)
    p = derive_params(cfg.model.beta, cfg.model.gamma, cfg.model.branch)
    print(f"beta = {p.beta:g}, gamma = {p.gamma:g}, branch = {p.branch}")
    for name in ("rho1", "rho2", "eta1", "eta2", "mu1", "mu2",
                 "a1", "a2", "a3", "a4", "a5", "b1", "b2", "cap_d", "cap_g"):
        print(f"  {name:6s} = {getattr(p, name): .10g}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    if cfg.run.initial is None:
        raise ConfigError("[run] initial: required key is missing")
    out = _out_dir(cfg)
    traj = _run_trajectory(cfg, cfg.run.initial)
    _write(os.path.join(out, "trajectory.csv"), traj.to_csv())
    status = EXIT_NUMERICAL if traj.truncated else EXIT_OK
    traj_b = None
    if cfg.run.initial_b is not None:
        traj_b = _run_trajectory(cfg, cfg.run.initial_b)
        _write(os.path.join(out, "trajectory_b.csv"), traj_b.to_csv())
        if not traj_b.truncated and not traj.truncated:
            div = pair_divergence(traj, traj_b)
            _write(os.path.join(out, "divergence.csv"),
                   "t,separation\n" + "\n".join("%.17g,%.17g" % (a, b) for a, b in div) + "\n")
        else:
            status = EXIT_NUMERICAL
    if "svg" in cfg.output.formats:
        series = [("a", traj.x_r, traj.y_r)]
        if traj_b is not None:
            series.append(("b", traj_b.x_r, traj_b.y_r))
        write_plot(os.path.join(out, "trajectory_plane.svg"), series,
                   title="real-plane trajectory", xlabel="x_r", ylabel="y_r")
        write_plot(os.path.join(out, "trajectory_time.svg"),
                   [("x_r", traj.t, traj.x_r), ("y_r", traj.t, traj.y_r)],
                   title="real components", xlabel="t", ylabel="value")
    if traj.truncated:
        print(f"trajectory truncated at t = {traj.abort_time:g} (nodal singularity)",
              file=sys.stderr)
    return status


def cmd_control(args) -> int:
    cfg = _load_config(args)
    if cfg.controller is None:
        raise ConfigError("[controller] master: controller section is required for `control`")
    if cfg.run.initial is None:
        raise ConfigError("[run] initial: required key is missing")
    out = _out_dir(cfg)
    params, _ = _field_for(cfg)
    run = simulate_sync(params, cfg.controller.controller,
                        PhaseState(*cfg.controller.master),
                        PhaseState(*cfg.run.initial),
                        cfg.run.t_final, cfg.run.dt, cfg.run.stride)
    _write(os.path.join(out, "sync.csv"), run.to_csv())
    if "svg" in cfg.output.formats:
        t = run.t
        write_plot(os.path.join(out, "sync_error.svg"),
                   [(f"e{i + 1}", t, run.error[:, i]) for i in range(4)],
                   title="tracking error", xlabel="t", ylabel="e")
        write_plot(os.path.join(out, "sync_sliding.svg"),
                   [("s", t, run.sliding)], title="sliding value", xlabel="t", ylabel="s")
        write_plot(os.path.join(out, "sync_control.svg"),
                   [(f"u{i + 1}", t, run.control[:, i]) for i in range(4)],
                   title="control input", xlabel="t", ylabel="u")
        write_plot(os.path.join(out, "sync_plane.svg"),
                   [("master", run.master.x_r, run.master.y_r),
                    ("slave", run.slave.x_r, run.slave.y_r)],
                   title="real-plane trajectories", xlabel="x_r", ylabel="y_r")
    if run.master.truncated:
        print(f"run truncated at t = {run.master.abort_time:g} (nodal singularity)",
              file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cfg = _load_config(args)
    if cfg.run.initial is None:
        raise ConfigError("[run] initial: required key is missing")
    out = _out_dir(cfg)
    traj = _run_trajectory(cfg, cfg.run.initial)
    spec = periodogram(traj.x_r, traj.dt_sample)
    _write(os.path.join(out, "spectrum.csv"), spectrum_csv(spec))
    dom = dominant_peaks(spec)
    print(f"flatness = {spec.flatness:.6e}")
    print(f"dominant peaks ({len(dom)}): "
          + ", ".join(f"f={f:.5g} (power {p:.3e})" for f, p in dom))
    print(f"top-2 peak power fraction = {top_peak_power_fraction(spec):.4f}")
    if "svg" in cfg.output.formats:
        write_plot(os.path.join(out, "spectrum.svg"),
                   [("power", spec.freqs, spec.power)],
                   title="periodogram", xlabel="frequency", ylabel="log10 power",
                   log_y=True)
    return EXIT_NUMERICAL if traj.truncated else EXIT_OK


def cmd_lle(args) -> int:
    cfg = _load_config(args)
    if cfg.run.initial is None:
        raise ConfigError("[run] initial: required key is missing")
    out = _out_dir(cfg)
    traj = _run_trajectory(cfg, cfg.run.initial)
    ana = cfg.analysis
    res = largest_lyapunov(traj.x_r, traj.dt_sample, d=ana.embed_dim,
                           taus=range(ana.delay_min, ana.delay_max + 1),
                           k_max=ana.k_max)
    print(f"largest Lyapunov exponent = {res.slope:+.5f} per unit time "
          f"(median over delays {ana.delay_min}..{ana.delay_max}, d={ana.embed_dim})")
    for tau, slope in zip(res.delays, res.per_delay_slopes):
        print(f"  tau = {tau:3d}: {slope:+.5f}")
    _write(os.path.join(out, "divergence_curves.csv"),
           divergence_csv(res, traj.dt_sample))
    _write(os.path.join(out, "lle.csv"),
           "tau,slope\n" + "\n".join(f"{t},{s:.17g}"
                                     for t, s in zip(res.delays, res.per_delay_slopes))
           + f"\nmedian,{res.slope:.17g}\n")
    if "svg" in cfg.output.formats:
        series = [(f"tau={tau}", np.arange(len(c)) * traj.dt_sample, c)
                  for tau, c in res.divergence_curves.items()]
        write_plot(os.path.join(out, "divergence_curves.svg"), series,
                   title="mean log divergence", xlabel="t", ylabel="<ln d>")
    return EXIT_NUMERICAL if traj.truncated else EXIT_OK


def cmd_potential_grid(args) -> int:
    cfg = _load_config(args)
    out = _out_dir(cfg)
    params, _ = _field_for(cfg)
    ana = cfg.analysis
    axis = np.linspace(ana.grid_min, ana.grid_max, ana.grid_n)
    spec = EigenstateSpec(cfg.model.n1, cfg.model.n2)
    grid = total_potential_grid(params, spec, ana.x_imag, ana.y_imag, axis, axis)
    lines = ["x_r,y_r,v_total,grad_x,grad_y,ok"]
    for iy, yv in enumerate(grid.y):
        for ix, xv in enumerate(grid.x):
            lines.append("%.17g,%.17g,%.17g,%.17g,%.17g,%d"
                         % (xv, yv, grid.v_total[iy, ix], grid.grad_x[iy, ix],
                            grid.grad_y[iy, ix], int(grid.ok[iy, ix])))
    _write(os.path.join(out, "potential.csv"), "\n".join(lines) + "\n")
    n_bad = int((~grid.ok).sum())
    print(f"grid {ana.grid_n}x{ana.grid_n} on [{ana.grid_min:g}, {ana.grid_max:g}]^2, "
          f"{n_bad} node-flagged cells")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    result = reproduce_mod.run_study(out_dir=args.out_dir, quick=args.quick)
    if args.quick:
        return EXIT_OK
    return EXIT_OK if result.all_passed else EXIT_CHECKS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qchaos",
        description="complex-trajectory oscillator simulation, synchronization and diagnostics")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, with_controller=False):
        p.add_argument("config", help="scenario config file")
        p.add_argument("--beta", type=float)
        p.add_argument("--gamma", type=float)
        p.add_argument("--branch", choices=("plus", "minus"))
        p.add_argument("--n1", type=int)
        p.add_argument("--n2", type=int)
        p.add_argument("--initial", help="four numbers: x_r x_i y_r y_i")
        p.add_argument("--initial-b", dest="initial_b")
        p.add_argument("--t-final", dest="t_final", type=float)
        p.add_argument("--dt", type=float)
        p.add_argument("--stride", type=int)
        p.add_argument("--out-dir", dest="out_dir")
        if with_controller:
            p.add_argument("--q", type=float)
            p.add_argument("--r", type=float)
            p.add_argument("--epsilon", type=float)
            p.add_argument("--master", help="four numbers: x_r x_i y_r y_i")

    p = sub.add_parser("params", help="print the derived model coefficients")
    add_common(p)
    p.set_defaults(fn=cmd_params)

    p = sub.add_parser("simulate", help="integrate a trajectory (and optional pair)")
    add_common(p)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("control", help="run a master-slave synchronization")
    add_common(p, with_controller=True)
    p.set_defaults(fn=cmd_control)

    p = sub.add_parser("spectrum", help="periodogram of the simulated x_r series")
    add_common(p)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("lle", help="largest Lyapunov exponent of the simulated x_r series")
    add_common(p)
    p.set_defaults(fn=cmd_lle)

    p = sub.add_parser("potential-grid", help="total-potential landscape on a real-plane grid")
    add_common(p)
    p.set_defaults(fn=cmd_potential_grid)

    p = sub.add_parser("reproduce", help="run the full frozen study with verdicts")
    p.add_argument("--out-dir", dest="out_dir", default="reproduce_out")
    p.add_argument("--quick", action="store_true", help="short smoke run, no verdicts")
    p.set_defaults(fn=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NodalSingularityError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except QchaosError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
