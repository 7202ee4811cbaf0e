"""Frozen end-to-end study: chaos grading, synchronization, gain sweeps, spectra.

Runs every scenario behind the before/after exponent tables and the gain
study, evaluates the quantitative checks at their frozen tolerances, and
emits comparison tables plus a verdict list. All scenario constants are
frozen here; do not tune them per run.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .control import (
    ControllerConfig,
    control_variation,
    reaching_time,
    simulate_sync,
    SyncRun,
)
from .diagnostics import (
    ChaosReportRow,
    chaos_report,
    dominant_peaks,
    largest_lyapunov,
    periodogram,
    spectral_flatness,
    top_peak_power_fraction,
)
from .integrate import PhaseState, Trajectory, integrate
from .oscillator import derive_params, excited_state_field

BETA, GAMMA = 0.8, 0.4

# Trajectory scenario constants (uncontrolled chaos runs).
UNCONTROLLED_T_FINAL = 3000.0
CONTROLLED_T_FINAL = 300.0
DT = 1e-3
STRIDE = 100           # dt_sample = 0.1

TABLE51_SLAVES = ((0.4, 0.0, 0.4, 0.0), (1.1, 0.0, 0.0, 0.0), (1.1, 0.0, 1.0, 0.0))
TABLE51_MASTER = (2.0, 0.0, 2.0, 0.0)
TABLE51_PAPER = (0.01, 0.148, 0.294)
TABLE52_SLAVE = (1.1, 0.0, 1.0, 0.0)
TABLE52_MASTERS = ((0.0, 0.0, 0.4, 0.0), (3.0, 0.0, 0.0, 0.0), (1.5, 0.0, 0.8, 0.0))
TABLE53_SLAVE = (1.0, 0.0, 0.0, 0.0)
TABLE53_MASTER = (1.0, 0.5, 0.0, 0.5)

GAIN_SWEEP = (1.0, 3.0, 6.0)
SWEEP_T_FINAL = 50.0
SWEEP_STRIDE = 10

# Frozen acceptance tolerances.
SYNC_ERROR_BOUND = 1e-2
SYNC_SETTLE_TIME = 15.0
CONTROLLED_LLE_BOUND = 0.02
TOP2_FRACTION_MIN = 0.55


@dataclass
class Verdict:
    name: str
    passed: bool
    detail: str


@dataclass
class StudyResult:
    verdicts: List[Verdict]
    uncontrolled_lle: Dict[Tuple[float, ...], float]
    controlled_lle: Dict[Tuple[float, ...], float]
    report_text: str
    report_csv: str
    gain_table: List[Tuple[str, float, float, float]]   # label, gain, T_reach, TV(u)

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


def _rel_band(value: float, reference: float, rel: float = 0.5,
              small_abs: float = 0.05) -> bool:
    if abs(reference) < 0.1:
        return abs(value - reference) <= small_abs
    return abs(value - reference) <= rel * abs(reference)


def run_study(out_dir: Optional[str] = None, quick: bool = False,
              log=print) -> StudyResult:
    """Run the full frozen study; quick mode shrinks runs to a plumbing smoke test."""
    params = derive_params(BETA, GAMMA)
    field = excited_state_field(params)
    cfg = ControllerConfig()
    t_unc = 300.0 if quick else UNCONTROLLED_T_FINAL
    t_ctl = 60.0 if quick else CONTROLLED_T_FINAL
    verdicts: List[Verdict] = []

    log("# uncontrolled chaos runs")
    unc_traj: Dict[Tuple[float, ...], Trajectory] = {}
    unc_lle: Dict[Tuple[float, ...], float] = {}
    unc_slopes: Dict[Tuple[float, ...], np.ndarray] = {}
    for ic in TABLE51_SLAVES + (TABLE53_SLAVE,):
        tr = integrate(field, PhaseState(*ic), t_unc, DT, STRIDE,
                       meta={"initial": ic, "state": (1, 0)})
        unc_traj[ic] = tr
        if not quick:
            res = largest_lyapunov(tr.x_r, tr.dt_sample)
            unc_lle[ic] = res.slope
            unc_slopes[ic] = np.asarray(res.per_delay_slopes)
            log(f"  ic={ic}: lambda = {res.slope:+.4f}")

    if not quick:
        lam = [unc_lle[ic] for ic in TABLE51_SLAVES]
        tau_ok = bool(np.all(
            (unc_slopes[TABLE51_SLAVES[0]] < unc_slopes[TABLE51_SLAVES[1]])
            & (unc_slopes[TABLE51_SLAVES[1]] < unc_slopes[TABLE51_SLAVES[2]])))
        verdicts.append(Verdict(
            "chaos ordering (every delay)", tau_ok,
            f"per-delay exponents ordered for all taus 5..15: {tau_ok}"))
        bands = [_rel_band(l, p) for l, p in zip(lam, TABLE51_PAPER)]
        verdicts.append(Verdict(
            "chaos grading bands", all(bands),
            "measured " + ", ".join(f"{l:+.4f} (ref {p})" for l, p in zip(lam, TABLE51_PAPER))))

    log("# controlled runs (three slaves onto one master)")
    ctl_runs: Dict[Tuple[float, ...], SyncRun] = {}
    ctl_lle: Dict[Tuple[float, ...], float] = {}
    for ic in TABLE51_SLAVES:
        run = simulate_sync(params, cfg, PhaseState(*TABLE51_MASTER), PhaseState(*ic),
                            t_ctl, DT, STRIDE)
        ctl_runs[ic] = run
        late = run.t > SYNC_SETTLE_TIME
        err = float(np.abs(run.error[late]).max())
        if not quick:
            lam_c = largest_lyapunov(run.slave.x_r, run.slave.dt_sample).slope
            ctl_lle[ic] = lam_c
            log(f"  slave {ic}: max|e| (t>{SYNC_SETTLE_TIME:g}) = {err:.2e}, "
                f"controlled lambda = {lam_c:+.4f}")
            verdicts.append(Verdict(
                f"sync error bound, slave {ic}", err < SYNC_ERROR_BOUND,
                f"max|e_i| = {err:.3e} vs bound {SYNC_ERROR_BOUND}"))
            verdicts.append(Verdict(
                f"controlled exponent, slave {ic}", abs(lam_c) < CONTROLLED_LLE_BOUND,
                f"lambda = {lam_c:+.4f} vs bound {CONTROLLED_LLE_BOUND}"))
            verdicts.append(Verdict(
                f"lyapunov descent, slave {ic}",
                _lyapunov_descent_ok(run),
                "V' <= 0 at all samples and V non-increasing within 1e-9/step"))

    log("# alternate-target runs (one slave onto three masters)")
    alt_runs: List[Tuple[Tuple[float, ...], SyncRun]] = []
    for m0 in TABLE52_MASTERS:
        run = simulate_sync(params, cfg, PhaseState(*m0), PhaseState(*TABLE52_SLAVE),
                            t_ctl, DT, STRIDE)
        alt_runs.append((m0, run))
    strong_run = simulate_sync(params, cfg, PhaseState(*TABLE53_MASTER),
                               PhaseState(*TABLE53_SLAVE), t_ctl, DT, STRIDE)
    if not quick:
        late = strong_run.t > SYNC_SETTLE_TIME
        err = float(np.abs(strong_run.error[late]).max())
        verdicts.append(Verdict(
            "strong-chaos synchronization", err < SYNC_ERROR_BOUND,
            f"max|e_i| (t>{SYNC_SETTLE_TIME:g}) = {err:.3e}"))
        lam_strong_c = largest_lyapunov(strong_run.slave.x_r,
                                        strong_run.slave.dt_sample).slope
        ctl_lle[TABLE53_SLAVE] = lam_strong_c
        for m0, run in alt_runs:
            lam_c = largest_lyapunov(run.slave.x_r, run.slave.dt_sample).slope
            ctl_lle[("alt",) + m0] = lam_c
            verdicts.append(Verdict(
                f"controlled < uncontrolled, master {m0}",
                lam_c < unc_lle[TABLE52_SLAVE],
                f"{lam_c:+.4f} < {unc_lle[TABLE52_SLAVE]:+.4f}"))
        verdicts.append(Verdict(
            "controlled < uncontrolled, strong-chaos run",
            lam_strong_c < unc_lle[TABLE53_SLAVE],
            f"{lam_strong_c:+.4f} < {unc_lle[TABLE53_SLAVE]:+.4f}"))

    log("# gain sweeps")
    gain_table: List[Tuple[str, float, float, float]] = []
    if not quick:
        t_reach_q, t_reach_r = [], []
        tv_q, tv_r = [], []
        for qv in GAIN_SWEEP:
            run = simulate_sync(params, ControllerConfig(q=qv, r=1.0),
                                PhaseState(*TABLE51_MASTER), PhaseState(*TABLE52_SLAVE),
                                SWEEP_T_FINAL, DT, SWEEP_STRIDE)
            tr = reaching_time(run)
            tv = control_variation(run, tr)
            t_reach_q.append(tr)
            tv_q.append(tv)
            gain_table.append((f"q={qv:g} (r=1)", qv, tr, tv))
        for rv in GAIN_SWEEP:
            run = simulate_sync(params, ControllerConfig(q=1.0, r=rv),
                                PhaseState(*TABLE51_MASTER), PhaseState(*TABLE52_SLAVE),
                                SWEEP_T_FINAL, DT, SWEEP_STRIDE)
            tr = reaching_time(run)
            tv = control_variation(run, tr)
            t_reach_r.append(tr)
            tv_r.append(tv)
            gain_table.append((f"r={rv:g} (q=1)", rv, tr, tv))
        for label, series in (("q", t_reach_q), ("r", t_reach_r)):
            mono = all(series[i] > series[i + 1] for i in range(len(series) - 1))
            verdicts.append(Verdict(
                f"reaching time decreases with {label}", mono,
                f"T_reach over {label} in {GAIN_SWEEP}: "
                + ", ".join(f"{v:.3f}" for v in series)))
        verdicts.append(Verdict(
            "chattering contrast (q-sweep max > r-sweep max)", tv_q[-1] > tv_r[-1],
            f"TV(u) q=6: {tv_q[-1]:.3f} vs r=6: {tv_r[-1]:.3f}"))
        for label, g, tr, tv in gain_table:
            log(f"  {label}: T_reach = {tr:.3f}, TV(u) = {tv:.3f}")

    log("# spectra")
    if not quick:
        for ic in TABLE51_SLAVES:
            spec_u = periodogram(unc_traj[ic].x_r, unc_traj[ic].dt_sample)
            spec_c = periodogram(ctl_runs[ic].slave.x_r, ctl_runs[ic].slave.dt_sample)
            flat_u, flat_c = spectral_flatness(spec_u), spectral_flatness(spec_c)
            n_dom = len(dominant_peaks(spec_c))
            frac = top_peak_power_fraction(spec_c)
            log(f"  ic={ic}: flatness {flat_c:.3e} (ctl) vs {flat_u:.3e} (unc), "
                f"{n_dom} dominant peaks, top-2 fraction {frac:.3f}")
            verdicts.append(Verdict(
                f"flatness contrast, slave {ic}", flat_c < flat_u,
                f"{flat_c:.3e} < {flat_u:.3e}"))
            verdicts.append(Verdict(
                f"two dominant peaks, slave {ic}", n_dom == 2,
                f"found {n_dom}"))
            verdicts.append(Verdict(
                f"top-2 peak power fraction, slave {ic}", frac >= TOP2_FRACTION_MIN,
                f"{frac:.3f} >= {TOP2_FRACTION_MIN}"))

    rows = []
    for ic, paper in zip(TABLE51_SLAVES, TABLE51_PAPER):
        rows.append(ChaosReportRow(ic, TABLE51_MASTER,
                                   unc_lle.get(ic), ctl_lle.get(ic)))
    for m0, _ in alt_runs:
        rows.append(ChaosReportRow(TABLE52_SLAVE, m0,
                                   unc_lle.get(TABLE52_SLAVE), ctl_lle.get(("alt",) + m0)))
    rows.append(ChaosReportRow(TABLE53_SLAVE, TABLE53_MASTER,
                               unc_lle.get(TABLE53_SLAVE), ctl_lle.get(TABLE53_SLAVE)))
    text, csv_text = chaos_report(rows)
    log("# exponent comparison")
    log(text)
    for v in verdicts:
        log(f"[{'PASS' if v.passed else 'FAIL'}] {v.name}: {v.detail}")

    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "exponent_report.txt"), "w") as fh:
            fh.write(text)
        with open(os.path.join(out_dir, "exponent_report.csv"), "w") as fh:
            fh.write(csv_text)
        with open(os.path.join(out_dir, "verdicts.txt"), "w") as fh:
            for v in verdicts:
                fh.write(f"[{'PASS' if v.passed else 'FAIL'}] {v.name}: {v.detail}\n")
        if gain_table:
            with open(os.path.join(out_dir, "gain_study.csv"), "w") as fh:
                fh.write("sweep,gain,t_reach,total_variation\n")
                for label, g, tr, tv in gain_table:
                    fh.write(f"{label.split()[0]},{g:g},{tr:.6f},{tv:.6f}\n")

    return StudyResult(verdicts=verdicts, uncontrolled_lle=unc_lle,
                       controlled_lle=ctl_lle, report_text=text,
                       report_csv=csv_text, gain_table=gain_table)


def _lyapunov_descent_ok(run: SyncRun, per_step_tol: float = 1e-9) -> bool:
    s = run.sliding
    cfg = run.config
    vdot = -cfg.r * s * s - cfg.q * s * np.array(
        [np.sign(si) if abs(si) > cfg.epsilon else si / cfg.epsilon for si in s])
    if np.any(vdot > 0):
        return False
    v = run.lyap_v
    return bool(np.all(np.diff(v) <= per_step_tol))
