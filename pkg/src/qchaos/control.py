"""Master-slave synchronization of the first-excited-state dynamics.

The slave system is driven onto the master's orbit by active cancellation
of the nonlinear (pole) term plus a sliding-mode switching law on the
4-dimensional tracking error e = slave - master. The sliding value is
s = C.e; the switching input w drives s' = -r s - q sat(s) exactly, so
V = s^2/2 decreases monotonically along the closed loop.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import NodalSingularityError, UncontrollableSurfaceError
from .integrate import PhaseState, Trajectory
from .oscillator import DELTA_SING, OscillatorParams

SYNC_CSV_COLUMNS = (
    "t",
    "m_x_r", "m_x_i", "m_y_r", "m_y_i",
    "s_x_r", "s_x_i", "s_y_r", "s_y_i",
    "e1", "e2", "e3", "e4",
    "u1", "u2", "u3", "u4",
    "s", "V",
)


def routh_hurwitz(c1: float, c2: float, c3: float) -> bool:
    """Stability of x^3 + c3 x^2 + c2 x + c1 via the Routh table conditions."""
    return c3 > 0 and c1 > 0 and c2 * c3 > c1


def saturation(s: float, epsilon: float) -> float:
    """Boundary-layer switching function: sign(s) outside |s| > epsilon, linear inside."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if s > epsilon:
        return 1.0
    if s < -epsilon:
        return -1.0
    return s / epsilon


@dataclass(frozen=True)
class ControllerConfig:
    """Sliding surface row C, gain column K, switching gains and layer width.

    C's last entry must be 1 and (c1, c2, c3) must pass the Routh-Hurwitz
    check; K's second and fourth entries must be 0 (the imaginary channels
    carry no direct switching authority).
    """

    c: Tuple[float, float, float, float] = (1.0, 2.0, 2.0, 1.0)
    k: Tuple[float, float, float, float] = (1.0, 0.0, 1.0, 0.0)
    q: float = 1.0
    r: float = 1.0
    epsilon: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        object.__setattr__(self, "k", tuple(float(v) for v in self.k))
        if len(self.c) != 4 or len(self.k) != 4:
            raise ValueError("c and k must have 4 entries")
        if self.c[3] != 1.0:
            raise ValueError(f"last entry of c must be 1, got {self.c[3]}")
        if self.k[1] != 0.0 or self.k[3] != 0.0:
            raise ValueError("entries 2 and 4 of k must be 0 (unobservable channels)")
        if self.q <= 0 or self.r <= 0:
            raise ValueError("switching gains q and r must be positive")
        if self.epsilon <= 0:
            raise ValueError("boundary-layer width epsilon must be positive")
        if self.ck() == 0.0:
            raise UncontrollableSurfaceError("C.K == 0: surface unreachable through K")
        if not routh_hurwitz(self.c[0], self.c[1], self.c[2]):
            raise ValueError(
                f"(c1, c2, c3) = {self.c[:3]} fails the Routh-Hurwitz stability check"
            )

    def ck(self) -> float:
        return sum(ci * ki for ci, ki in zip(self.c, self.k))


def linear_matrix(params: OscillatorParams) -> np.ndarray:
    """Linear block A of the real-split first-excited dynamics x' = A x + f(x)."""
    a3, a4, a5 = params.a3, params.a4, params.a5
    return np.array([
        [0.0, 2.0 * a3, a4, 0.0],
        [-2.0 * a3, 0.0, 0.0, a4],
        [a4, 0.0, 0.0, 2.0 * a5],
        [0.0, a4, -2.0 * a5, 0.0],
    ])


def nonlinear_term(params: OscillatorParams, state: Sequence[float],
                   delta_sing: float = DELTA_SING) -> np.ndarray:
    """Real-split pole term f(x) of the first-excited field.

    Equals the real/imaginary split of (-i a1 / N, b1 / N) with
    N = a1*x + i*b1*y; raises at the node.
    """
    a1, b1 = params.a1, params.b1
    x1r, x1i, x2r, x2i = state
    den = (a1 * a1 * (x1r * x1r + x1i * x1i) + b1 * b1 * (x2r * x2r + x2i * x2i)
           + 2.0 * a1 * b1 * (x1i * x2r - x1r * x2i))
    if den <= delta_sing * delta_sing:
        raise NodalSingularityError(f"|node|^2 = {den:.3e} at the wavefunction node")
    return np.array([
        -(a1 * a1 * x1i + a1 * b1 * x2r) / den,
        -(a1 * a1 * x1r - a1 * b1 * x2i) / den,
        (a1 * b1 * x1r - b1 * b1 * x2i) / den,
        -(b1 * b1 * x2r + a1 * b1 * x1i) / den,
    ])


def sliding_value(cfg: ControllerConfig, e: Sequence[float]) -> float:
    """s = C.e"""
    return float(np.dot(cfg.c, e))


def balance_control(cfg: ControllerConfig, a_matrix: np.ndarray,
                    e: Sequence[float]) -> float:
    """Equivalent control w_eq keeping the state on the surface (s' = 0)."""
    ck = cfg.ck()
    if ck == 0.0:
        raise UncontrollableSurfaceError("C.K == 0")
    return float(-(np.asarray(cfg.c) @ a_matrix @ np.asarray(e)) / ck)


def switching_control(cfg: ControllerConfig, a_matrix: np.ndarray,
                      e: Sequence[float]) -> float:
    """Full scalar control w = -(CK)^-1 [C (rI + A) e + q sat(s)].

    With q -> 0, r -> 0 this reduces to the pure balance control.
    """
    ck = cfg.ck()
    if ck == 0.0:
        raise UncontrollableSurfaceError("C.K == 0")
    e = np.asarray(e, dtype=float)
    c = np.asarray(cfg.c)
    s = float(c @ e)
    return float(-(c @ (cfg.r * e + a_matrix @ e) + cfg.q * saturation(s, cfg.epsilon)) / ck)


def control_input(cfg: ControllerConfig, master_state: Sequence[float],
                  slave_state: Sequence[float], a_matrix: np.ndarray,
                  params: OscillatorParams) -> np.ndarray:
    """Active-cancellation input u = K w - [f(slave) - f(master)]."""
    m = np.asarray(master_state, dtype=float)
    sl = np.asarray(slave_state, dtype=float)
    w = switching_control(cfg, a_matrix, sl - m)
    f_diff = nonlinear_term(params, sl) - nonlinear_term(params, m)
    return np.asarray(cfg.k) * w - f_diff


@dataclass
class SyncRun:
    """Joint record of a controlled master-slave simulation."""

    master: Trajectory
    slave: Trajectory
    error: np.ndarray       # (n, 4)
    control: np.ndarray     # (n, 4) u(t)
    sliding: np.ndarray     # (n,)   s(t)
    lyap_v: np.ndarray      # (n,)   V(t) = s^2/2
    w: np.ndarray           # (n,)   switching input
    w_eq: np.ndarray        # (n,)   balance control
    h_input: np.ndarray     # (n, 4) K w(t)
    f_diff: np.ndarray      # (n, 4) f(slave) - f(master)
    a_matrix: np.ndarray    # (4, 4)
    config: ControllerConfig = field(default_factory=ControllerConfig)

    @property
    def t(self) -> np.ndarray:
        return self.master.t

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(SYNC_CSV_COLUMNS) + "\n")
        t = self.t
        for i in range(len(t)):
            vals = [t[i], *self.master.states[i], *self.slave.states[i],
                    *self.error[i], *self.control[i], self.sliding[i], self.lyap_v[i]]
            buf.write(",".join("%.17g" % v for v in vals) + "\n")
        return buf.getvalue()


def simulate_sync(params: OscillatorParams, cfg: ControllerConfig,
                  master0: PhaseState, slave0: PhaseState,
                  t_final: float, dt: float = 1e-3,
                  sample_stride: int = 10,
                  delta_sing: float = DELTA_SING) -> SyncRun:
    """Jointly integrate the 8D master+slave system with the controller active.

    The control input is evaluated inside every RK4 stage (continuous-time
    idealization). Per-sample diagnostics (e, u, s, V, w, w_eq) are
    recomputed from the stored samples after integration.
    """
    if dt <= 0 or t_final <= 0 or sample_stride < 1:
        raise ValueError("need dt > 0, t_final > 0, sample_stride >= 1")
    a = linear_matrix(params)
    kvec = np.asarray(cfg.k)
    cvec = np.asarray(cfg.c)
    ck = cfg.ck()
    q, r, eps = cfg.q, cfg.r, cfg.epsilon
    ri_a = r * np.eye(4) + a

    def rhs(joint: np.ndarray) -> np.ndarray:
        m = joint[:4]
        sl = joint[4:]
        e = sl - m
        s = float(cvec @ e)
        w = -(float(cvec @ (ri_a @ e)) + q * saturation(s, eps)) / ck
        fm = nonlinear_term(params, m, delta_sing)
        fs = nonlinear_term(params, sl, delta_sing)
        u = kvec * w - (fs - fm)
        out = np.empty(8)
        out[:4] = a @ m + fm
        out[4:] = a @ sl + fs + u
        return out

    joint = np.concatenate([master0.as_array(), slave0.as_array()])
    n_steps = round(t_final / dt)
    rows = [joint.copy()]
    truncated = False
    abort_time = None
    try:
        for i in range(1, n_steps + 1):
            k1 = rhs(joint)
            k2 = rhs(joint + (0.5 * dt) * k1)
            k3 = rhs(joint + (0.5 * dt) * k2)
            k4 = rhs(joint + dt * k3)
            joint = joint + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
            if i % sample_stride == 0:
                rows.append(joint.copy())
    except NodalSingularityError:
        truncated = True
        abort_time = i * dt
    data = np.array(rows)
    meta = {"dt": dt, "sample_stride": sample_stride, "t_final": t_final,
            "beta": params.beta, "gamma": params.gamma}
    dt_s = dt * sample_stride
    master = Trajectory(0.0, dt_s, data[:, :4], meta=dict(meta, role="master"),
                        truncated=truncated, abort_time=abort_time)
    slave = Trajectory(0.0, dt_s, data[:, 4:], meta=dict(meta, role="slave"),
                       truncated=truncated, abort_time=abort_time)

    n = data.shape[0]
    error = data[:, 4:] - data[:, :4]
    sliding = error @ cvec
    lyap_v = 0.5 * sliding * sliding
    w_arr = np.empty(n)
    weq_arr = np.empty(n)
    u_arr = np.empty((n, 4))
    fdiff_arr = np.empty((n, 4))
    for i in range(n):
        e = error[i]
        s = sliding[i]
        w_arr[i] = -(float(cvec @ (ri_a @ e)) + q * saturation(float(s), eps)) / ck
        weq_arr[i] = -(float(cvec @ (a @ e))) / ck
        try:
            fd = (nonlinear_term(params, data[i, 4:], delta_sing)
                  - nonlinear_term(params, data[i, :4], delta_sing))
        except NodalSingularityError:
            fd = np.full(4, np.nan)
        fdiff_arr[i] = fd
        u_arr[i] = kvec * w_arr[i] - fd
    return SyncRun(master=master, slave=slave, error=error, control=u_arr,
                   sliding=sliding, lyap_v=lyap_v, w=w_arr, w_eq=weq_arr,
                   h_input=np.outer(w_arr, kvec), f_diff=fdiff_arr,
                   a_matrix=a, config=cfg)


def lyapunov_series(run: SyncRun, cfg: Optional[ControllerConfig] = None) -> np.ndarray:
    """Per-sample (t, V, V') with V = s^2/2 and V' = -r s^2 - q s sat(s)."""
    cfg = cfg or run.config
    s = run.sliding
    v = 0.5 * s * s
    vdot = np.array([-cfg.r * si * si - cfg.q * si * saturation(float(si), cfg.epsilon)
                     for si in s])
    return np.column_stack([run.t, v, vdot])


def reaching_time(run: SyncRun, cfg: Optional[ControllerConfig] = None) -> Optional[float]:
    """First sample time after which |s| stays inside the boundary layer."""
    cfg = cfg or run.config
    inside = np.abs(run.sliding) < cfg.epsilon
    if not inside[-1]:
        return None
    idx = len(inside)
    while idx > 0 and inside[idx - 1]:
        idx -= 1
    return float(run.t[idx])


def control_variation(run: SyncRun, after_t: float) -> float:
    """Total variation (sum of step-to-step Euclidean increments) of u after after_t."""
    mask = run.t > after_t
    u = run.control[mask]
    if u.shape[0] < 2:
        return 0.0
    return float(np.linalg.norm(np.diff(u, axis=0), axis=1).sum())
