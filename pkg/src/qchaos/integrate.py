"""Fixed-step RK4 integration of complex velocity fields with uniform sampling.

Integration is deterministic: identical inputs produce bit-identical
trajectories. A nodal-singularity abort truncates the trajectory at the
last stored sample and flags it instead of raising.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import GridMismatchError, NodalSingularityError
from .oscillator import ComplexPoint, VelocityField

DEFAULT_DT = 1e-3
DEFAULT_STRIDE = 10

CSV_COLUMNS = ("t", "x_r", "x_i", "y_r", "y_i")


@dataclass(frozen=True)
class PhaseState:
    """Real 4-component view (x_r, x_i, y_r, y_i) of a complex plane point."""

    x_r: float
    x_i: float
    y_r: float
    y_i: float

    def __post_init__(self):
        if not all(np.isfinite(v) for v in (self.x_r, self.x_i, self.y_r, self.y_i)):
            raise ValueError("PhaseState components must be finite")

    @classmethod
    def from_complex(cls, p: ComplexPoint) -> "PhaseState":
        return cls(p.x.real, p.x.imag, p.y.real, p.y.imag)

    def to_complex(self) -> ComplexPoint:
        return ComplexPoint(complex(self.x_r, self.x_i), complex(self.y_r, self.y_i))

    def as_array(self) -> np.ndarray:
        return np.array([self.x_r, self.x_i, self.y_r, self.y_i])


@dataclass
class Trajectory:
    """Uniformly sampled time series of phase states."""

    t0: float
    dt_sample: float
    states: np.ndarray                      # shape (n, 4): x_r, x_i, y_r, y_i
    meta: dict = field(default_factory=dict)
    truncated: bool = False
    abort_time: Optional[float] = None

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=float)
        if self.states.ndim != 2 or self.states.shape[1] != 4 or self.states.shape[0] == 0:
            raise ValueError("states must be a nonempty (n, 4) array")
        if self.dt_sample <= 0:
            raise ValueError("dt_sample must be positive")

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def t(self) -> np.ndarray:
        return self.t0 + np.arange(len(self)) * self.dt_sample

    @property
    def x_r(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def x_i(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def y_r(self) -> np.ndarray:
        return self.states[:, 2]

    @property
    def y_i(self) -> np.ndarray:
        return self.states[:, 3]

    def state_at(self, index: int) -> PhaseState:
        row = self.states[index]
        return PhaseState(row[0], row[1], row[2], row[3])

    def same_grid(self, other: "Trajectory") -> bool:
        return (self.t0 == other.t0 and self.dt_sample == other.dt_sample
                and len(self) == len(other))

    def to_csv(self) -> str:
        """CSV with 17-significant-digit floats (lossless float64 round-trip)."""
        buf = io.StringIO()
        buf.write(",".join(CSV_COLUMNS) + "\n")
        t = self.t
        for i in range(len(self)):
            row = self.states[i]
            buf.write("%.17g,%.17g,%.17g,%.17g,%.17g\n"
                      % (t[i], row[0], row[1], row[2], row[3]))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, meta: Optional[dict] = None) -> "Trajectory":
        lines = [ln for ln in text.strip().splitlines() if ln]
        header = lines[0].split(",")
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {header}")
        data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        if data.shape[0] < 1:
            raise ValueError("empty trajectory CSV")
        t0 = data[0, 0]
        dt = data[1, 0] - data[0, 0] if data.shape[0] > 1 else 1.0
        return cls(t0=t0, dt_sample=dt, states=data[:, 1:], meta=meta or {})


def integrate(field_fn: VelocityField, initial: PhaseState, t_final: float,
              dt: float = DEFAULT_DT, sample_stride: int = DEFAULT_STRIDE,
              t0: float = 0.0, meta: Optional[dict] = None) -> Trajectory:
    """Integrate dx/dt = field(x, y) with classical RK4 at fixed step dt.

    Samples every sample_stride steps (the initial state is sample 0).
    If the field raises NodalSingularityError the trajectory is truncated
    at the last stored sample and returned with truncated=True.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    if sample_stride < 1:
        raise ValueError("sample_stride must be >= 1")
    n_steps = round(t_final / dt)
    x = complex(initial.x_r, initial.x_i)
    y = complex(initial.y_r, initial.y_i)
    rows = [(x.real, x.imag, y.real, y.imag)]
    sixth = dt / 6.0
    half = dt / 2.0
    truncated = False
    abort_time = None
    try:
        for i in range(1, n_steps + 1):
            vx1, vy1 = field_fn(x, y)
            vx2, vy2 = field_fn(x + half * vx1, y + half * vy1)
            vx3, vy3 = field_fn(x + half * vx2, y + half * vy2)
            vx4, vy4 = field_fn(x + dt * vx3, y + dt * vy3)
            x = x + sixth * (vx1 + 2.0 * (vx2 + vx3) + vx4)
            y = y + sixth * (vy1 + 2.0 * (vy2 + vy3) + vy4)
            if i % sample_stride == 0:
                rows.append((x.real, x.imag, y.real, y.imag))
    except NodalSingularityError:
        truncated = True
        abort_time = t0 + i * dt
    info = dict(meta or {})
    info.update({"dt": dt, "sample_stride": sample_stride, "t_final": t_final})
    return Trajectory(t0=t0, dt_sample=dt * sample_stride, states=np.array(rows),
                      meta=info, truncated=truncated, abort_time=abort_time)


def pair_divergence(a: Trajectory, b: Trajectory) -> np.ndarray:
    """Pointwise separation of the real projections (x_r, y_r) of two runs.

    Returns an (n, 2) array of (t, separation). Both trajectories must share
    the sampling grid exactly.
    """
    if not a.same_grid(b):
        raise GridMismatchError(
            f"grids differ: t0 {a.t0} vs {b.t0}, dt {a.dt_sample} vs {b.dt_sample}, "
            f"len {len(a)} vs {len(b)}"
        )
    sep = np.hypot(a.x_r - b.x_r, a.y_r - b.y_r)
    return np.column_stack([a.t, sep])
