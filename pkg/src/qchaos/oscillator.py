"""Dimensionless model of the 2D charged anisotropic oscillator in complex coordinates.

Everything downstream (trajectories, control, diagnostics) consumes the
coefficient set derived here from the two dimensionless knobs:
beta (cyclotron / trap frequency ratio) and gamma (in-plane trap ratio).
Coordinates x, y are complex; velocity fields are the complex log-derivative
fields -i d(ln psi)/dx, -i d(ln psi)/dy of the eigenstate wavefunctions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DegenerateAnisotropyError,
    NodalSingularityError,
    UnsupportedParametersError,
)

# Floor on |a1*x + i*b1*y| and |psi| below which pole terms are not evaluated.
DELTA_SING = 1e-6
# Step for complex central differences; error O(h^2) ~ 1e-8.
FD_STEP = 1e-4

VelocityField = Callable[[complex, complex], Tuple[complex, complex]]


@dataclass(frozen=True)
class OscillatorParams:
    """Model constants derived from (beta, gamma); immutable and shareable."""

    beta: float
    gamma: float
    branch: str
    rho1: float
    rho2: float
    eta1: float
    eta2: float
    mu1: float
    mu2: float
    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    b1: float
    b2: float
    cap_d: float
    cap_g: float


def derive_params(beta: float, gamma: float, branch: str = "plus") -> OscillatorParams:
    """Derive the full coefficient set from (beta, gamma).

    branch selects the sign pair of the two free +/- choices in the
    (rho1, rho2) conversion; "plus" is the choice that reproduces the
    reference numeric values a1=0.9868 ... b1=0.2668 at beta=0.8, gamma=0.4.
    beta == 0 uses the analytic decoupled limit rho1 = rho2 = 0.
    """
    if branch not in ("plus", "minus"):
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    if gamma == 1.0:
        raise DegenerateAnisotropyError(
            "gamma == 1 degenerates the coefficient formulas (sign(1 - gamma^2) = 0)"
        )
    sign = 1.0 if branch == "plus" else -1.0
    sg = math.copysign(1.0, 1.0 - gamma * gamma)
    s = 1.0 + gamma * gamma + beta * beta
    disc = s * s - 4.0 * gamma * gamma
    root = math.sqrt(disc)
    if beta == 0.0:
        rho1 = 0.0
        rho2 = 0.0
    else:
        rho1 = ((gamma * gamma - 1.0) + sign * root) / (2.0 * beta)
        rho2 = sign * beta / root
    eta1 = math.sqrt((s + sg * root) / 2.0)
    eta2 = math.sqrt((s - sg * root) / 2.0)
    mu1 = 2.0 * root / (sg * (1.0 - gamma * gamma + beta * beta) + root)
    mu2 = 2.0 * root / (sg * (1.0 - gamma * gamma - beta * beta) + root)
    m1e1 = mu1 * eta1
    m2e2 = mu2 * eta2
    p = rho2 * rho2 * m1e1 * m2e2 + 1.0
    a1 = math.sqrt(m1e1) / p
    b1 = rho2 * m2e2 * math.sqrt(m1e1) / p
    a2 = rho2 * m1e1 * math.sqrt(m2e2) / p
    b2 = math.sqrt(m2e2) / p
    a3 = -m1e1 / (2.0 * p)
    a4 = rho1 - rho2 * m1e1 * m2e2 / p
    a5 = -m2e2 / (2.0 * p)
    cap_d = math.sqrt(2.0 * rho2 * rho2 * m1e1 * m2e2 / p)
    cap_g = -sg * math.sqrt(2.0 / p)
    return OscillatorParams(
        beta=beta, gamma=gamma, branch=branch,
        rho1=rho1, rho2=rho2, eta1=eta1, eta2=eta2, mu1=mu1, mu2=mu2,
        a1=a1, a2=a2, a3=a3, a4=a4, a5=a5, b1=b1, b2=b2,
        cap_d=cap_d, cap_g=cap_g,
    )


@dataclass(frozen=True)
class EigenstateSpec:
    """Quantum numbers, optionally a linear combination of eigenstates.

    superposition entries are (complex coefficient, n1, n2); when present the
    (n1, n2) pair of the spec itself is ignored for evaluation.
    """

    n1: int = 0
    n2: int = 0
    superposition: Optional[Sequence[Tuple[complex, int, int]]] = None

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("quantum numbers must be non-negative")
        if self.superposition is not None:
            if not any(c != 0 for c, _, _ in self.superposition):
                raise ValueError("superposition needs at least one nonzero coefficient")
            for _, m1, m2 in self.superposition:
                if m1 < 0 or m2 < 0:
                    raise ValueError("quantum numbers must be non-negative")


@dataclass(frozen=True)
class ComplexPoint:
    """A point of the complex configuration plane (x, y both complex)."""

    x: complex
    y: complex

    def __post_init__(self):
        if not (cmath.isfinite(self.x) and cmath.isfinite(self.y)):
            raise ValueError("ComplexPoint components must be finite")


def energy(params: OscillatorParams, n1: int, n2: int) -> float:
    """Dimensionless eigenenergy (n1 + 1/2) eta1 + (n2 + 1/2) eta2."""
    if n1 < 0 or n2 < 0:
        raise ValueError("quantum numbers must be non-negative")
    return (n1 + 0.5) * params.eta1 + (n2 + 0.5) * params.eta2


def hermite_poly(n: int, z: complex) -> complex:
    """Physicists' Hermite polynomial H_n(z) by the three-term recurrence."""
    if n < 0:
        raise ValueError("Hermite order must be non-negative")
    if n == 0:
        return 1.0 + 0.0j
    h_prev, h = 1.0 + 0.0j, 2.0 * z
    for k in range(1, n):
        h_prev, h = h, 2.0 * z * h - 2.0 * k * h_prev
    return h


def hyp2f1_terminating(a: float, b: float, c: float, z: float) -> float:
    """Terminating Gauss hypergeometric sum 2F1(a, b; c; z).

    Requires a or b to be a non-positive integer so the series terminates;
    raises UnsupportedParametersError otherwise, or when a zero of the
    Pochhammer factor (c)_k is hit before termination.
    """
    def stop_index(v: float) -> Optional[int]:
        if v <= 0 and abs(v - round(v)) < 1e-12:
            return int(round(-v))
        return None

    na, nb = stop_index(a), stop_index(b)
    if na is None and nb is None:
        raise UnsupportedParametersError(
            f"2F1 series does not terminate for a={a}, b={b}"
        )
    n_terms = min(x for x in (na, nb) if x is not None)
    total = 1.0
    term = 1.0
    for k in range(n_terms):
        ck = c + k
        if abs(ck) < 1e-12:
            raise UnsupportedParametersError(
                f"2F1 hits zero denominator (c)_{k + 1} for c={c} before termination"
            )
        term *= (a + k) * (b + k) / ck * z / (k + 1)
        total += term
    return total


def coeff_ckl(params: OscillatorParams, n1: int, n2: int, k: int, l: int) -> float:
    """Expansion coefficient c_kl(n1, n2), normalized so c_00 == 1.

    Zero whenever k + l is odd. Only the overall-scale-free combination
    enters any observable (velocity fields are log-derivatives), so the
    c_00 = 1 normalization is free of physical consequence.
    """
    if not (0 <= k <= n1 and 0 <= l <= n2):
        raise ValueError(f"indices out of range: k={k} (0..{n1}), l={l} (0..{n2})")
    if (k + l) % 2 == 1:
        return 0.0
    if k == 0 and l == 0:
        return 1.0
    d, g = params.cap_d, params.cap_g
    if d == 0.0:
        # beta == 0 decouples the axes; only c_00 survives in printable form
        raise UnsupportedParametersError(
            "c_kl beyond c_00 is indeterminate in the zero-field limit (D = 0)"
        )
    raw = (
        2.0 ** (2 * k + l)
        * math.comb(n1, k)
        * math.comb(n2, l)
        * math.gamma((k + l + 1) / 2.0)
        * (d * g) ** l
        * (2.0 * d * d - 1.0) ** ((k - l) // 2)
        * hyp2f1_terminating(
            -l / 2.0,
            (1.0 - l) / 2.0,
            (1.0 - k - l) / 2.0,
            1.0 / (2.0 * d * d) + 1.0 / (2.0 * g * g) - 1.0 / (4.0 * d * d * g * g),
        )
    )
    return raw / math.gamma(0.5)  # divide out the raw c_00 value sqrt(pi)


def _quadratic_exponent(params: OscillatorParams, x: complex, y: complex) -> complex:
    return params.a3 * x * x + 1j * params.a4 * x * y + params.a5 * y * y


def _node_factor_x(params: OscillatorParams, x: complex, y: complex) -> complex:
    # Nodal prefactor of the x-excited state; also the pole of its velocity field.
    return params.a1 * x + 1j * params.b1 * y


def _node_factor_y(params: OscillatorParams, x: complex, y: complex) -> complex:
    return params.a2 * x - 1j * params.b2 * y


def _eval_single(params: OscillatorParams, n1: int, n2: int,
                 x: complex, y: complex, t: float) -> complex:
    pref = 0.0 + 0.0j
    arg1 = math.sqrt(2.0) * _node_factor_x(params, x, y)
    arg2 = math.sqrt(2.0) * _node_factor_y(params, x, y)
    for k in range(n1 + 1):
        for l in range(n2 + 1):
            c = coeff_ckl(params, n1, n2, k, l)
            if c == 0.0:
                continue
            pref += c * hermite_poly(n1 - k, arg1) * hermite_poly(n2 - l, arg2)
    phase = cmath.exp(-1j * energy(params, n1, n2) * t)
    return pref * cmath.exp(_quadratic_exponent(params, x, y)) * phase


def eval_eigenstate(params: OscillatorParams, spec: EigenstateSpec,
                    p: ComplexPoint, t: float = 0.0) -> complex:
    """Wavefunction value at a complex point, including the e^{-i E t} phase."""
    if spec.superposition is not None:
        return sum(
            c * _eval_single(params, m1, m2, p.x, p.y, t)
            for c, m1, m2 in spec.superposition
        )
    return _eval_single(params, spec.n1, spec.n2, p.x, p.y, t)


def velocity_ground(params: OscillatorParams, p: ComplexPoint) -> Tuple[complex, complex]:
    """Ground-state velocity field: linear, globally smooth."""
    vx = -1j * (2.0 * params.a3 * p.x + 1j * params.a4 * p.y)
    vy = -1j * (1j * params.a4 * p.x + 2.0 * params.a5 * p.y)
    return vx, vy


def velocity_excited(params: OscillatorParams, p: ComplexPoint,
                     delta_sing: float = DELTA_SING) -> Tuple[complex, complex]:
    """First-excited-state velocity field: linear part plus the nodal pole term."""
    node = _node_factor_x(params, p.x, p.y)
    if abs(node) <= delta_sing:
        raise NodalSingularityError(
            f"|a1*x + i*b1*y| = {abs(node):.3e} <= {delta_sing:.1e} at the wavefunction node"
        )
    vx = -2j * params.a3 * p.x + params.a4 * p.y - 1j * params.a1 / node
    vy = params.a4 * p.x - 2j * params.a5 * p.y + params.b1 / node
    return vx, vy


def ground_state_field(params: OscillatorParams) -> VelocityField:
    """Velocity field closure for the integrator (ground state)."""
    a3, a4, a5 = params.a3, params.a4, params.a5

    def field(x: complex, y: complex) -> Tuple[complex, complex]:
        return (-2j * a3 * x + a4 * y, a4 * x - 2j * a5 * y)

    return field


def excited_state_field(params: OscillatorParams,
                        delta_sing: float = DELTA_SING) -> VelocityField:
    """Velocity field closure for the integrator (first excited state)."""
    a1, b1 = params.a1, params.b1
    a3, a4, a5 = params.a3, params.a4, params.a5

    def field(x: complex, y: complex) -> Tuple[complex, complex]:
        node = a1 * x + 1j * b1 * y
        if abs(node) <= delta_sing:
            raise NodalSingularityError(
                f"trajectory reached the wavefunction node (|node| = {abs(node):.3e})"
            )
        return (-2j * a3 * x + a4 * y - 1j * a1 / node,
                a4 * x - 2j * a5 * y + b1 / node)

    return field


def _log_ratio(num: complex, den: complex) -> complex:
    # log of a near-unity ratio; avoids branch-cut jumps of log(psi) itself
    return cmath.log(num / den)


def velocity_numeric(params: OscillatorParams, spec: EigenstateSpec,
                     p: ComplexPoint, t: float = 0.0,
                     h: float = FD_STEP,
                     delta_sing: float = DELTA_SING) -> Tuple[complex, complex]:
    """-i d(ln psi)/dx, -i d(ln psi)/dy by complex central differences.

    Independent of any closed-form field expression; this is the ground
    truth the analytic fields are validated against. Invariant under
    rescaling of psi and under the time phase.
    """
    psi0 = eval_eigenstate(params, spec, p, t)
    if abs(psi0) <= delta_sing:
        raise NodalSingularityError(f"|psi| = {abs(psi0):.3e} too close to a node")
    xp = eval_eigenstate(params, spec, ComplexPoint(p.x + h, p.y), t)
    xm = eval_eigenstate(params, spec, ComplexPoint(p.x - h, p.y), t)
    yp = eval_eigenstate(params, spec, ComplexPoint(p.x, p.y + h), t)
    ym = eval_eigenstate(params, spec, ComplexPoint(p.x, p.y - h), t)
    if min(abs(xp), abs(xm), abs(yp), abs(ym)) <= delta_sing:
        raise NodalSingularityError("finite-difference stencil touches a node")
    vx = -1j * _log_ratio(xp, xm) / (2.0 * h)
    vy = -1j * _log_ratio(yp, ym) / (2.0 * h)
    return vx, vy


def quantum_potential(params: OscillatorParams, spec: EigenstateSpec,
                      p: ComplexPoint, h: float = FD_STEP,
                      delta_sing: float = DELTA_SING) -> complex:
    """Quantum potential -(1/2)(d2 ln psi/dx2 + d2 ln psi/dy2).

    Analytic for the single-eigenstate levels n <= 1, numeric second
    log-derivatives otherwise.
    """
    single = spec.superposition is None
    if single and spec.n1 <= 1 and spec.n2 <= 1 and spec.n1 + spec.n2 <= 1:
        base = -(params.a3 + params.a5)
        if spec.n1 == 1:
            node = _node_factor_x(params, p.x, p.y)
            if abs(node) <= delta_sing:
                raise NodalSingularityError("quantum potential diverges at the node")
            return base + (params.a1 ** 2 - params.b1 ** 2) / (2.0 * node * node)
        if spec.n2 == 1:
            node = _node_factor_y(params, p.x, p.y)
            if abs(node) <= delta_sing:
                raise NodalSingularityError("quantum potential diverges at the node")
            return base + (params.a2 ** 2 - params.b2 ** 2) / (2.0 * node * node)
        return complex(base)
    psi0 = eval_eigenstate(params, spec, p)
    if abs(psi0) <= delta_sing:
        raise NodalSingularityError(f"|psi| = {abs(psi0):.3e} too close to a node")
    xp = eval_eigenstate(params, spec, ComplexPoint(p.x + h, p.y))
    xm = eval_eigenstate(params, spec, ComplexPoint(p.x - h, p.y))
    yp = eval_eigenstate(params, spec, ComplexPoint(p.x, p.y + h))
    ym = eval_eigenstate(params, spec, ComplexPoint(p.x, p.y - h))
    if min(abs(xp), abs(xm), abs(yp), abs(ym)) <= delta_sing:
        raise NodalSingularityError("finite-difference stencil touches a node")
    d2x = _log_ratio(xp * xm, psi0 * psi0) / (h * h)
    d2y = _log_ratio(yp * ym, psi0 * psi0) / (h * h)
    return -0.5 * (d2x + d2y)


def classical_potential(params: OscillatorParams, x: complex, y: complex) -> complex:
    """Dimensionless harmonic trap potential (x^2 + gamma y^2)/2 at complex coordinates."""
    return 0.5 * (x * x + params.gamma * y * y)


@dataclass
class PotentialGrid:
    """Real-plane sampling of the total potential at fixed imaginary coordinates."""

    x: np.ndarray            # shape (nx,)
    y: np.ndarray            # shape (ny,)
    x_imag: float
    y_imag: float
    v_total: np.ndarray      # shape (ny, nx), real part; NaN where flagged
    grad_x: np.ndarray       # central-difference -dV/dx is NOT applied; this is dV/dx
    grad_y: np.ndarray
    ok: np.ndarray           # bool mask; False marks not-computable node cells


def total_potential_grid(params: OscillatorParams, spec: EigenstateSpec,
                         x_imag: float, y_imag: float,
                         x_vals: Sequence[float], y_vals: Sequence[float]) -> PotentialGrid:
    """Sample Re(V + Q) on a real-plane lattice with fixed imaginary parts.

    Node cells are flagged in the ok mask (value NaN) instead of raising.
    The returned gradients are central differences of the sampled field,
    NaN-propagating across flagged cells and one-sided at the borders.
    """
    xs = np.asarray(list(x_vals), dtype=float)
    ys = np.asarray(list(y_vals), dtype=float)
    if xs.size == 0 or ys.size == 0:
        raise ValueError("potential grid must be nonempty")
    v = np.full((ys.size, xs.size), np.nan)
    ok = np.zeros((ys.size, xs.size), dtype=bool)
    for iy, yr in enumerate(ys):
        for ix, xr in enumerate(xs):
            pt = ComplexPoint(complex(xr, x_imag), complex(yr, y_imag))
            try:
                q = quantum_potential(params, spec, pt)
            except NodalSingularityError:
                continue
            v[iy, ix] = (classical_potential(params, pt.x, pt.y) + q).real
            ok[iy, ix] = True
    grad_y, grad_x = np.gradient(v, ys, xs)
    return PotentialGrid(x=xs, y=ys, x_imag=x_imag, y_imag=y_imag,
                         v_total=v, grad_x=grad_x, grad_y=grad_y, ok=ok)
