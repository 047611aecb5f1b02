"""Damped/amplified oscillator pair with an exponentially decaying frequency.

The model couples two mirrored lines,

    u'' + L u' + w(t)^2 u = 0        (damped)
    v'' - L v' + w(t)^2 v = 0        (amplified)

with w(t) = omega0 * exp(-L t / (2n+1)) for mode index n. The substitution
x = exp(-t/alpha), z = epsilon * x with alpha = (2n+1)/L and
epsilon = omega0 * alpha turns both lines into the spherical Bessel equation,
so the pair has the closed form

    u = M_n(z) * x^(n+1),    v = M_n(z) * x^(-n),
    M_n = a * j_n + b * y_n.

Both lines also collapse onto a single parametric oscillator
r'' + Omega(t)^2 r = 0 with Omega = sqrt(w^2 - L^2/4) via
u = r/sqrt(2) * exp(-Lt/2), v = r/sqrt(2) * exp(+Lt/2); Omega is real only
while the frequency stays above L/2 (the reality window).

The mirrored branch n -> -(n+1) (growing frequency) is excluded by design.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .bessel import BesselKind, sph_deriv, sph_j, sph_y
from .errors import GridTooCoarse, RealityViolation, UnsupportedBranch
from .ode import integrate_to_grid

__all__ = [
    "SystemParams",
    "ModeIndex",
    "SubstitutionParams",
    "TrajectoryMethod",
    "Trajectory",
    "omega_mode",
    "common_frequency",
    "substitution",
    "closed_form_pair",
    "closed_form_state",
    "closed_form_trajectory",
    "parametric_radius",
    "integrate_pair",
    "integrate_damped_oscillator",
    "residual",
]

# Relative slack when deciding whether w^2 - L^2/4 is a rounded zero at the
# window boundary rather than a genuine reality violation.
_BOUNDARY_SLACK = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Global medium parameters: damping L and propagation speed c.

    The reference frequency of momentum k is omega0 = c * k, and the initial
    momentum threshold is k0 = L / (2c).
    """

    L: float
    c: float = 1.0

    def __post_init__(self):
        for name in ("L", "c"):
            val = getattr(self, name)
            if not isinstance(val, (int, float)) or isinstance(val, bool):
                raise ValueError(f"{name} must be a number, got {val!r}")
            if not math.isfinite(val) or val <= 0:
                raise ValueError(f"{name} must be positive and finite, got {val!r}")

    @property
    def k0(self) -> float:
        return self.L / (2 * self.c)

    def omega0(self, k: float) -> float:
        return self.c * k


@dataclass(frozen=True)
class ModeIndex:
    """A single mode: momentum k > 0 and non-negative integer index n."""

    k: float
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise ValueError(f"n must be an integer, got {self.n!r}")
        if self.n < 0:
            raise UnsupportedBranch(
                "negative n selects the growing-frequency branch n -> -(n+1), "
                "which is not implemented"
            )
        if not isinstance(self.k, (int, float)) or isinstance(self.k, bool):
            raise ValueError(f"k must be a number, got {self.k!r}")
        if not math.isfinite(self.k) or self.k <= 0:
            raise ValueError(f"k must be positive and finite, got {self.k!r}")


@dataclass(frozen=True)
class SubstitutionParams:
    """Derived substitution constants for one (params, mode) pair."""

    alpha: float  # (2n+1)/L, the mode's decay time scale
    epsilon: float  # omega0 * alpha, the t = 0 Bessel argument
    n: int

    def x(self, t: float) -> float:
        return math.exp(-t / self.alpha)

    def z(self, t: float) -> float:
        return self.epsilon * self.x(t)


class TrajectoryMethod(enum.Enum):
    CLOSED_FORM = "closed"
    INTEGRATED = "integrated"


@dataclass
class Trajectory:
    """Sampled pair solution. r is the parametric-oscillator radius, which
    satisfies u * v = r^2 / 2 identically."""

    times: np.ndarray
    u: np.ndarray
    v: np.ndarray
    r: np.ndarray
    mode: ModeIndex
    method: TrajectoryMethod
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        for name in ("u", "v", "r"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != self.times.shape:
                raise ValueError(f"{name} length does not match times")
            setattr(self, name, arr)
        if self.times.size >= 2 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")


def substitution(params: SystemParams, mode: ModeIndex) -> SubstitutionParams:
    alpha = (2 * mode.n + 1) / params.L
    return SubstitutionParams(alpha=alpha, epsilon=params.omega0(mode.k) * alpha, n=mode.n)


def omega_mode(params: SystemParams, mode: ModeIndex, t: float) -> float:
    """Mode frequency w(t) = omega0 * exp(-L t / (2n+1))."""
    return params.omega0(mode.k) * math.exp(-params.L * t / (2 * mode.n + 1))


def common_frequency(params: SystemParams, mode: ModeIndex, t: float) -> float:
    """Omega(t) = sqrt(w(t)^2 - L^2/4), real inside the reality window.

    A rounded-to-negative value within 1e-12 of zero (relative to L^2/4) is
    clamped to 0 so the window endpoint itself evaluates cleanly; anything
    below that raises RealityViolation.
    """
    w = omega_mode(params, mode, t)
    quarter = params.L * params.L / 4
    val = w * w - quarter
    if val < 0:
        if val >= -_BOUNDARY_SLACK * quarter:
            return 0.0
        raise RealityViolation(
            f"w(t)^2 = {w * w:.6g} below L^2/4 = {quarter:.6g} at t = {t:.6g}: "
            "mode is over-damped here"
        )
    return math.sqrt(val)


def _basis(mode_n: int, z: float, coeffs) -> tuple[float, float]:
    """M_n(z) and M_n'(z) for M_n = a j_n + b y_n."""
    a, b = coeffs
    m = a * sph_j(mode_n, z)
    mp_ = a * sph_deriv(BesselKind.FIRST, mode_n, z)
    if b != 0.0:
        m += b * sph_y(mode_n, z)
        mp_ += b * sph_deriv(BesselKind.SECOND, mode_n, z)
    return m, mp_


def closed_form_pair(
    params: SystemParams, mode: ModeIndex, t: float, coeffs=(1.0, 0.0)
) -> tuple[float, float]:
    """(u(t), v(t)) from the Bessel closed form."""
    sub = substitution(params, mode)
    x = sub.x(t)
    m, _ = _basis(mode.n, sub.z(t), coeffs)
    return m * x ** (mode.n + 1), m * x ** (-mode.n)


def closed_form_state(
    params: SystemParams, mode: ModeIndex, t: float, coeffs=(1.0, 0.0)
) -> tuple[float, float, float, float]:
    """(u, du/dt, v, dv/dt) at time t; derivatives via the chain rule
    d/dt f(z) x^p = -(x^p/alpha) (z f'(z) + p f(z))."""
    sub = substitution(params, mode)
    x = sub.x(t)
    z = sub.z(t)
    m, mp_ = _basis(mode.n, z, coeffs)
    n = mode.n
    u = m * x ** (n + 1)
    v = m * x ** (-n)
    du = -(x ** (n + 1) / sub.alpha) * (z * mp_ + (n + 1) * m)
    dv = -(x ** (-n) / sub.alpha) * (z * mp_ - n * m)
    return u, du, v, dv


def parametric_radius(params: SystemParams, mode: ModeIndex, t: float, coeffs=(1.0, 0.0)) -> float:
    """r(t) = sqrt(2) u(t) exp(+Lt/2); solves r'' + Omega(t)^2 r = 0."""
    u, _ = closed_form_pair(params, mode, t, coeffs)
    return math.sqrt(2.0) * u * math.exp(params.L * t / 2)


def closed_form_trajectory(
    params: SystemParams, mode: ModeIndex, t_grid, coeffs=(1.0, 0.0)
) -> Trajectory:
    t_grid = np.asarray(t_grid, dtype=float)
    u = np.empty_like(t_grid)
    v = np.empty_like(t_grid)
    r = np.empty_like(t_grid)
    for i, t in enumerate(t_grid):
        u[i], v[i] = closed_form_pair(params, mode, float(t), coeffs)
        r[i] = math.sqrt(2.0) * u[i] * math.exp(params.L * t / 2)
    return Trajectory(t_grid, u, v, r, mode, TrajectoryMethod.CLOSED_FORM)


def integrate_damped_oscillator(
    omega_sq, damping: float, init, t_grid, rel_tol: float = 1e-10, abs_tol=None
) -> np.ndarray:
    """Integrate q'' + damping q' + omega_sq(t) q = 0 on a grid.

    Returns an array of shape (len(t_grid), 2) holding (q, dq/dt). This is
    the reusable core behind integrate_pair; damping may be negative, which
    gives the amplified line.
    """

    def rhs(t, y):
        return np.array([y[1], -damping * y[1] - omega_sq(t) * y[0]])

    return integrate_to_grid(rhs, t_grid, np.asarray(init, dtype=float), rel_tol, abs_tol)


def integrate_pair(
    params: SystemParams,
    mode: ModeIndex,
    init,
    t_grid,
    rel_tol: float = 1e-10,
) -> Trajectory:
    """Adaptive-RK oracle for the pair: init = (u, du, v, dv) at t_grid[0].

    r is reconstructed from the damped line, r = sqrt(2) u exp(+Lt/2).
    """
    init = tuple(float(q) for q in init)
    if len(init) != 4:
        raise ValueError("init must be (u, du, v, dv)")

    def w2(t):
        w = omega_mode(params, mode, t)
        return w * w

    t_grid = np.asarray(t_grid, dtype=float)
    u_line = integrate_damped_oscillator(w2, +params.L, init[:2], t_grid, rel_tol)
    v_line = integrate_damped_oscillator(w2, -params.L, init[2:], t_grid, rel_tol)
    r = math.sqrt(2.0) * u_line[:, 0] * np.exp(params.L * t_grid / 2)
    return Trajectory(
        t_grid,
        u_line[:, 0],
        v_line[:, 0],
        r,
        mode,
        TrajectoryMethod.INTEGRATED,
        meta={"rel_tol": rel_tol},
    )


def residual(params: SystemParams, mode: ModeIndex, trajectory: Trajectory):
    """Per-sample residuals of both lines on the grid interior.

    Derivatives come from 4th-order central differences, so the first and
    last two samples carry no residual. Returns (times, res_u, res_v) with
    times = trajectory.times[2:-2]. Raises GridTooCoarse for fewer than 5
    samples, non-uniform spacing, or spacing above 1e-2 * alpha_n.
    """
    t = trajectory.times
    if t.size < 5:
        raise GridTooCoarse("need at least 5 samples for the 4th-order stencil")
    steps = np.diff(t)
    h = float(np.mean(steps))
    if np.max(np.abs(steps - h)) > 1e-8 * h:
        raise GridTooCoarse("residual check requires a uniform grid")
    sub = substitution(params, mode)
    if h > 1e-2 * sub.alpha:
        raise GridTooCoarse(
            f"spacing {h:.3g} exceeds 1e-2 * alpha_n = {1e-2 * sub.alpha:.3g}"
        )

    def derivs(f):
        d1 = (-f[4:] + 8 * f[3:-1] - 8 * f[1:-3] + f[:-4]) / (12 * h)
        d2 = (-f[4:] + 16 * f[3:-1] - 30 * f[2:-2] + 16 * f[1:-3] - f[:-4]) / (
            12 * h * h
        )
        return d1, d2

    ti = t[2:-2]
    w2 = np.array([omega_mode(params, mode, float(s)) ** 2 for s in ti])
    du, ddu = derivs(trajectory.u)
    dv, ddv = derivs(trajectory.v)
    res_u = ddu + params.L * du + w2 * trajectory.u[2:-2]
    res_v = ddv - params.L * dv + w2 * trajectory.v[2:-2]
    return ti, res_u, res_v
