"""Method-of-lines solver for ``u_t = alpha(u') u''`` and ``u_t = a~(x,t,u,u') u''``.

Centered differences in space; time stepping is either explicit Euler with a
CFL step recomputed every step from the current diffusivities, or implicit
Euler with a damped fixed-point (frozen-coefficient) iteration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Union

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve_banded
from scipy.sparse.linalg import spsolve

from .coefficients import Coefficient
from .errors import (BlowUp, CoefficientFloorViolated, DomainError, GridMismatch,
                     NonConvergence, TimeNotSampled)

EXPLICIT = "explicit"
IMPLICIT = "implicit"

BLOWUP_LEVEL = 1e12
IMPLICIT_TOL = 1e-10
IMPLICIT_MAXITER = 500
TIME_RTOL = 1e-12


@dataclass(frozen=True)
class Periodic:
    length: float
    origin: float = 0.0


@dataclass(frozen=True)
class Dirichlet:
    """Boundary values on ``interval``; ``left``/``right`` are numbers or functions of t."""

    interval: tuple
    left: Union[float, Callable] = 0.0
    right: Union[float, Callable] = 0.0

    def values_at(self, t):
        lv = self.left(t) if callable(self.left) else self.left
        rv = self.right(t) if callable(self.right) else self.right
        return float(lv), float(rv)


@dataclass(frozen=True)
class SolverConfig:
    n: int
    t_final: float
    boundary: Union[Periodic, Dirichlet]
    scheme: str = EXPLICIT
    cfl_safety: float = 0.45
    output_times: tuple = ()
    dt: float = None
    alpha_cap: float = 1e6

    def __post_init__(self):
        if self.n < 8:
            raise ValueError("grid size must be at least 8")
        if not self.t_final > 0:
            raise ValueError("time horizon must be positive")
        if self.scheme not in (EXPLICIT, IMPLICIT):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not 0 < self.cfl_safety <= 1:
            raise ValueError("cfl_safety must lie in (0, 1]")
        times = tuple(float(t) for t in self.output_times) or (0.0, float(self.t_final))
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("output times must be strictly increasing")
        if times[0] < 0 or times[-1] > self.t_final * (1 + TIME_RTOL):
            raise ValueError("output times must lie in [0, T]")
        object.__setattr__(self, "output_times", times)

    @property
    def periodic(self):
        return isinstance(self.boundary, Periodic)

    @property
    def spacing(self):
        if self.periodic:
            return self.boundary.length / self.n
        a, b = self.boundary.interval
        return (b - a) / self.n

    def grid(self):
        """Periodic: ``n`` nodes on ``[origin, origin + L)``; Dirichlet: ``n + 1`` nodes."""
        if self.periodic:
            return self.boundary.origin + np.arange(self.n) * self.spacing
        a, b = self.boundary.interval
        return np.linspace(a, b, self.n + 1)


@dataclass(frozen=True)
class GeneralCoefficient:
    """``a~(x, t, u, p)`` bounded below by ``floor.values(p)``.

    The evaluator is called with arrays of equal shape and must be
    vectorised.
    """

    evaluator: Callable
    floor: Coefficient

    def values(self, x, t, u, p):
        return np.asarray(self.evaluator(x, t, u, p), dtype=float)


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    x: np.ndarray
    fields: np.ndarray
    config: SolverConfig
    metadata: dict = field(default_factory=dict)

    @property
    def periodic(self):
        return self.config.periodic

    @property
    def spacing(self):
        return self.config.spacing

    def index(self, t):
        hits = np.flatnonzero(np.isclose(self.times, t, rtol=TIME_RTOL, atol=1e-14))
        if hits.size == 0:
            raise TimeNotSampled(f"t = {t} is not an output time")
        return int(hits[0])

    def at(self, t):
        return self.fields[self.index(t)]

    def interpolate(self, x, t):
        """Bilinear interpolation of the stored fields at points ``x`` and time ``t``."""
        x = np.asarray(x, dtype=float)
        t = float(t)
        if not self.times[0] - 1e-14 <= t <= self.times[-1] + 1e-14:
            raise TimeNotSampled(f"t = {t} outside the sampled window")
        j = int(np.clip(np.searchsorted(self.times, t) - 1, 0, self.times.size - 2)) \
            if self.times.size > 1 else 0
        if self.times.size == 1:
            return self._space_interp(self.fields[0], x)
        t0, t1 = self.times[j], self.times[j + 1]
        w = min(max((t - t0) / (t1 - t0), 0.0), 1.0)
        f0 = self._space_interp(self.fields[j], x)
        if w == 0.0:
            return f0
        return (1 - w) * f0 + w * self._space_interp(self.fields[j + 1], x)

    def _space_interp(self, values, x):
        if self.periodic:
            L = self.config.boundary.length
            xs = np.append(self.x, self.x[0] + L)
            vs = np.append(values, values[0])
            xr = self.x[0] + np.mod(x - self.x[0], L)
            return np.interp(xr, xs, vs)
        return np.interp(x, self.x, values)


# ---------------------------------------------------------------------------

def _derivatives(u, h, periodic):
    if periodic:
        up, um = np.roll(u, -1), np.roll(u, 1)
        return (up - um) / (2 * h), (up - 2 * u + um) / (h * h)
    return (u[2:] - u[:-2]) / (2 * h), (u[2:] - 2 * u[1:-1] + u[:-2]) / (h * h)


class _Diffusivity:
    """Evaluates and caps the diffusivity, tracking cap hits and floor checks."""

    def __init__(self, coeff, cap, x):
        self.coeff = coeff
        self.cap = cap
        self.x = x
        self.cap_hit = False
        self.max_alpha = 0.0

    def __call__(self, t, u, p):
        c = self.coeff
        if isinstance(c, GeneralCoefficient):
            a = c.values(self.x, t, u, p)
            floor = c.floor.values(p)
            if np.any(a < floor * (1 - 1e-12)):
                i = int(np.argmax(floor - a))
                raise CoefficientFloorViolated(
                    f"a~ = {a[i]:.6g} < alpha = {floor[i]:.6g} at x = {self.x[i]:.6g}, p = {p[i]:.6g}")
        else:
            a = c.values(p)
        if np.any(~(a > 0)):
            if np.any(np.isnan(a)):
                raise BlowUp("diffusivity became NaN")
            raise DomainError("diffusivity is not positive on the current slopes")
        if np.any(a > self.cap):
            self.cap_hit = True
            a = np.minimum(a, self.cap)
        self.max_alpha = max(self.max_alpha, float(a.max()))
        return a


def solve(coeff, u0, config):
    """Integrate from ``u0`` and return the fields at ``config.output_times``.

    ``coeff`` is a :class:`Coefficient` or a :class:`GeneralCoefficient`.
    Raises :class:`BlowUp` (with the partial trajectory attached),
    :class:`NonConvergence` or :class:`CoefficientFloorViolated`.
    """
    u = np.array(getattr(u0, "values", u0), dtype=float)
    x = config.grid()
    if u.shape != x.shape:
        raise ValueError(f"initial data has {u.size} samples, grid has {x.size}")
    periodic = config.periodic
    if not periodic:
        lv, rv = config.boundary.values_at(0.0)
        tol = 1e-9 * max(1.0, float(np.abs(u).max()))
        if abs(u[0] - lv) > tol or abs(u[-1] - rv) > tol:
            raise ValueError("initial data does not match the boundary values at t = 0")
    alpha = _Diffusivity(coeff, config.alpha_cap, x if periodic else x[1:-1])
    h = config.spacing
    out_times = config.output_times
    recorded = []
    steps = 0
    t = 0.0

    def finish():
        meta = {"scheme": config.scheme, "steps": steps, "alpha_cap_hit": alpha.cap_hit,
                "max_alpha": alpha.max_alpha}
        times = np.array(out_times[: len(recorded)])
        fields = np.array(recorded) if recorded else np.empty((0, x.size))
        for arr in (times, fields):
            arr.setflags(write=False)
        return Trajectory(times, x, fields, config, meta)

    k = 0
    while k < len(out_times):
        target = out_times[k]
        if t >= target - TIME_RTOL * max(1.0, target):
            recorded.append(u.copy())
            k += 1
            continue
        if config.scheme == EXPLICIT:
            p, d2 = _derivatives(u, h, periodic)
            a = alpha(t, u if periodic else u[1:-1], p)
            dt = config.dt if config.dt is not None else config.cfl_safety * h * h / (2.0 * a.max())
            if t + dt >= target:
                dt, t_new = target - t, target
            else:
                t_new = t + dt
            if periodic:
                u = u + dt * a * d2
            else:
                u[1:-1] = u[1:-1] + dt * a * d2
                u[0], u[-1] = config.boundary.values_at(t_new)
        else:
            dt = config.dt if config.dt is not None else h
            if t + dt >= target:
                dt, t_new = target - t, target
            else:
                t_new = t + dt
            u = _implicit_step(u, t_new, dt, h, config, alpha)
        t = t_new
        steps += 1
        if not np.all(np.isfinite(u)) or np.abs(u).max() > BLOWUP_LEVEL:
            raise BlowUp(f"solution blew up at t = {t:.6g}", partial=finish())
    return finish()


def _implicit_step(u_old, t_new, dt, h, config, alpha):
    periodic = config.periodic
    w = u_old.copy()
    if not periodic:
        w[0], w[-1] = config.boundary.values_at(t_new)
    omega = 1.0
    prev = math.inf
    scale = max(1.0, float(np.abs(u_old).max()))
    for _ in range(IMPLICIT_MAXITER):
        p, _ = _derivatives(w, h, periodic)
        a = alpha(t_new, w if periodic else w[1:-1], p)
        lam = dt * a / (h * h)
        if periodic:
            n = w.size
            A = sp.diags([-lam[1:], 1 + 2 * lam, -lam[:-1]], [-1, 0, 1], format="lil")
            A[0, n - 1] = -lam[0]
            A[n - 1, 0] = -lam[n - 1]
            new = spsolve(A.tocsc(), u_old)
        else:
            m = lam.size
            ab = np.zeros((3, m))
            ab[0, 1:] = -lam[:-1]
            ab[1] = 1 + 2 * lam
            ab[2, :-1] = -lam[1:]
            rhs = u_old[1:-1].copy()
            rhs[0] += lam[0] * w[0]
            rhs[-1] += lam[-1] * w[-1]
            new = w.copy()
            new[1:-1] = solve_banded((1, 1), ab, rhs)
        change = float(np.abs(new - w).max())
        w = w + omega * (new - w)
        if change <= IMPLICIT_TOL * scale:
            return w
        if change > prev:
            omega = max(0.5 * omega, 1e-3)
        prev = change
    raise NonConvergence(f"implicit iteration stalled at t = {t_new:.6g} (change {change:.3g})")


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonReport:
    ordered: bool
    worst_gap: float
    tolerance: float


def comparison_check(traj1, traj2):
    """Is ``traj1 <= traj2`` at every sampled point (within ``1e-6 * osc``)?

    ``worst_gap`` is the smallest value of ``traj2 - traj1``.
    """
    if traj1.x.shape != traj2.x.shape or not np.allclose(traj1.x, traj2.x):
        raise GridMismatch("trajectories live on different grids")
    if traj1.times.shape != traj2.times.shape or not np.allclose(traj1.times, traj2.times):
        raise GridMismatch("trajectories are sampled at different times")
    gap = traj2.fields - traj1.fields
    osc = max(np.ptp(traj1.fields[0]), np.ptp(traj2.fields[0]))
    tol = 1e-6 * osc
    worst = float(gap.min())
    return ComparisonReport(worst >= -tol, worst, tol)


def spatial_derivative(traj, t):
    """``u'`` at an output time: centered inside, one-sided 2nd order at Dirichlet ends."""
    u = traj.at(t)
    h = traj.spacing
    if traj.periodic:
        return (np.roll(u, -1) - np.roll(u, 1)) / (2 * h)
    du = np.empty_like(u)
    du[1:-1] = (u[2:] - u[:-2]) / (2 * h)
    du[0] = (-3 * u[0] + 4 * u[1] - u[2]) / (2 * h)
    du[-1] = (3 * u[-1] - 4 * u[-2] + u[-3]) / (2 * h)
    return du


def with_output_times(config, times):
    return replace(config, output_times=tuple(times))
