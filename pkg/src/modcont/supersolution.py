"""Two-sided approximation of the minimal supersolution psi_+.

For a concave modulus psi and k >= 1, ``v_k`` solves the flow on ``[0, L/2]``
with zero boundary values from the concave approximant ``psi_k``, and

    phi_k(z, t) = (1+k)/k * v_k(L/4 + k/(1+k) (z - L/4), (k/(1+k))^2 t)

is a supersolution above psi.  Hence ``v_k <= psi_+ <= phi_k``; the midpoint
is the estimate and half the gap its certified error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .modulus import mollify_psi
from .solver import Dirichlet, Trajectory, solve

MIN_TIME_SAMPLES = 65


@dataclass(frozen=True, eq=False)
class SupersolutionBracket:
    k: int
    coefficient: object
    psi: object
    psi_k: object
    lower: Trajectory
    upper: Trajectory

    @property
    def times(self):
        return self.lower.times

    @property
    def z(self):
        return self.lower.x

    @property
    def gap(self):
        return self.upper.fields - self.lower.fields

    @property
    def midpoint(self):
        return 0.5 * (self.upper.fields + self.lower.fields)

    def estimate(self, t):
        """``(psi_+ estimate, half gap)`` on the z grid at a sampled time."""
        i = self.lower.index(t)
        lo, up = self.lower.fields[i], self.upper.fields[i]
        return 0.5 * (lo + up), 0.5 * (up - lo)


def _merge_times(times, T):
    times = np.unique(np.clip(np.asarray(times, dtype=float), 0.0, T))
    keep = np.concatenate(([True], np.diff(times) > 1e-12 * T))
    return times[keep]


def minimal_supersolution(coeff, psi, k, config):
    """Bracket psi_+ between ``v_k`` and ``phi_k`` on the grid of ``config``.

    ``config.n`` is the number of intervals on ``[0, L/2]``; its boundary is
    replaced by zero Dirichlet data.  The bracket is sampled at the union of
    ``config.output_times`` and 65 uniform times on ``[0, T]``.
    """
    X = psi.half_period
    L = 2.0 * X
    T = config.t_final
    r = k / (1.0 + k)
    times = _merge_times(np.concatenate((config.output_times, np.linspace(0.0, T, MIN_TIME_SAMPLES))), T)
    solve_times = _merge_times(np.concatenate((times, r * r * times)), T)
    cfg = replace(config, boundary=Dirichlet((0.0, X), 0.0, 0.0), output_times=tuple(solve_times))

    mol = mollify_psi(psi, k)
    z = cfg.grid()
    u0 = mol.psi_k(z)
    u0[0] = u0[-1] = 0.0
    traj = solve(coeff, u0, cfg)

    lower = np.array([traj.at(t) for t in times])
    shifted = 0.25 * L + r * (z - 0.25 * L)
    upper = np.array([np.interp(shifted, z, traj.at(r * r * t)) / r for t in times])
    for arr in (times, lower, upper):
        arr.setflags(write=False)
    out_cfg = replace(cfg, output_times=tuple(times))
    meta = dict(traj.metadata, k=k)
    return SupersolutionBracket(
        k, coeff, psi, mol,
        Trajectory(times, z, lower, out_cfg, meta),
        Trajectory(times, z, upper, out_cfg, meta),
    )


def boundary_gradient(bracket, t):
    """Slopes of psi_+(., t) at ``z = 0`` and ``z = L/2``.

    Taken from the lower member ``v_k``, which shares the zero end values of
    psi_+ and converges to it; one-sided second-order differences.  The
    values are lower estimates of the true end slopes (``v_k <= psi_+``).
    """
    v = bracket.lower.at(t)
    h = bracket.lower.spacing
    left = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    right = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    return float(left), float(right)


@dataclass(frozen=True)
class TimeRegularityReport:
    passed: bool
    worst_ratio: float
    lipschitz_bound: float
    alpha_bound: float


def time_regularity_check(bracket, delta):
    """Check the square-root-in-time Hoelder bound on ``v_k`` away from the ends.

    On ``[delta, L/2 - delta]``::

        |v_k(z, t2) - v_k(z, t1)| <= 2 C sqrt(alpha_d (t2 - t1)) / sqrt(pi)

    with ``C = max(sup psi / delta, sup psi / (L/2 - delta))`` and ``alpha_d``
    the largest diffusivity on slopes ``|p| <= C``.
    """
    X = bracket.psi.half_period
    if not 0 < delta < 0.5 * X:
        raise ValueError("delta must lie in (0, L/4)")
    sup = bracket.psi.sup
    C = max(sup / delta, sup / (X - delta))
    p = np.linspace(-C, C, 4001)
    alpha_d = float(np.max(bracket.coefficient.values(p)))
    z = bracket.z
    inside = (z >= delta - 1e-12) & (z <= X - delta + 1e-12)
    v = bracket.lower.fields[:, inside]
    t = bracket.times
    dv = np.abs(v[None, :, :] - v[:, None, :]).max(axis=2)
    dt = np.abs(t[None, :] - t[:, None])
    bound = 2.0 * C * np.sqrt(alpha_d * dt) / math.sqrt(math.pi)
    off = dt > 0
    worst = float(np.max(dv[off] / bound[off])) if np.any(off) else 0.0
    return TimeRegularityReport(worst <= 1.0, worst, C, alpha_d)


@dataclass(frozen=True)
class GapScaling:
    ks: tuple
    gaps: tuple
    exponent: float
    constant: float


def gap_scaling(coeff, psi, ks, z, t, config):
    """Fit ``gap(k) ~ k^e`` at a fixed ``(z, t)`` and the constant of ``C (1/k + sqrt(t/k))``."""
    gaps = []
    cfg = replace(config, output_times=tuple(sorted({0.0, float(t), config.t_final})))
    for k in ks:
        br = minimal_supersolution(coeff, psi, k, cfg)
        i = br.lower.index(t)
        gaps.append(float(np.interp(z, br.z, br.gap[i])))
    ks_arr = np.asarray(ks, dtype=float)
    g = np.asarray(gaps)
    exponent = float(np.polyfit(np.log(ks_arr), np.log(g), 1)[0])
    shape = 1.0 / ks_arr + np.sqrt(t / ks_arr)
    constant = float(np.dot(g, shape) / np.dot(shape, shape))
    return GapScaling(tuple(ks), tuple(gaps), exponent, constant)
