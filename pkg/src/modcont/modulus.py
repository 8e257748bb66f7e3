"""Moduli of continuity for L-periodic functions.

A positive ``psi`` on ``(0, L/2)`` is a modulus of continuity for ``u`` when

    -2 psi((L + x - y)/2) <= u(y) - u(x) <= 2 psi((y - x)/2),   0 < y - x < L.

The estimates are phrased through ``b(z) = sup_x (psi(x) - x z)`` (minus the
Legendre transform of psi) and its tilt ``b~(z) = b(z) + L z / 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coefficients import read_table
from .errors import BoundaryNonzero, PeriodMismatch, SandwichFailure

CONSTANT = "constant"
HOELDER = "hoelder"
PIECEWISE_LINEAR = "piecewise_linear"

CHECK_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class ModulusFunction:
    """Concave positive modulus on ``(0, L/2)``.

    The function is extended continuously to the closed interval
    ``[0, L/2]``; the Legendre dual is taken over that interval.
    """

    half_period: float
    kind: str
    M: float = None
    K: float = None
    beta: float = None
    nodes: np.ndarray = None
    heights: np.ndarray = None

    @classmethod
    def constant(cls, M, period):
        if not M > 0:
            raise ValueError("M must be positive")
        return cls(0.5 * period, CONSTANT, M=float(M))

    @classmethod
    def hoelder(cls, K, beta, period):
        if not K > 0 or not 0 < beta <= 1:
            raise ValueError("need K > 0 and 0 < beta <= 1")
        return cls(0.5 * period, HOELDER, K=float(K), beta=float(beta))

    @classmethod
    def piecewise_linear(cls, z, psi):
        """Concave interpolant of samples spanning ``[0, L/2]`` (``z[0] == 0``)."""
        z = np.array(z, dtype=float)
        v = np.array(psi, dtype=float)
        if z.ndim != 1 or z.shape != v.shape or z.size < 2:
            raise ValueError("need matching 1-d sample arrays")
        if z[0] != 0 or np.any(np.diff(z) <= 0):
            raise ValueError("nodes must start at 0 and increase strictly")
        if np.any(v[1:-1] <= 0) or np.any(v < 0):
            raise ValueError("psi must be positive inside and nonnegative at the ends")
        slopes = np.diff(v) / np.diff(z)
        scale = max(np.abs(slopes).max(), 1.0)
        if np.any(np.diff(slopes) > 1e-9 * scale):
            raise ValueError("piecewise-linear psi is not concave")
        z.setflags(write=False)
        v.setflags(write=False)
        return cls(float(z[-1]), PIECEWISE_LINEAR, nodes=z, heights=v)

    @property
    def period(self):
        return 2.0 * self.half_period

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        if self.kind == CONSTANT:
            return np.full_like(z, self.M)
        if self.kind == HOELDER:
            return self.K * np.abs(z) ** self.beta
        return np.interp(z, self.nodes, self.heights)

    @property
    def sup(self):
        if self.kind == CONSTANT:
            return self.M
        if self.kind == HOELDER:
            return self.K * self.half_period ** self.beta
        return float(self.heights.max())

    def describe(self):
        if self.kind == CONSTANT:
            return f"const(M={self.M:g}, L={self.period:g})"
        if self.kind == HOELDER:
            return f"hoelder(K={self.K:g}, beta={self.beta:g}, L={self.period:g})"
        return f"pl({self.nodes.size} nodes, L={self.period:g})"


def parse_modulus(text, period):
    """``const:M=1``, ``hoelder:K=1,beta=0.5`` or ``pl:<path.csv>`` (columns z,psi)."""
    name, _, rest = text.strip().partition(":")
    name = name.lower()
    if name == "pl":
        z, v = read_table(rest, ("z", "psi"))
        psi = ModulusFunction.piecewise_linear(z, v)
        if not math.isclose(psi.period, period):
            raise ValueError(f"table spans [0, {psi.half_period}] but L/2 = {period / 2}")
        return psi
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"malformed parameter {item!r}")
        params[key.strip()] = float(val)
    if name == "const" and set(params) == {"M"}:
        return ModulusFunction.constant(params["M"], period)
    if name == "hoelder" and set(params) == {"K", "beta"}:
        return ModulusFunction.hoelder(params["K"], params["beta"], period)
    raise ValueError(f"unrecognised modulus {text!r}")


# ---------------------------------------------------------------------------
# Legendre duals

def legendre_b(psi, z):
    """``b(z) = sup {psi(x) - x z : 0 <= x <= L/2}``."""
    z = float(z)
    X = psi.half_period
    if psi.kind == CONSTANT:
        return psi.M + max(0.0, -z) * X
    if psi.kind == HOELDER:
        K, beta = psi.K, psi.beta
        edge = K * X ** beta - z * X
        if beta == 1.0:
            return max(0.0, edge)
        if z <= 0:
            return edge
        # in logs: the exponent 1/(1-beta) overflows as beta -> 1
        e = 1.0 / (1.0 - beta)
        log_x_star = e * (math.log(K * beta) - math.log(z))
        if log_x_star >= math.log(X):
            return edge
        return (1.0 - beta) * math.exp(e * (math.log(K) + beta * math.log(beta) - beta * math.log(z)))
    # a concave polygon minus a line peaks at a vertex
    return float(np.max(psi.heights - psi.nodes * z))


def legendre_b_tilde(psi, z):
    """``b~(z) = b(z) + L z / 2``; governs the lower gradient bound."""
    return legendre_b(psi, z) + psi.half_period * float(z)


# ---------------------------------------------------------------------------
# periodic fields and the discrete modulus check

@dataclass(frozen=True, eq=False)
class PeriodicField:
    """Samples of an L-periodic function at ``x_i = i L / N``."""

    period: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 4:
            raise ValueError("a periodic field needs at least 4 samples")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self):
        return self.values.size

    @property
    def x(self):
        return np.arange(self.n) * (self.period / self.n)

    @property
    def osc(self):
        return float(self.values.max() - self.values.min())


@dataclass(frozen=True)
class ModulusReport:
    holds: bool
    worst_violation: float
    witness: tuple


def _pair_differences(values):
    # row k-1 holds u(x_i + k h) - u(x_i) for shifts k = 1..N-1
    n = values.size
    idx = (np.arange(n)[None, :] + np.arange(1, n)[:, None]) % n
    return values[idx] - values[None, :]


def check_modulus(u, psi):
    """Check both modulus inequalities over every ordered pair of grid points."""
    if not math.isclose(u.period, psi.period, rel_tol=1e-12):
        raise PeriodMismatch(f"field period {u.period} != 2 * half period {psi.period}")
    n, L = u.n, u.period
    diffs = _pair_differences(u.values)
    d = np.arange(1, n) * (L / n)
    upper = diffs - 2.0 * psi(0.5 * d)[:, None]
    lower = -2.0 * psi(0.5 * (L - d))[:, None] - diffs
    excess = np.maximum(upper, lower)
    k, i = np.unravel_index(np.argmax(excess), excess.shape)
    worst = float(excess[k, i])
    x = i * L / n
    return ModulusReport(worst <= CHECK_RTOL * u.osc, worst, (x, x + d[k]))


def measured_modulus(u):
    """Smallest concave modulus of a periodic field, as a piecewise-linear psi.

    Uses ``omega(z) = max_x (u(x + 2z) - u(x)) / 2`` at the grid half-distances
    and takes its upper concave envelope on ``[0, L/2]``.
    """
    if u.osc == 0:
        raise ValueError("a constant field has no positive modulus")
    n, L = u.n, u.period
    omega = np.zeros(n + 1)
    omega[1:n] = 0.5 * _pair_differences(u.values).max(axis=1)
    z = np.arange(n + 1) * (L / (2 * n))
    hull_z, hull_v = upper_concave_hull(z, np.maximum(omega, 0.0))
    return ModulusFunction.piecewise_linear(z, np.interp(z, hull_z, hull_v))


def upper_concave_hull(x, y):
    """Vertices of the least concave majorant of points sorted by ``x``."""
    hx, hy = [], []
    for px, py in zip(x, y):
        while len(hx) >= 2:
            # drop the middle vertex when it lies on or below the chord
            cross = (hx[-1] - hx[-2]) * (py - hy[-2]) - (hy[-1] - hy[-2]) * (px - hx[-2])
            if cross >= 0:
                hx.pop()
                hy.pop()
            else:
                break
        hx.append(px)
        hy.append(py)
    return np.array(hx), np.array(hy)


def odd_periodic_extension(v, period):
    """Extend samples ``v`` on ``[0, L/2]`` (endpoints included) to an odd L-periodic field.

    ``len(v) = M + 1`` samples give a field of ``2M`` samples on ``[0, L)``.
    """
    v = np.asarray(v, dtype=float)
    if abs(v[0]) > 1e-12 or abs(v[-1]) > 1e-12:
        raise BoundaryNonzero("odd extension needs v(0) = v(L/2) = 0")
    m = v.size - 1
    u = np.empty(2 * m)
    u[: m + 1] = v
    u[m + 1:] = -v[1:m][::-1]
    u[0] = u[m] = 0.0
    return PeriodicField(period, u)


# ---------------------------------------------------------------------------
# concave approximants psi_k

@dataclass(frozen=True)
class Mollified:
    """Smooth concave ``psi_k`` with ``psi_k(0) = psi_k(L/2) = 0`` and its sandwich check.

    ``lower_excess`` is ``max(psi_k - psi)`` and ``upper_excess`` is
    ``max(psi - (1+k)/k psi_k(L/4 + k/(1+k) (z - L/4)))`` on the check grid;
    both are <= 0 when the sandwich holds.
    """

    psi_k: ModulusFunction
    k: int
    width: float
    lower_excess: float
    upper_excess: float

    def __call__(self, z):
        return self.psi_k(z)


def _kernel(m):
    s = np.arange(-m, m + 1) / (m + 1)
    w = (1.0 - s * s) ** 3
    return w / w.sum()


def mollify_psi(psi, k, max_points=1 << 22):
    """Build the concave approximant ``psi_k`` of a concave positive modulus.

    ``psi`` is replaced by its chords from the end points on the outer strips
    of width ``delta = L / (4(1+k))`` (this keeps it concave, below psi and
    linear near both ends) and then smoothed with a compactly supported C^2
    polynomial kernel narrow enough to stay above the rescaled copy of psi.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    X = psi.half_period
    L = 2.0 * X
    r = k / (1.0 + k)
    delta = L / (4.0 * (1.0 + k))
    left = float(psi(delta)) / delta
    right = float(psi(X - delta)) / delta
    margin = float(psi(0.25 * L)) / (1.0 + k)
    width = min(delta, 0.5 * margin / max(left, right))
    scale = psi.sup

    for _ in range(6):
        m = 12
        dx = width / m
        n = int(math.ceil(X / dx))
        if n + 1 > max_points:
            raise SandwichFailure(f"k = {k} needs more than {max_points} samples")
        dx = X / n
        m = max(1, int(width / dx))
        z = np.arange(-m, n + m + 1) * dx
        h = np.where(z < delta, left * z, np.where(z > X - delta, right * (X - z), psi(np.clip(z, 0, X))))
        vals = np.convolve(h, _kernel(m), mode="valid")
        vals[0] = vals[-1] = 0.0
        grid = z[m:-m]
        vals = np.maximum(vals, 0.0)
        lower = float(np.max(vals - psi(grid)))
        stretched = np.interp(0.25 * L + r * (grid - 0.25 * L), grid, vals) / r
        upper = float(np.max(psi(grid) - stretched))
        tol = 1e-12 * scale
        if lower <= tol and upper <= tol:
            psi_k = ModulusFunction(X, PIECEWISE_LINEAR, nodes=grid, heights=vals)
            return Mollified(psi_k, k, width, lower, upper)
        width *= 0.5
    raise SandwichFailure(f"could not build psi_k for k = {k}: lower excess {lower:.3g}, "
                          f"upper excess {upper:.3g}")
