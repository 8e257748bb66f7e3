"""Gradient bounds from the Legendre dual of a modulus.

For a concave modulus psi with dual ``b`` the minimal supersolution obeys

    psi_+'(z, t) <= inf_z min {Z : int_z^Z (s - z) alpha(s) ds >= b(z)^2 / t}

and the mirror lower bound with ``b~`` and the weight ``(z - s) alpha(s)``
on ``[Z, z]``.  Both are evaluated on a logarithmic probe grid in ``z`` and
refined around the best probe.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import coefficients as co
from .errors import DomainError, Inconclusive, NoRoot
from .modulus import CONSTANT, HOELDER, legendre_b, legendre_b_tilde

YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"

PROBE_EXPONENTS = range(-20, 41)
ROOT_RTOL = 1e-10
VANISH_RTOL = 1e-6
INF = math.inf


def probe_grid():
    """``0`` and ``+-2^j`` for ``j = -20..40``, sorted."""
    pos = np.array([2.0 ** j for j in PROBE_EXPONENTS])
    return np.concatenate((-pos[::-1], [0.0], pos))


# ---------------------------------------------------------------------------
# criterion

@dataclass(frozen=True)
class Criterion:
    value: float
    satisfied: str
    rule: str


def _analytic_rule(coeff, psi):
    """Closed-form verdict for power-law tails, or ``None``."""
    if coeff.family not in (co.HOMOGENEOUS, co.ASYMHOM):
        return None
    g = coeff.gamma
    if psi.kind == CONSTANT:
        return (YES if g <= 2.0 else NO), "gamma <= 2"
    if psi.kind == HOELDER:
        if psi.beta >= 1.0:
            return YES, "Lipschitz modulus"
        return (YES if g < 2.0 / (1.0 - psi.beta) else NO), "gamma < 2/(1-beta)"
    return None


def _safe_moment(coeff, z, Z):
    try:
        return co.moment(coeff, z, Z)
    except DomainError:
        return None


def _criterion_value(coeff, dual):
    """``inf_z dual(z) / sqrt(moment(z, inf))`` over the probe grid."""
    best = INF
    for z in probe_grid():
        m = _safe_moment(coeff, z, INF)
        if m is None or m == 0:
            continue
        b = dual(z)
        ratio = 0.0 if math.isinf(m) else b / math.sqrt(m)
        best = min(best, ratio)
    return best


def _criterion(coeff, psi, dual):
    value = _criterion_value(coeff, dual)
    rule = _analytic_rule(coeff, psi)
    if rule is not None:
        return Criterion(value, rule[0], rule[1])
    if psi.kind == CONSTANT:
        # b is constant on z >= 0, so only an infinite vertical extent helps
        try:
            lim = co.limits(coeff)
        except Inconclusive:
            return Criterion(value, INCONCLUSIVE, "limits inconclusive")
        return Criterion(value, YES if math.isinf(lim.b_plus) else NO, "B unbounded")
    if value <= VANISH_RTOL * dual(0.0):
        return Criterion(value, YES, "numeric")
    return Criterion(value, INCONCLUSIVE, "numeric")


def criterion_upper(coeff, psi):
    """Does the upper gradient bound hold for every ``t > 0``?"""
    return _criterion(coeff, psi, lambda z: legendre_b(psi, z))


def criterion_lower(coeff, psi):
    """Mirror of :func:`criterion_upper` for the lower gradient bound."""
    return _criterion(co.reflect(coeff), psi, lambda w: legendre_b_tilde(psi, -w))


# ---------------------------------------------------------------------------
# gradient bounds

def _first_crossing(coeff, z, target):
    """Smallest ``Z >= z`` with ``moment(z, Z) >= target``; ``inf`` if none."""
    if target <= 0:
        return z
    total = _safe_moment(coeff, z, INF)
    if total is None or total <= target:
        return INF
    h = 1.0
    while True:
        m = _safe_moment(coeff, z, z + h)
        if m is None:
            return INF
        if m >= target:
            break
        h *= 2.0
        if h > 1e300:
            return INF
    lo = 0.0 if h == 1.0 else 0.5 * h
    f = lambda d: co.moment(coeff, z, z + d) - target  # noqa: E731
    d = brentq(f, lo, h, xtol=1e-14 * max(1.0, abs(z)), rtol=ROOT_RTOL)
    return z + d


def _minimise(coeff, dual, t):
    """``(inf_z crossing(z), argmin)`` over ``z >= 0`` probes plus refinement.

    A translator with slopes below zero can only certify a negative slope at
    the origin, which a nonnegative profile vanishing there never has; such
    candidates win only once the translator outgrows the half period, so they
    are excluded.
    """
    zs = probe_grid()
    zs = zs[zs >= 0.0]
    vals = np.array([_first_crossing(coeff, z, dual(z) ** 2 / t) for z in zs])
    i = int(np.argmin(vals))
    best, zbest = float(vals[i]), float(zs[i])
    if math.isinf(best) or i == zs.size - 1:
        return best, zbest
    g = lambda z: _first_crossing(coeff, z, dual(z) ** 2 / t)  # noqa: E731
    res = minimize_scalar(g, bounds=(zs[max(i - 1, 0)], zs[i + 1]), method="bounded",
                          options={"xatol": 1e-12 * max(1.0, abs(zs[i]))})
    if res.fun < best:
        best, zbest = float(res.fun), float(res.x)
    return best, zbest


def _check_t(t):
    if not t > 0:
        raise ValueError("t must be positive")


def _check_regular_at_zero(coeff):
    # |p|^-gamma with gamma >= 2 makes the moment near z = 0 blow up, so the
    # infimum collapses onto z -> 0 and carries no information
    if coeff.family == co.HOMOGENEOUS and coeff.gamma >= 2.0:
        raise DomainError("gradient bounds need alpha regular at p = 0 when gamma >= 2; "
                          "use the asymptotically homogeneous family")


def gradient_bound_upper(coeff, psi, t, with_argmin=False):
    """Upper bound ``Z+`` on ``psi_+'(., t)``; ``inf`` when the criterion fails."""
    _check_t(t)
    if criterion_upper(coeff, psi).satisfied == NO:
        return (INF, math.nan) if with_argmin else INF
    _check_regular_at_zero(coeff)
    out = _minimise(coeff, lambda z: legendre_b(psi, z), t)
    return out if with_argmin else out[0]


def gradient_bound_lower(coeff, psi, t, with_argmin=False):
    """Lower bound ``Z-`` on ``psi_+'(., t)``; ``-inf`` when the criterion fails."""
    _check_t(t)
    if criterion_lower(coeff, psi).satisfied == NO:
        return (-INF, math.nan) if with_argmin else -INF
    _check_regular_at_zero(coeff)
    val, w = _minimise(co.reflect(coeff), lambda w: legendre_b_tilde(psi, -w), t)
    return (-val, -w) if with_argmin else -val


@dataclass(frozen=True)
class GradientBoundReport:
    t: float
    upper: float
    lower: float
    argmin_upper: float
    argmin_lower: float
    criterion_value: float
    criterion_satisfied: str

    def as_dict(self):
        return {k: _tag(v) for k, v in self.__dict__.items()}


def _tag(v):
    if isinstance(v, float):
        if math.isinf(v):
            return "+inf" if v > 0 else "-inf"
        if math.isnan(v):
            return None
    return v


def gradient_bounds(coeff, psi, t):
    """Both bounds and the upper criterion in one report."""
    up, zu = gradient_bound_upper(coeff, psi, t, with_argmin=True)
    lo, zl = gradient_bound_lower(coeff, psi, t, with_argmin=True)
    crit = criterion_upper(coeff, psi)
    return GradientBoundReport(float(t), up, lo, zu, zl, crit.value, crit.satisfied)


def fit_time_exponent(coeff, psi, ts):
    """Least-squares slope of ``log Z+`` against ``log t``."""
    ts = np.asarray(ts, dtype=float)
    z = np.array([gradient_bound_upper(coeff, psi, t) for t in ts])
    return float(np.polyfit(np.log(ts), np.log(z), 1)[0])


# ---------------------------------------------------------------------------
# oscillation bound and the Lipschitz dichotomy

def _level_crossing(coeff, sign, level, limit):
    if limit <= level:
        return sign * INF
    h = 1.0
    while co.integrate_B(coeff, sign * h) < level:
        h *= 2.0
    lo = 0.0 if h == 1.0 else 0.5 * h
    f = lambda x: co.integrate_B(coeff, sign * x) - level  # noqa: E731
    return sign * brentq(f, lo, h, xtol=1e-14, rtol=ROOT_RTOL)


def oscillation_bound(coeff, M, t):
    """``(inf, sup) {xi : B(xi) <= M^2 / t}``, infinite where ``B`` stays below."""
    _check_t(t)
    if not M > 0:
        raise ValueError("M must be positive")
    lim = co.limits(coeff)
    level = M * M / t
    return (_level_crossing(coeff, -1.0, level, lim.b_minus),
            _level_crossing(coeff, +1.0, level, lim.b_plus))


def lipschitz_classifier(coeff):
    """``{"bounded_above", "bounded_below"}`` tags from the limits of ``B``."""
    try:
        lim = co.limits(coeff)
    except Inconclusive:
        return {"bounded_above": INCONCLUSIVE, "bounded_below": INCONCLUSIVE}
    tag = lambda b: YES if math.isinf(b) else NO  # noqa: E731
    return {"bounded_above": tag(lim.b_plus), "bounded_below": tag(lim.b_minus)}


# ---------------------------------------------------------------------------
# curve shortening: explicit barrier

def _csf_barrier_xi(psi, t):
    s = 8.0 * t
    return (math.exp(-(psi - 1.0) ** 2 / s) - math.exp(-(psi + 1.0) ** 2 / s)) / math.sqrt(t)


def csf_implicit_supersolution(xi, t):
    """Solve ``xi = t^(-1/2) (e^(-(p-1)^2/8t) - e^(-(p+1)^2/8t))`` for ``p`` in ``[0, 1/2]``."""
    _check_t(t)
    if xi < 0:
        raise NoRoot("xi must be nonnegative")
    if xi == 0:
        return 0.0
    top = _csf_barrier_xi(0.5, t)
    if xi > top:
        raise NoRoot(f"xi = {xi} exceeds the attainable range {top:.6g} at t = {t}")
    return brentq(lambda p: _csf_barrier_xi(p, t) - xi, 0.0, 0.5, xtol=1e-12, rtol=1e-14)


def csf_barrier_slope(t):
    """Slope at ``xi = 0`` of the implicit barrier, ``2 t^(3/2) e^(1/(8t))``."""
    return 2.0 * t ** 1.5 * math.exp(1.0 / (8.0 * t))


def theorem1_bound(t, M):
    """Reference curve ``2 (t/M^2)^(3/2) exp(M^2/(8t))`` for small ``t / M^2``."""
    _check_t(t)
    s = t / (M * M)
    return 2.0 * s ** 1.5 * math.exp(1.0 / (8.0 * s))


# ---------------------------------------------------------------------------
# reference tables

def heat_table(Ms=(0.5, 1.0, 2.0), ts=(1e-3, 1e-1, 1.0), period=2.0):
    from .modulus import ModulusFunction
    heat = co.Coefficient.heat()
    rows = []
    for M in Ms:
        psi = ModulusFunction.constant(M, period)
        for t in ts:
            rows.append({"M": M, "t": t, "bound": gradient_bound_upper(heat, psi, t),
                         "closed_form": math.sqrt(2.0) * M / math.sqrt(t)})
    return rows


def power_law_table(gammas=(0.5, 1.0, 1.5, 2.0, 2.5, 3.0), betas=(0.3, 0.5, 0.8), period=2.0):
    from .modulus import ModulusFunction
    rows = []
    for family in (co.HOMOGENEOUS, co.ASYMHOM):
        for g in gammas:
            c = (co.Coefficient.homogeneous(g) if family == co.HOMOGENEOUS
                 else co.Coefficient.asymptotically_homogeneous(g))
            row = {"family": family, "gamma": g, **lipschitz_classifier(c),
                   "constant_psi": criterion_upper(c, ModulusFunction.constant(1.0, period)).satisfied}
            for beta in betas:
                psi = ModulusFunction.hoelder(1.0, beta, period)
                row[f"hoelder_{beta:g}"] = criterion_upper(c, psi).satisfied
            rows.append(row)
    return rows
