"""Translating solutions of ``u_t = alpha(u') u''``.

A translator is parametrised by its slope ``p``:

    x(p) = x0 + (A(p) - A(p_ref)) / V,
    y(p) = y0 + (B(p) - B(p_ref)) / V,

so the graph has slope ``p`` at ``(x(p), y(p))`` and curvature ``V / alpha(p)``.
Along the graph ``alpha(v') v'' = V``, hence the curve is a solution of the
flow which moves rigidly *upwards*: ``v(x, t) = v(x, 0) + V t``.  The
descending translators (``alpha(v') v'' = -V``) are the reflections
``(x, y) -> (-x, -y)`` of these for the coefficient ``alpha(-p)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import coefficients as co
from .errors import DomainError, OutOfRange

P_TOL = 1e-12


@dataclass(frozen=True)
class TranslatorProfile:
    coefficient: co.Coefficient
    speed: float
    anchor: tuple = (0.0, 0.0)
    p_range: tuple = (-10.0, 10.0)
    p_ref: float = 0.0

    def __post_init__(self):
        if not self.speed > 0:
            raise ValueError("speed must be positive")
        lo, hi = self.p_range
        if lo > hi:
            raise ValueError("p_range must satisfy p_min <= p_max")

    def x(self, p):
        return self.anchor[0] + co.alpha_integral(self.coefficient, self.p_ref, p) / self.speed

    def y(self, p, t=0.0):
        rise = co.s_alpha_integral(self.coefficient, self.p_ref, p) / self.speed
        return self.anchor[1] + rise + self.speed * t

    @property
    def x_range(self):
        return self.x(self.p_range[0]), self.x(self.p_range[1])

    def slope_at(self, x):
        """Invert the increasing map ``p -> x(p)`` by bracketed root finding."""
        lo, hi = self.p_range
        x_lo, x_hi = self.x_range
        if not x_lo <= x <= x_hi:
            raise OutOfRange(f"x = {x} outside the profile extent [{x_lo}, {x_hi}]")
        if x == x_lo:
            return lo
        if x == x_hi:
            return hi
        return brentq(lambda p: self.x(p) - x, lo, hi, xtol=P_TOL, rtol=4 * np.finfo(float).eps)

    def samples(self, n=201, t=0.0):
        """Arrays ``(p, x, v)`` on ``n`` uniformly spaced slopes."""
        p = np.linspace(self.p_range[0], self.p_range[1], n)
        x = np.array([self.x(q) for q in p])
        v = np.array([self.y(q, t) for q in p])
        return p, x, v


def build_translator(coeff, speed, anchor=(0.0, 0.0), p_range=(-10.0, 10.0), p_ref=0.0):
    """Translator through ``anchor`` (the point of slope ``p_ref``) for the given speed.

    Raises :class:`DomainError` if the slopes in ``p_range`` cannot be reached
    from ``p_ref`` (e.g. across the singularity of a homogeneous coefficient).
    """
    prof = TranslatorProfile(coeff, float(speed), tuple(map(float, anchor)),
                             tuple(map(float, p_range)), float(p_ref))
    # the integrals from p_ref to both ends must exist
    for p in prof.p_range:
        prof.x(p)
        prof.y(p)
    return prof


def eval_translator(profile, x, t=0.0):
    """``v(x, t) = v(x, 0) + V t`` on the horizontal extent of the profile."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return profile.y(profile.slope_at(float(x)), t)


def closed_form_translator(family, speed, s, gamma=None, branch=1):
    """Explicit translator profiles.

    ``heat``, ``csf`` and ``npcsf`` return the convex (ascending) profiles
    ``V s^2/2``, ``-log(cos(V s))/V`` and ``-sqrt(1 - (V s)^2)/V``.
    ``homogeneous`` returns the concave (descending) family, which solves
    ``alpha(v') v'' = -V``::

        gamma not in {1, 2}:  -|s V (1 - gamma)|^((2-gamma)/(1-gamma)) / (V (2-gamma))
        gamma == 1:           -exp(branch * V s) / V
        gamma == 2:            log|s V| / V

    ``branch`` (+1 or -1) picks the exponential for gamma = 1.
    """
    V = float(speed)
    if not V > 0:
        raise ValueError("speed must be positive")
    if family == co.HEAT:
        return 0.5 * V * s * s
    if family == co.CSF:
        if abs(V * s) >= math.pi / 2:
            raise DomainError("the grim reaper lives on |V s| < pi/2")
        return -math.log(math.cos(V * s)) / V
    if family == co.NPCSF:
        if abs(V * s) > 1:
            raise DomainError("the semicircle lives on |V s| <= 1")
        return -math.sqrt(1.0 - (V * s) ** 2) / V
    if family == co.HOMOGENEOUS:
        g = float(gamma)
        if g == 1.0:
            if branch not in (1, -1):
                raise ValueError("branch must be +1 or -1")
            return -math.exp(branch * V * s) / V
        if g == 2.0:
            if s == 0:
                raise DomainError("log profile is singular at s = 0")
            return math.log(abs(s * V)) / V
        q = (2.0 - g) / (1.0 - g)
        if s == 0 and q < 0:
            raise DomainError("profile is singular at s = 0")
        return -abs(s * V * (1.0 - g)) ** q / (V * (2.0 - g))
    raise DomainError(f"no closed form for family {family!r}")


def asymptotic_endpoints(coeff, speed):
    """Horizontal extent ``(s-, s+)`` of the descending translator.

    ``s- = -(1/V) int_0^oo alpha`` and ``s+ = (1/V) int_-oo^0 alpha``; either
    may be infinite.
    """
    V = float(speed)
    if not V > 0:
        raise ValueError("speed must be positive")
    return -co.total_alpha(coeff, +1) / V, -co.total_alpha(coeff, -1) / V
