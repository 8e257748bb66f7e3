"""Diffusivities alpha(p) and the integrals A, B and the moment integral.

For the equation ``u_t = alpha(u') u''`` everything downstream is driven by

    A(xi) = int_0^xi alpha(s) ds,        B(xi) = int_0^xi s alpha(s) ds,

and by the moment integral ``int_z^Z (s - z) alpha(s) ds``.  Closed forms are
used for the built-in families; everything else goes through adaptive
Gauss-Kronrod quadrature (QUADPACK via :func:`scipy.integrate.quad`).
"""
from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, Inconclusive, NonPositiveError, QuadratureFailure

HEAT = "heat"
CSF = "csf"
NPCSF = "npcsf"
HOMOGENEOUS = "homogeneous"
ASYMHOM = "asymhom"
TABULATED = "tabulated"
CUSTOM = "custom"

FAMILIES = (HEAT, CSF, NPCSF, HOMOGENEOUS, ASYMHOM, TABULATED, CUSTOM)

QUAD_EPSREL = 1e-10
QUAD_EPSABS = 1e-14
QUAD_LIMIT = 400

# probing of limits for custom evaluators
PROBE_MAX_EXP = 40
PROBE_GROWTH = 1.0
PROBE_CAUCHY = 1e-12

INF = math.inf


@dataclass(frozen=True, eq=False)
class Coefficient:
    """A positive diffusivity ``alpha`` together with its family tag.

    Use the constructors (:meth:`heat`, :meth:`csf`, ...) rather than the raw
    initialiser.  ``domain`` is the declared evaluable range of a custom
    evaluator; built-in families are valid everywhere except ``p = 0`` for
    :meth:`homogeneous`.
    """

    family: str
    gamma: Optional[float] = None
    evaluator: Optional[Callable] = field(default=None, repr=False)
    samples: Optional[tuple] = field(default=None, repr=False)
    lower_bound: Optional[float] = None
    upper_bound: Optional[float] = None
    domain: tuple = (-INF, INF)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family in (HOMOGENEOUS, ASYMHOM):
            if self.gamma is None or not self.gamma > 0:
                raise ValueError("gamma must be a positive real")
        if self.family == TABULATED:
            p, a = self.samples
            if p.ndim != 1 or p.shape != a.shape or p.size < 2:
                raise ValueError("table needs at least two (p, alpha) pairs")
            if np.any(np.diff(p) <= 0):
                raise ValueError("table p values must be strictly increasing")
            if np.any(a <= 0):
                raise NonPositiveError("table contains alpha <= 0")

    # -- constructors -------------------------------------------------------
    @classmethod
    def heat(cls):
        return cls(HEAT, lower_bound=1.0, upper_bound=1.0)

    @classmethod
    def csf(cls):
        """Graphical curve-shortening flow, alpha = 1 / (1 + p^2)."""
        return cls(CSF, upper_bound=1.0)

    @classmethod
    def npcsf(cls):
        """Non-parametric curve-shortening flow, alpha = (1 + p^2)^(-3/2)."""
        return cls(NPCSF, upper_bound=1.0)

    @classmethod
    def homogeneous(cls, gamma):
        return cls(HOMOGENEOUS, gamma=float(gamma))

    @classmethod
    def asymptotically_homogeneous(cls, gamma, evaluator=None):
        """alpha ~ |p|^(-gamma) as |p| -> oo.

        Without an explicit evaluator the representative
        ``(1 + p^2)^(-gamma/2)`` is used (gamma = 2 is the curve-shortening
        flow, gamma = 3 the non-parametric one).
        """
        gamma = float(gamma)
        if evaluator is None:
            def evaluator(p, _g=gamma):
                return (1.0 + np.square(p)) ** (-0.5 * _g)
        return cls(ASYMHOM, gamma=gamma, evaluator=evaluator)

    @classmethod
    def tabulated(cls, p, alpha):
        p = np.array(p, dtype=float)
        a = np.array(alpha, dtype=float)
        p.setflags(write=False)
        a.setflags(write=False)
        return cls(TABULATED, samples=(p, a),
                   lower_bound=float(a.min()), upper_bound=float(a.max()))

    @classmethod
    def custom(cls, evaluator, domain=(-INF, INF), lower_bound=None, upper_bound=None):
        return cls(CUSTOM, evaluator=evaluator, domain=tuple(domain),
                   lower_bound=lower_bound, upper_bound=upper_bound)

    # -- evaluation ---------------------------------------------------------
    @property
    def is_even(self):
        return self.family in (HEAT, CSF, NPCSF, HOMOGENEOUS)

    @property
    def has_closed_form(self):
        return self.family in (HEAT, CSF, NPCSF, HOMOGENEOUS)

    def values(self, p):
        """Vectorised alpha without validity checks.

        Homogeneous coefficients return ``inf`` at ``p = 0``; the solver caps
        this instead of failing.
        """
        p = np.asarray(p, dtype=float)
        fam = self.family
        if fam == HEAT:
            return np.ones_like(p)
        if fam == CSF:
            return 1.0 / (1.0 + p * p)
        if fam == NPCSF:
            return (1.0 + p * p) ** -1.5
        if fam == HOMOGENEOUS:
            with np.errstate(divide="ignore"):
                return np.abs(p) ** (-self.gamma)
        if fam == TABULATED:
            return np.interp(p, self.samples[0], self.samples[1])
        return _call_vectorised(self.evaluator, p)

    def __call__(self, p):
        return eval_alpha(self, p)

    def describe(self):
        if self.family in (HOMOGENEOUS, ASYMHOM):
            return f"{self.family}(gamma={self.gamma:g})"
        return self.family


def _call_vectorised(f, p):
    try:
        out = np.asarray(f(p), dtype=float)
        if out.shape == p.shape:
            return out
    except Exception:
        pass
    return np.asarray(np.vectorize(lambda s: float(f(s)))(p), dtype=float)


def eval_alpha(coeff, p):
    """Evaluate ``alpha(p) > 0`` with domain and positivity checks.

    Accepts a scalar or an array; returns the same kind.
    """
    scalar = np.ndim(p) == 0
    p_arr = np.asarray(p, dtype=float)
    if np.any(~np.isfinite(p_arr)):
        raise DomainError("alpha is only evaluated at finite slopes")
    if coeff.family == HOMOGENEOUS and np.any(p_arr == 0):
        raise DomainError("homogeneous alpha = |p|^-gamma is undefined at p = 0")
    lo, hi = coeff.domain
    if np.any((p_arr < lo) | (p_arr > hi)):
        raise DomainError(f"p outside the declared domain [{lo}, {hi}]")
    a = coeff.values(p_arr)
    if np.any(~(a > 0)):
        raise NonPositiveError("alpha evaluator returned a value <= 0")
    return float(a) if scalar else a


def parse_coefficient(text):
    """Build a coefficient from a string such as ``hom:gamma=2.5``.

    Recognised forms: ``heat``, ``csf``, ``npcsf``, ``hom:gamma=G``,
    ``asymhom:gamma=G`` and ``table:<path.csv>`` (CSV columns ``p,alpha``).
    """
    name, _, rest = text.strip().partition(":")
    name = name.lower()
    if name == "heat" and not rest:
        return Coefficient.heat()
    if name == "csf" and not rest:
        return Coefficient.csf()
    if name == "npcsf" and not rest:
        return Coefficient.npcsf()
    if name in ("hom", "asymhom"):
        params = _parse_params(rest)
        if set(params) != {"gamma"}:
            raise ValueError(f"{name} expects gamma=<value>, got {rest!r}")
        if name == "hom":
            return Coefficient.homogeneous(params["gamma"])
        return Coefficient.asymptotically_homogeneous(params["gamma"])
    if name == "table" and rest:
        p, a = read_table(rest, ("p", "alpha"))
        return Coefficient.tabulated(p, a)
    raise ValueError(f"unrecognised coefficient {text!r}")


def _parse_params(text):
    out = {}
    for item in filter(None, text.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"malformed parameter {item!r}")
        out[key.strip()] = float(val)
    return out


def read_table(path, columns):
    """Read two named float columns from a CSV file with a header row."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not set(columns) <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected columns {', '.join(columns)}")
        rows = [(float(r[columns[0]]), float(r[columns[1]])) for r in reader]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    x, y = zip(*rows)
    return np.array(x), np.array(y)


# ---------------------------------------------------------------------------
# quadrature

def _quad(f, a, b, points=None):
    kw = dict(epsrel=QUAD_EPSREL, epsabs=QUAD_EPSABS, limit=QUAD_LIMIT, full_output=1)
    if points is not None and math.isfinite(a) and math.isfinite(b):
        pts = [q for q in points if a < q < b]
        if pts:
            kw["points"] = pts
    out = quad(f, a, b, **kw)
    if len(out) > 3:
        val, err = out[0], out[1]
        # QUADPACK is conservative; accept results whose error estimate is
        # within a small multiple of the requested tolerance.
        if not (math.isfinite(val) and err <= 100 * max(QUAD_EPSABS, QUAD_EPSREL * abs(val))):
            raise QuadratureFailure(f"quadrature on [{a}, {b}] failed: {out[3]}")
    return out[0]


def _scalar_alpha(coeff):
    def f(s):
        v = float(coeff.values(np.float64(s)))
        if not v > 0:
            raise NonPositiveError(f"alpha({s}) = {v} is not positive")
        return v
    return f


def _check_interval(coeff, a, b, weight_power):
    """Reject intervals on which the weighted integrand is not integrable.

    ``weight_power`` is 0 for alpha, 1 for s*alpha (which vanishes at 0).
    """
    lo, hi = min(a, b), max(a, b)
    if coeff.family == HOMOGENEOUS and lo <= 0.0 <= hi and lo != hi:
        if coeff.gamma >= 1.0 + weight_power:
            raise DomainError(
                f"|p|^-{coeff.gamma:g} is not integrable at 0 with weight s^{weight_power}")
    dlo, dhi = coeff.domain
    if lo < dlo or hi > dhi:
        raise DomainError(f"interval [{lo}, {hi}] leaves the declared domain")


def _hom_F(g, s):
    # antiderivative of |s|^-g on either side of 0
    sign = math.copysign(1.0, s)
    if g == 1.0:
        return sign * math.log(abs(s))
    return sign * abs(s) ** (1.0 - g) / (1.0 - g)


def _hom_G(g, s):
    # antiderivative of s |s|^-g on either side of 0
    if g == 2.0:
        return math.log(abs(s))
    return abs(s) ** (2.0 - g) / (2.0 - g)


def alpha_integral(coeff, a, b):
    """``int_a^b alpha(s) ds`` for finite ``a``, ``b``."""
    if a == b:
        return 0.0
    if b < a:
        return -alpha_integral(coeff, b, a)
    _check_interval(coeff, a, b, 0)
    fam = coeff.family
    if fam == HEAT:
        return b - a
    if fam == CSF:
        if a * b > -1.0:
            return math.atan((b - a) / (1.0 + a * b))
        return math.atan(b) - math.atan(a)
    if fam == NPCSF:
        return b / math.hypot(1.0, b) - a / math.hypot(1.0, a)
    if fam == HOMOGENEOUS:
        return _hom_F(coeff.gamma, b) - _hom_F(coeff.gamma, a)
    pts = coeff.samples[0] if fam == TABULATED else [0.0]
    return _quad(_scalar_alpha(coeff), a, b, points=pts)


def s_alpha_integral(coeff, a, b):
    """``int_a^b s alpha(s) ds`` for finite ``a``, ``b``."""
    if a == b:
        return 0.0
    if b < a:
        return -s_alpha_integral(coeff, b, a)
    _check_interval(coeff, a, b, 1)
    fam = coeff.family
    if fam == HEAT:
        return 0.5 * (b - a) * (b + a)
    if fam == CSF:
        return 0.5 * (math.log1p(b * b) - math.log1p(a * a))
    if fam == NPCSF:
        return 1.0 / math.hypot(1.0, a) - 1.0 / math.hypot(1.0, b)
    if fam == HOMOGENEOUS:
        g = coeff.gamma
        return _hom_G(g, b) - _hom_G(g, a)
    f = _scalar_alpha(coeff)
    pts = coeff.samples[0] if fam == TABULATED else [0.0]
    return _quad(lambda s: s * f(s), a, b, points=pts)


def integrate_A(coeff, xi):
    """``A(xi) = int_0^xi alpha``."""
    if not math.isfinite(xi):
        raise DomainError("xi must be finite; use limits() for the ends")
    return alpha_integral(coeff, 0.0, float(xi))


def integrate_B(coeff, xi):
    """``B(xi) = int_0^xi s alpha``; nonnegative, zero at the origin."""
    if not math.isfinite(xi):
        raise DomainError("xi must be finite; use limits() for the ends")
    return s_alpha_integral(coeff, 0.0, float(xi))


# ---------------------------------------------------------------------------
# limits at +-infinity

@dataclass(frozen=True)
class IntegralPair:
    """Evaluators of A and B plus their extended-real limits at +-infinity.

    For homogeneous coefficients whose integrals diverge at the origin, the
    finite limits are measured from ``|p| = 1`` instead of from 0 (only the
    finite/infinite split carries information there).
    """

    coefficient: Coefficient
    a_plus: float
    a_minus: float
    b_plus: float
    b_minus: float

    def A(self, xi):
        return integrate_A(self.coefficient, xi)

    def B(self, xi):
        return integrate_B(self.coefficient, xi)


def _tail(f, sign):
    # int_0^{sign*inf} f, computed by QUADPACK's infinite-range rule
    if sign > 0:
        return _quad(f, 0.0, INF)
    return -_quad(f, -INF, 0.0)


def _probe_limit(f, sign):
    """Classify ``int_0^{sign*inf} f`` by integrating over doublings.

    Returns +-inf, a finite value, or raises :class:`Inconclusive`.
    """
    total = _quad(f, 0.0, 1.0) if sign > 0 else -_quad(f, -1.0, 0.0)
    incs = []
    for k in range(PROBE_MAX_EXP):
        lo, hi = 2.0 ** k, 2.0 ** (k + 1)
        inc = _quad(f, lo, hi) if sign > 0 else -_quad(f, -hi, -lo)
        total += inc
        incs.append(abs(inc))
        if abs(inc) < PROBE_CAUCHY:
            return total
    last = incs[-8:]
    if last[-1] > PROBE_GROWTH or min(last) >= 0.5 * last[0]:
        return math.copysign(INF, total)
    raise Inconclusive(f"cannot classify the integral at {'+' if sign > 0 else '-'}infinity "
                       f"up to p = 2^{PROBE_MAX_EXP}")


@functools.lru_cache(maxsize=256)
def limits(coeff):
    """Limits of A and B at +-infinity as an :class:`IntegralPair`."""
    fam = coeff.family
    if fam == HEAT:
        return IntegralPair(coeff, INF, -INF, INF, INF)
    if fam == CSF:
        return IntegralPair(coeff, math.pi / 2, -math.pi / 2, INF, INF)
    if fam == NPCSF:
        return IntegralPair(coeff, 1.0, -1.0, 1.0, 1.0)
    if fam == TABULATED:
        # alpha is clamped to a positive constant outside the table
        return IntegralPair(coeff, INF, -INF, INF, INF)
    if fam == HOMOGENEOUS:
        g = coeff.gamma
        a = INF if g <= 1.0 else 1.0 / (g - 1.0)
        b = INF if g <= 2.0 else 1.0 / (g - 2.0)
        return IntegralPair(coeff, a, -a, b, b)
    f = _scalar_alpha(coeff)
    sf = lambda s: s * f(s)  # noqa: E731
    if fam == ASYMHOM:
        g = coeff.gamma
        a_p = INF if g <= 1.0 else _tail(f, +1)
        a_m = -INF if g <= 1.0 else _tail(f, -1)
        b_p = INF if g <= 2.0 else _tail(sf, +1)
        b_m = INF if g <= 2.0 else _tail(sf, -1)
        return IntegralPair(coeff, a_p, a_m, b_p, b_m)
    lo, hi = coeff.domain
    if math.isfinite(lo) or math.isfinite(hi):
        raise Inconclusive("limits need an evaluator defined on the whole line")
    return IntegralPair(coeff, _probe_limit(f, +1), _probe_limit(f, -1),
                        _probe_limit(sf, +1), _probe_limit(sf, -1))


def total_alpha(coeff, sign):
    """``int_0^{sign*inf} alpha`` taken literally (``inf`` for homogeneous)."""
    if coeff.family == HOMOGENEOUS:
        return math.copysign(INF, sign)
    lim = limits(coeff)
    return lim.a_plus if sign > 0 else lim.a_minus


# ---------------------------------------------------------------------------
# moment integral

def moment(coeff, z, Z):
    """``int_z^Z (s - z) alpha(s) ds`` for ``z <= Z``; ``Z`` may be ``inf``."""
    z = float(z)
    Z = float(Z)
    if not math.isfinite(z):
        raise DomainError("z must be finite")
    if Z < z:
        raise DomainError(f"moment needs z <= Z, got z={z}, Z={Z}")
    if Z == z:
        return 0.0
    fam = coeff.family
    if not math.isfinite(Z):
        return _moment_to_infinity(coeff, z)
    _check_interval(coeff, z, Z, 0 if z != 0.0 else 1)
    d = Z - z
    if fam == HEAT:
        return 0.5 * d * d
    if coeff.has_closed_form and d >= 1e-2 * (1.0 + abs(z)):
        val = s_alpha_integral(coeff, z, Z) - z * alpha_integral(coeff, z, Z)
        return max(val, 0.0)
    f = _scalar_alpha(coeff)
    pts = list(coeff.samples[0]) if fam == TABULATED else None
    return _quad_dyadic(lambda s: (s - z) * f(s), z, Z, pts)


def _quad_dyadic(f, a, b, points=None):
    # cut [a, b] at 0 and +-2^k so every piece sees alpha at a single scale
    cuts = [0.0]
    e = 1.0
    while e < max(abs(a), abs(b)):
        cuts += [e, -e]
        e *= 2.0
    edges = sorted({a, b, *(c for c in cuts if a < c < b)})
    return sum(_quad(f, lo, hi, points=points) for lo, hi in zip(edges[:-1], edges[1:]))


def _moment_to_infinity(coeff, z):
    fam = coeff.family
    lim = limits(coeff)
    if fam == HOMOGENEOUS:
        _check_interval(coeff, z, max(z, 0.0) + 1.0, 0 if z != 0.0 else 1)
        g = coeff.gamma
        if g <= 2.0:
            return INF
        if z > 0:
            return z ** (2.0 - g) / ((g - 1.0) * (g - 2.0))
        # z < 0 and z = 0 are rejected by the integrability check for g > 2
    if math.isinf(lim.b_plus) or math.isinf(lim.a_plus):
        return INF
    if fam == NPCSF:
        # sqrt(1+z^2) - z, written without cancellation
        return 1.0 / (math.hypot(1.0, z) + z) if z > 0 else math.hypot(1.0, z) - z
    f = _scalar_alpha(coeff)
    if z < 0:
        # int_0^inf (s - z) alpha = b+ - z a+, both finite here
        return moment(coeff, z, 0.0) + lim.b_plus - z * lim.a_plus
    # measure the tail in units of z so the integrand is scale free
    c = max(z, 1.0)
    return c * c * _quad(lambda w: w * f(z + c * w), 0.0, INF)


def moment_below(coeff, Z, z):
    """``int_Z^z (z - s) alpha(s) ds`` for ``Z <= z``; ``Z`` may be ``-inf``.

    This is the weight appearing in the lower gradient bound.
    """
    if coeff.is_even:
        return moment(coeff, -z, -Z)
    return moment(reflect(coeff), -z, -Z)


def reflect(coeff):
    """The coefficient ``p -> alpha(-p)``."""
    if coeff.is_even:
        return coeff
    if coeff.family == TABULATED:
        p, a = coeff.samples
        return Coefficient.tabulated(-p[::-1], a[::-1])
    f = coeff.evaluator
    lo, hi = coeff.domain
    g = lambda p: f(-np.asarray(p, dtype=float))  # noqa: E731
    if coeff.family == ASYMHOM:
        return Coefficient(ASYMHOM, gamma=coeff.gamma, evaluator=g)
    return Coefficient.custom(g, domain=(-hi, -lo), lower_bound=coeff.lower_bound,
                              upper_bound=coeff.upper_bound)
