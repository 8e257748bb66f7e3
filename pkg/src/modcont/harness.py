"""End-to-end verification experiments.

``two_point_check`` evaluates ``u(y,t) - u(x,t) - 2 phi((y-x)/2, t)`` over
every grid pair; ``sharpness_experiment`` runs the odd reflection of
``v_k`` and compares the oscillation it attains with the bracket for psi_+.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import PeriodMismatch
from .modulus import PeriodicField, _pair_differences, measured_modulus, odd_periodic_extension
from .solver import GeneralCoefficient, Periodic, SolverConfig, solve
from .supersolution import minimal_supersolution

DEFAULT_SEED = 20240607
TWO_POINT_RTOL = 1e-6


def default_seed():
    """Base seed, overridable through ``MODCONT_SEED``."""
    return int(os.environ.get("MODCONT_SEED", DEFAULT_SEED))


def random_fourier_data(n, period, seed, modes=12, decay=2.0):
    """Samples of a random trigonometric polynomial with ``k^-decay`` amplitudes.

    Lipschitz by construction; the field is rescaled to unit oscillation.
    """
    rng = np.random.default_rng(seed)
    x = np.arange(n) * (period / n)
    u = np.zeros(n)
    for k in range(1, modes + 1):
        a, b = rng.standard_normal(2) / k ** decay
        w = 2.0 * math.pi * k * x / period
        u += a * np.cos(w) + b * np.sin(w)
    u -= u.min()
    return PeriodicField(period, u / u.max())


def perturbed_coefficient(coeff, period):
    """``alpha(p) (1 + sin^2(2 pi x / L) / 2)``, which stays above ``alpha``."""
    def evaluator(x, t, u, p):
        return coeff.values(p) * (1.0 + 0.5 * np.sin(2.0 * math.pi * x / period) ** 2)
    return GeneralCoefficient(evaluator, coeff)


# ---------------------------------------------------------------------------
# two-point function

@dataclass(frozen=True)
class TwoPointReport:
    max_Z: float
    witness: tuple
    tolerance: float

    @property
    def passed(self):
        return self.max_Z <= self.tolerance

    def as_dict(self):
        return {"max_Z": self.max_Z, "witness": list(self.witness),
                "tolerance": self.tolerance, "tolerance_rule": "1e-6 * osc(u(., 0))",
                "pass": self.passed}


def two_point_check(u, phi):
    """Largest value of the two-point function over grid pairs and sampled times.

    ``u`` is a periodic trajectory, ``phi`` a trajectory on ``[0, L/2]``
    sampled at every time of ``u``.
    """
    if not u.periodic:
        raise ValueError("u must be a periodic trajectory")
    L = u.config.boundary.length
    if not math.isclose(phi.x[-1] - phi.x[0], 0.5 * L, rel_tol=1e-12):
        raise PeriodMismatch(f"phi spans {phi.x[-1] - phi.x[0]}, expected L/2 = {L / 2}")
    n = u.x.size
    half = 0.5 * np.arange(1, n) * (L / n)
    u0 = u.fields[0]
    tol = TWO_POINT_RTOL * float(u0.max() - u0.min())
    worst, witness = -math.inf, (math.nan, math.nan, math.nan)
    for t, values in zip(u.times, u.fields):
        bound = 2.0 * np.interp(half, phi.x, phi.at(t))
        Z = _pair_differences(values) - bound[:, None]
        k, i = np.unravel_index(np.argmax(Z), Z.shape)
        if Z[k, i] > worst:
            worst = float(Z[k, i])
            x = float(u.x[i])
            witness = (x, x + 2.0 * half[k], float(t))
    return TwoPointReport(worst, witness, tol)


def modulus_experiment(coeff, u0, k, config, run_coeff=None, bracket=None):
    """Solve from ``u0`` and check its measured modulus' psi_+ bracket upper.

    ``run_coeff`` (default ``coeff``) drives the periodic run; the bracket is
    always built from ``coeff``.  The bracket uses ``config.n`` intervals on
    the half period so that pair half-distances fall on its nodes.  Pass a
    ``bracket`` from :func:`modulus_bracket` to reuse it across runs.
    """
    L = u0.period
    run_cfg = replace(config, n=u0.n, boundary=Periodic(L))
    traj = solve(run_coeff if run_coeff is not None else coeff, u0.values, run_cfg)
    if bracket is None:
        bracket = modulus_bracket(coeff, u0, k, config)
    return two_point_check(traj, bracket.upper)


def modulus_bracket(coeff, u0, k, config):
    """psi_+ bracket for the measured modulus of ``u0`` on the matching grid."""
    return minimal_supersolution(coeff, measured_modulus(u0), k, replace(config, n=u0.n))


# ---------------------------------------------------------------------------
# sharpness

@dataclass(frozen=True)
class SharpnessReport:
    k: int
    z: float
    t: float
    attained: float
    bound: float
    half_gap: float

    @property
    def ratio(self):
        return self.attained / self.bound

    def as_dict(self):
        return dict(self.__dict__, ratio=self.ratio)


def sharpness_experiment(coeff, psi, k, z, t, config):
    """Oscillation attained by the odd reflection of ``v_k`` versus ``2 psi_+(z, t)``.

    ``config`` fixes the half-period grid (``n`` intervals) and scheme; the
    periodic run uses ``2 n`` nodes on the full period.
    """
    X = psi.half_period
    if not 0 < z < X:
        raise ValueError("z must lie in (0, L/2)")
    if not t > 0:
        raise ValueError("t must be positive")
    cfg = replace(config, t_final=float(t), output_times=(0.0, float(t)))
    bracket = minimal_supersolution(coeff, psi, k, cfg)
    u0 = odd_periodic_extension(bracket.lower.at(0.0), psi.period)
    run = SolverConfig(n=u0.n, t_final=float(t), boundary=Periodic(psi.period),
                       scheme=config.scheme, cfl_safety=config.cfl_safety,
                       output_times=(0.0, float(t)), dt=config.dt, alpha_cap=config.alpha_cap)
    u = solve(coeff, u0.values, run).at(t)
    xs = run.grid()
    shifted = np.interp(np.mod(xs + 2.0 * z, psi.period), np.append(xs, psi.period), np.append(u, u[0]))
    attained = float(np.max(np.abs(shifted - u)))
    mid, half_gap = bracket.estimate(t)
    bound = 2.0 * float(np.interp(z, bracket.z, mid))
    return SharpnessReport(k, float(z), float(t), attained, bound,
                           float(np.interp(z, bracket.z, half_gap)))


def run_cli(argv=None):
    """Command-line entry point; see :mod:`modcont.cli`."""
    from .cli import main
    return main(argv)
