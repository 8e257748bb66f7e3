"""Gradient bounds at positive times from a modulus of continuity.

A periodic solution whose initial oscillation is at most 2M gets a slope
bound at every t > 0 once the diffusivity decays slowly enough.  For the heat
equation the bound is sqrt(2) M / sqrt(t); for curve shortening it is
sqrt(exp(2 M^2 / t) - 1).
"""
import math

import numpy as np

from modcont import Coefficient, ModulusFunction, gradient_bound_upper
from modcont.estimates import fit_time_exponent

psi = ModulusFunction.constant(1.0, 2.0)
print(f"{'t':>8} {'heat':>12} {'closed form':>12} {'csf':>12} {'closed form':>12}")
for t in (0.05, 0.1, 0.5, 1.0):
    heat = gradient_bound_upper(Coefficient.heat(), psi, t)
    csf = gradient_bound_upper(Coefficient.csf(), psi, t)
    print(f"{t:8.3f} {heat:12.6f} {math.sqrt(2 / t):12.6f} {csf:12.6f} {math.sqrt(math.exp(2 / t) - 1):12.6f}")

# Hoelder data K x^beta: the bound blows up like t^(-(1 - beta)/2) for heat
ts = np.logspace(-4, -1, 7)
for beta in (0.3, 0.5, 0.8):
    slope = fit_time_exponent(Coefficient.heat(), ModulusFunction.hoelder(1.0, beta, 2.0), ts)
    print(f"beta = {beta}: fitted exponent {slope:+.4f}, predicted {-(1 - beta) / 2:+.4f}")
