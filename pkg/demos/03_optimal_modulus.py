"""Bracketing the optimal modulus psi_+ for the heat equation.

psi_+ is squeezed between the solution v_k started from a mollified modulus
and a rescaled copy of it.  For constant data on (0, 1) the exact answer is a
Fourier series, so we can watch the bracket close in on it as k grows.
"""
import math

import numpy as np

from modcont import Coefficient, Dirichlet, ModulusFunction, SolverConfig, minimal_supersolution
from modcont.supersolution import gap_scaling

t = 0.05
n = np.arange(1, 4002, 2)
exact = float(np.sum(4 / (n * math.pi) * np.sin(n * math.pi / 2) * np.exp(-(n * math.pi) ** 2 * t)))
psi = ModulusFunction.constant(1.0, 2.0)
cfg = SolverConfig(256, t, Dirichlet((0, 1)), output_times=(0.0, t))
for k in (4, 16, 64):
    br = minimal_supersolution(Coefficient.heat(), psi, k, cfg)
    mid, half = br.estimate(t)
    i = 128
    print(f"k = {k:3d}: psi_+(1/2, {t}) in [{mid[i] - half[i]:.5f}, {mid[i] + half[i]:.5f}]  exact {exact:.5f}")

res = gap_scaling(Coefficient.heat(), psi, (4, 8, 16, 32, 64), 0.5, t, cfg)
print(f"gap ~ k^{res.exponent:.3f}, fitted C(1/k + sqrt(t/k)) with C = {res.constant:.3f}")
