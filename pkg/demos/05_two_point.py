"""The two-point test on random data.

For random periodic data we measure the sharpest concave modulus, evolve the
data, and check u(y) - u(x) <= 2 phi((y - x)/2, t) at every pair and time,
also with a diffusivity that depends on position.
"""
import numpy as np

from modcont import Coefficient, Dirichlet, SolverConfig
from modcont.harness import (default_seed, modulus_bracket, modulus_experiment, perturbed_coefficient,
                             random_fourier_data)

cfg = SolverConfig(128, 0.02, Dirichlet((0, 0.5)), output_times=tuple(np.linspace(0, 0.02, 6)))
for seed in range(default_seed(), default_seed() + 5):
    u0 = random_fourier_data(128, 1.0, seed)
    for coeff in (Coefficient.heat(), Coefficient.csf()):
        br = modulus_bracket(coeff, u0, 8, cfg)
        plain = modulus_experiment(coeff, u0, 8, cfg, bracket=br)
        varied = modulus_experiment(coeff, u0, 8, cfg, run_coeff=perturbed_coefficient(coeff, 1.0), bracket=br)
        print(f"seed {seed} {coeff.describe():5s} max Z {plain.max_Z:+.4f} / {varied.max_Z:+.4f}")
