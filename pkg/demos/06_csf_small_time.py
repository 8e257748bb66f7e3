"""Curve shortening from data of oscillation 1: a small-time slope bound.

An implicit barrier gives psi_+'(0, t) <= 2 t^(3/2) exp(1/(8t)).  The curve
is a small-time statement: it bottoms out near t = 1/12 and grows after.
Here it is set against the measured slope of the psi_+ bracket.
"""
from modcont import Coefficient, Dirichlet, ModulusFunction, SolverConfig, minimal_supersolution
from modcont.estimates import theorem1_bound
from modcont.supersolution import boundary_gradient

ts = (0.005, 0.01, 0.02, 0.05)
cfg = SolverConfig(256, 0.05, Dirichlet((0, 1)), output_times=ts)
br = minimal_supersolution(Coefficient.csf(), ModulusFunction.constant(0.5, 2.0), 32, cfg)
for t in ts:
    print(f"t = {t:5.3f}: measured slope {boundary_gradient(br, t)[0]:8.3f}, barrier {theorem1_bound(t, 1.0):.4g}")
