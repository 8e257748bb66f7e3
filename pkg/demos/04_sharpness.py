"""The optimal modulus is attained.

Reflecting v_k oddly about 0 gives periodic data whose modulus is psi_k.  The
oscillation it keeps at time t approaches 2 psi_+(z, t) as k grows, so no
better modulus can hold for all data.
"""
from modcont import Coefficient, Dirichlet, ModulusFunction, SolverConfig
from modcont.harness import sharpness_experiment

psi = ModulusFunction.constant(1.0, 2.0)
cfg = SolverConfig(128, 0.04, Dirichlet((0, 1)))
for coeff in (Coefficient.heat(), Coefficient.csf()):
    ratios = [sharpness_experiment(coeff, psi, k, 0.5, 0.04, cfg).ratio for k in (8, 16, 32, 64)]
    print(coeff.describe(), " ".join(f"{r:.3f}" for r in ratios))
