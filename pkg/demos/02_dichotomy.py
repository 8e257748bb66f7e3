"""Which power-law diffusivities give Lipschitz bounds from bounded data.

alpha(p) ~ |p|^(-gamma) for large |p|.  Bounded initial data become
Lipschitz instantly exactly when gamma <= 2; Hoelder data of exponent beta
cope with faster decay, up to gamma < 2 / (1 - beta).
"""
from modcont.estimates import power_law_table

rows = power_law_table(betas=(0.5,))
print(f"{'family':>13} {'gamma':>6} {'bounded':>8} {'const psi':>10} {'hoelder 1/2':>12}")
for r in rows:
    print(f"{r['family']:>13} {r['gamma']:6.1f} {r['bounded_above']:>8} {r['constant_psi']:>10} "
          f"{r['hoelder_0.5']:>12}")
