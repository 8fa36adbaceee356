"""
Exponential convergence
=======================

Along the optimal-length curve the ground-state error drops by a roughly
constant factor per added basis function until it hits double-precision
roundoff. The self-estimate from N and N+1 tracks the true error closely.
"""

# %%
from rsm2d import build_curve, convergence_study, fit_log_decay, potentials

curve = build_curve([6, 10, 14, 18, 22], potentials.sho)
rows = convergence_study(range(8, 21), curve, 2.0, potentials.sho)
est = convergence_study(range(8, 21), curve, None, potentials.sho)
print(" N   delta_E    delta_hat_E")
for (n, err), (_, e_hat) in zip(rows, est):
    print(f"{n:2d}  {err:.3e}  {e_hat:.3e}")

# %%
fit = fit_log_decay(rows)
print(f"log10 error falls by {-fit.slope:.3f} per unit N (R^2 = {fit.r_squared:.4f})")
