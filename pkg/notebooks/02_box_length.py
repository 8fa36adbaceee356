"""
Choosing the box length
=======================

For a fixed basis size the ground energy is a function of the box length L.
Too small a box squeezes the state; too large a box wastes resolution. The
variational bound makes the minimum over L the best choice.
"""

# %%
import numpy as np

from rsm2d import build_curve, find_optimal_length, ground_energy, potentials

for L in np.linspace(4, 16, 13):
    print(f"L = {L:5.1f}   E0 = {ground_energy(10, L, potentials.sho):.15f}")

# %%
l_hat, e0 = find_optimal_length(10, potentials.sho)
print(f"N = 10: L_hat = {l_hat:.4f}, E0 = {e0:.15f}")

# %%
# Sample L_hat at a few N and interpolate with a monotone cubic.
curve = build_curve([6, 10, 14, 18, 22], potentials.sho)
for n, l, e in curve.samples:
    print(n, round(l, 4), e)
print("interpolated L_hat(16) =", curve(16))

# %%
# Boxes without a confining potential have no interior minimum.
from rsm2d import NoInteriorMinimumError

try:
    find_optimal_length(6, potentials.free)
except NoInteriorMinimumError as exc:
    print(exc)
