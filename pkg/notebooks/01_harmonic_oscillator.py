"""
The 2D harmonic oscillator in a box
===================================

Solve H = p_x^2 + p_y^2 + (x^2 + y^2) in units where hbar*omega = 2, so the
exact levels are 2(n_x + n_y + 1). The box is [0, L]^2 with the well at its
centre.
"""

# %%
import numpy as np

from rsm2d import BasisSpec, assemble, potentials, solve
from rsm2d import diagnostics as dg

N, L = 22, 11.97
op = assemble(BasisSpec.square(N, L), potentials.sho(L))
sol = solve(op)
print(f"{op.basis.dim} basis functions, lowest energy {sol.energies[0]:.17g}")

# %%
# Compare the lowest 21 states with the exact levels. Degenerate levels show
# up as clusters of nearly equal energies.
exact = dg.sho_exact_energies(21)
for k, (e, ex) in enumerate(zip(sol.energies[:21], exact)):
    print(f"{k:2d}  {e:.17g}  delta_E = {dg.delta_E(e, ex):.2e}")
print("cluster sizes:", [len(c) for c in dg.cluster_degeneracies(sol.energies[:21])])

# %%
# Wavefunction error on a 101 x 101 grid. Only non-degenerate states have a
# unique eigenvector to compare against, so the ground state is the natural check.
print("delta_psi(ground) =", dg.delta_psi(sol, 0, dg.ShoReference(0, 0)))

# the wavefunction at the box centre vs 1/sqrt(pi)
print(sol.wavefunction(0, L / 2, L / 2), 1 / np.sqrt(np.pi))
