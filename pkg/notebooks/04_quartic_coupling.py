"""
A potential with no exact solution
==================================

H = p_x^2 + p_y^2 + x^2 y^2. Classically the valleys along the axes are
open, yet the quantum spectrum is discrete. No exact answer exists, so
accuracy is judged by comparing N with N+1.
"""

# %%
import numpy as np

from rsm2d import BasisSpec, assemble, delta_hat_E, find_optimal_length, potentials, solve

N = 30
L, _ = find_optimal_length(N, potentials.qcd, (8, 25))
print(f"L_hat({N}) = {L:.4f}")
sol = solve(assemble(BasisSpec.square(N, L), potentials.qcd(L)))
sol1 = solve(assemble(BasisSpec.square(N + 1, L), potentials.qcd(L)))
for k in range(12):
    print(f"{k:2d}  {sol.energies[k]:.15f}  est. error {delta_hat_E(sol, sol1, k, check_overlap=False):.1e}")

# %%
# The ground state peaks at the centre and leaks further along the axes than
# along the diagonals.
xs, ys, psi = sol.grid(0, 101)
i, j = np.unravel_index(np.argmax(np.abs(psi)), psi.shape)
print("peak at", xs[i], ys[j])
print("on axis vs on diagonal, same distance from centre:", abs(psi[50, 80]), abs(psi[71, 71]))

# %%
# Any polynomial potential can be written as text; this is the same operator.
from rsm2d import builder_for

same = builder_for("1*x^2*y^2")(L)
print(np.allclose(assemble(BasisSpec.square(8, L), same).entries,
                  assemble(BasisSpec.square(8, L), potentials.qcd(L)).entries))
