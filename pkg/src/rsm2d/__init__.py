"""Bound states of the 2D time-independent Schrödinger equation.

Fourier-sine Galerkin discretization on a box, one dense symmetric
eigensolve for the whole spectrum, and a per-basis-size optimization of the
box length that minimizes the ground-state energy.
"""

from .diagnostics import (
    ShoReference,
    cluster_degeneracies,
    convergence_study,
    delta_E,
    delta_hat_E,
    delta_psi,
    fit_log_decay,
    hermite,
)
from .discretization import BasisSpec, SpectralOperator, assemble, flatten, unflatten
from .domain_optimizer import (
    LhatCurve,
    build_curve,
    find_optimal_length,
    find_optimal_lengths,
    ground_energy,
    read_curve,
    write_curve,
)
from .eigensolver import EigenSolution, eigenvalues, evaluate_wavefunction, solve, wavefunction_grid
from .errors import (
    DegenerateStateError,
    EigensolverError,
    InvalidPotentialError,
    NoInteriorMinimumError,
    RSMError,
)
from .potentials import (
    PhysicalProblem,
    SeparablePotential,
    builder_for,
    coupling_1d,
    combine_2d,
    free,
    from_monomials,
    parse_terms,
    qcd,
    sho,
    to_dimensionless,
)

__version__ = "0.1.0"
