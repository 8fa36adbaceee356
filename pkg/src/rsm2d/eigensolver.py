"""Full dense eigendecomposition of the spectral operator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .discretization import BasisSpec, SpectralOperator
from .errors import EigensolverError


@dataclass(frozen=True, eq=False)
class EigenSolution:
    """All N^2 states of one operator, energies ascending.

    ``coefficients[k]`` is the N x N matrix A[m-1, n-1] of state k, scaled
    so the wavefunction has unit norm on the box and its largest-magnitude
    coefficient is positive.
    """

    basis: BasisSpec
    energies: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        self.energies.setflags(write=False)
        self.coefficients.setflags(write=False)

    def __len__(self):
        return len(self.energies)

    @property
    def vectors(self) -> np.ndarray:
        """Unit-norm flat eigenvectors as columns (the raw matrix eigenvectors)."""
        b = self.basis
        flat = self.coefficients.reshape(len(self), -1).T
        return flat * (0.5 * math.sqrt(b.length_x * b.length_y))

    def wavefunction(self, state: int, x, y):
        return evaluate_wavefunction(self, state, x, y)

    def grid(self, state: int, m: int):
        return wavefunction_grid(self, state, m)


def _check_input(op: SpectralOperator) -> np.ndarray:
    d = op.entries
    if not np.all(np.isfinite(d)):
        raise EigensolverError("operator has non-finite entries")
    if not np.array_equal(d, d.T):
        raise EigensolverError("operator is not symmetric")
    return d


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def solve(op: SpectralOperator) -> EigenSolution:
    """All eigenpairs of D a = eps a via LAPACK's symmetric divide-and-conquer."""
    d = _check_input(op)
    try:
        w, v = scipy.linalg.eigh(d, driver="evd", check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverError(f"dense eigensolve failed: {exc}") from exc
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(v))):
        raise EigensolverError("eigensolver returned non-finite values")
    v = _fix_signs(v)
    b = op.basis
    n = b.n_basis
    coeffs = (v.T * (2.0 / math.sqrt(b.length_x * b.length_y))).reshape(len(w), n, n)
    return EigenSolution(b, w, np.ascontiguousarray(coeffs))


def eigenvalues(op: SpectralOperator, count: int | None = None) -> np.ndarray:
    """Lowest ``count`` eigenvalues only (all when None); cheaper than :func:`solve`."""
    d = _check_input(op)
    subset = None if count is None else [0, min(count, len(d)) - 1]
    try:
        w = scipy.linalg.eigvalsh(d, subset_by_index=subset, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverError(f"dense eigensolve failed: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise EigensolverError("eigensolver returned non-finite values")
    return w


def residuals(op: SpectralOperator, sol: EigenSolution) -> np.ndarray:
    """||D a_k - eps_k a_k||_2 for every unit-norm eigenvector a_k."""
    v = sol.vectors
    r = op.entries @ v - v * sol.energies
    return np.linalg.norm(r, axis=0)


def _sines(n: int, coord, length: float) -> np.ndarray:
    coord = np.asarray(coord, dtype=float)
    s = np.sin(np.multiply.outer(coord, np.arange(1, n + 1)) * (math.pi / length))
    # sin(m pi) is not exactly zero in floating point; the basis vanishes on the walls
    s[(coord == 0.0) | (coord == length)] = 0.0
    return s


def _check_state(sol: EigenSolution, state: int) -> int:
    if not 0 <= state < len(sol):
        raise IndexError(f"state {state} out of range for {len(sol)} states")
    return int(state)


def evaluate_wavefunction(sol: EigenSolution, state: int, x, y):
    """psi_k(x, y) = sum A[m, n] sin(m pi x/Lx) sin(n pi y/Ly); x and y broadcast."""
    state = _check_state(sol, state)
    b = sol.basis
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any((x < 0) | (x > b.length_x)) or np.any((y < 0) | (y > b.length_y)):
        raise ValueError("point outside the box [0, Lx] x [0, Ly]")
    x, y = np.broadcast_arrays(x, y)
    sx = _sines(b.n_basis, x, b.length_x)
    sy = _sines(b.n_basis, y, b.length_y)
    out = np.einsum("...m,mn,...n->...", sx, sol.coefficients[state], sy)
    return float(out) if out.ndim == 0 else out


def wavefunction_grid(sol: EigenSolution, state: int, m: int):
    """(xs, ys, psi) on an m x m uniform grid including the box edges; psi[i, j] = psi(xs[i], ys[j])."""
    state = _check_state(sol, state)
    if m < 2:
        raise ValueError("grid needs at least 2 points per axis")
    b = sol.basis
    xs = np.linspace(0.0, b.length_x, m)
    ys = np.linspace(0.0, b.length_y, m)
    psi = _sines(b.n_basis, xs, b.length_x) @ sol.coefficients[state] @ _sines(b.n_basis, ys, b.length_y).T
    return xs, ys, psi
