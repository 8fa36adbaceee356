"""Truncated 2D sine basis and the Galerkin operator matrix.

Basis functions are sin(m pi x / Lx) sin(n pi y / Ly) with m, n = 1..N. The
pair (m, n) is laid out row-major, so ``np.kron(A, B)`` of two N x N
per-axis matrices acts directly on the flattened coefficient vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidPotentialError
from .potentials import SeparablePotential, coupling_1d


@dataclass(frozen=True)
class BasisSpec:
    n_basis: int
    length_x: float
    length_y: float

    def __post_init__(self):
        if isinstance(self.n_basis, bool) or int(self.n_basis) != self.n_basis or self.n_basis < 1:
            raise ValueError(f"n_basis must be a positive integer, got {self.n_basis!r}")
        if not (self.length_x > 0 and self.length_y > 0):
            raise ValueError(f"lengths must be positive, got {self.length_x}, {self.length_y}")
        if not (math.isfinite(self.length_x) and math.isfinite(self.length_y)):
            raise ValueError("lengths must be finite")
        object.__setattr__(self, "n_basis", int(self.n_basis))
        object.__setattr__(self, "length_x", float(self.length_x))
        object.__setattr__(self, "length_y", float(self.length_y))

    @classmethod
    def square(cls, n_basis: int, length: float) -> "BasisSpec":
        return cls(n_basis, length, length)

    @property
    def dim(self) -> int:
        return self.n_basis**2

    def kinetic(self) -> np.ndarray:
        """Diagonal (m pi/Lx)^2 + (n pi/Ly)^2 in flat order."""
        m = np.arange(1, self.n_basis + 1)
        kx = (m * math.pi / self.length_x) ** 2
        ky = (m * math.pi / self.length_y) ** 2
        return (kx[:, None] + ky[None, :]).ravel()


def flatten(m: int, n: int, n_basis: int) -> int:
    """Flat index of basis pair (m, n), both 1-based."""
    if not (1 <= m <= n_basis and 1 <= n <= n_basis):
        raise IndexError(f"(m, n) = ({m}, {n}) outside [1, {n_basis}]^2")
    return (m - 1) * n_basis + (n - 1)


def unflatten(index: int, n_basis: int) -> tuple:
    if not 0 <= index < n_basis**2:
        raise IndexError(f"flat index {index} outside [0, {n_basis**2 - 1}]")
    q, r = divmod(index, n_basis)
    return q + 1, r + 1


@dataclass(frozen=True, eq=False)
class SpectralOperator:
    """Dense symmetric N^2 x N^2 matrix of the dimensionless Hamiltonian."""

    basis: BasisSpec
    entries: np.ndarray

    def __post_init__(self):
        n = self.basis.dim
        if self.entries.shape != (n, n):
            raise ValueError(f"entries must be {n}x{n}, got {self.entries.shape}")
        self.entries.setflags(write=False)


def assemble(basis: BasisSpec, potential: SeparablePotential) -> SpectralOperator:
    """Kinetic diagonal plus sum_t c_t kron(Cx_t, Cy_t)."""
    if (potential.length_x, potential.length_y) != (basis.length_x, basis.length_y):
        raise ValueError(
            f"potential is centred for box ({potential.length_x}, {potential.length_y}) "
            f"but basis has ({basis.length_x}, {basis.length_y})")
    n = basis.n_basis
    d = np.zeros((basis.dim, basis.dim))
    cache_x, cache_y = {}, {}
    for term in potential.terms:
        if term.coeff == 0.0:
            continue
        if term.poly_x not in cache_x:
            cache_x[term.poly_x] = coupling_1d(term.poly_x, n, basis.length_x).matrix
        if term.poly_y not in cache_y:
            cache_y[term.poly_y] = coupling_1d(term.poly_y, n, basis.length_y).matrix
        d += term.coeff * np.kron(cache_x[term.poly_x], cache_y[term.poly_y])
    d[np.diag_indices_from(d)] += basis.kinetic()
    if not np.all(np.isfinite(d)):
        raise InvalidPotentialError("operator has non-finite entries")
    return SpectralOperator(basis, d)
