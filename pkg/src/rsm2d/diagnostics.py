"""Error measures, exact oscillator references and convergence studies."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .domain_optimizer import ground_energy
from .eigensolver import EigenSolution, wavefunction_grid
from .errors import DegenerateStateError

DEGENERACY_TOL = 1e-6
GRID_M = 101


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x) by the three-term recurrence.

    Works on floats, numpy arrays, ints and Fractions alike.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    h_prev, h = 1 + 0 * x, 2 * x
    if n == 0:
        return h_prev
    for k in range(1, n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
    return h


@dataclass(frozen=True)
class ShoReference:
    """Exact isotropic oscillator state in units of hbar*omega/2, origin-centred."""

    n_x: int
    n_y: int

    @property
    def energy(self) -> float:
        return 2.0 * (self.n_x + self.n_y + 1)

    def wavefunction(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        norm = math.sqrt(math.pi * 2.0 ** (self.n_x + self.n_y)
                         * math.factorial(self.n_x) * math.factorial(self.n_y))
        return hermite(self.n_x, x) * hermite(self.n_y, y) * np.exp(-(x**2 + y**2) / 2) / norm

    def in_box(self, x, y, length_x: float, length_y: float):
        """Same state shifted to the box [0, Lx] x [0, Ly]."""
        return self.wavefunction(np.asarray(x) - length_x / 2, np.asarray(y) - length_y / 2)


def sho_levels(count: int) -> list:
    """First ``count`` exact states sorted by energy.

    Within a level the order (0, n), (1, n-1), ... is arbitrary; only the
    energies mean anything for degenerate levels.
    """
    out = []
    level = 0
    while len(out) < count:
        out.extend((nx, level - nx) for nx in range(level + 1))
        level += 1
    return [ShoReference(nx, ny) for nx, ny in out[:count]]


def sho_exact_energies(count: int) -> np.ndarray:
    return np.array([r.energy for r in sho_levels(count)])


def delta_E(computed: float, exact: float) -> float:
    """|computed - exact| / |exact|."""
    if exact == 0:
        raise ValueError("relative error undefined for exact value 0")
    return abs(computed - exact) / abs(exact)


def cluster_degeneracies(energies: Sequence[float], tol: float = DEGENERACY_TOL) -> list:
    """Group sorted energies whose consecutive relative gap is below ``tol``.

    Returns a list of index lists.
    """
    e = np.asarray(energies, dtype=float)
    if len(e) == 0:
        return []
    if np.any(np.diff(e) < 0):
        raise ValueError("energies must be sorted ascending")
    clusters = [[0]]
    for i in range(1, len(e)):
        scale = max(abs(e[i]), abs(e[i - 1]), np.finfo(float).tiny)
        if (e[i] - e[i - 1]) / scale < tol:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return clusters


def cluster_of(energies: Sequence[float], state: int, tol: float = DEGENERACY_TOL) -> list:
    for c in cluster_degeneracies(energies, tol):
        if state in c:
            return c
    raise IndexError(f"state {state} out of range")


def _centred_overlap(sol_a: EigenSolution, states_a, sol_b: EigenSolution, state_b: int,
                     m: int = 121) -> float:
    # norm of the projection of b's state onto span(a's states), on a centred grid
    la = min(sol_a.basis.length_x, sol_b.basis.length_x)
    lb = min(sol_a.basis.length_y, sol_b.basis.length_y)
    u = np.linspace(-la / 2, la / 2, m)
    v = np.linspace(-lb / 2, lb / 2, m)
    w = np.outer(np.gradient(u), np.gradient(v))

    def grid(sol, k):
        b = sol.basis
        xs = np.clip(u + b.length_x / 2, 0, b.length_x)
        ys = np.clip(v + b.length_y / 2, 0, b.length_y)
        return sol.wavefunction(k, xs[:, None], ys[None, :])

    psi_b = grid(sol_b, state_b)
    proj = [np.sum(w * grid(sol_a, k) * psi_b) for k in states_a]
    return float(np.sqrt(np.sum(np.square(proj))))


def delta_hat_E(sol_n: EigenSolution, sol_n1: EigenSolution, state: int,
                check_overlap: bool = True, tol: float = DEGENERACY_TOL) -> float:
    """Self-estimated error |eps_N - eps_{N+1}| / |eps_{N+1}|, states paired by sorted position.

    Warns when the paired states look different (overlap of the N+1 state
    with the matching degenerate cluster at N below 0.5), which means the
    spectrum reordered between the two basis sizes.
    """
    if not (0 <= state < len(sol_n) and state < len(sol_n1)):
        raise IndexError(f"state {state} not available in both solutions")
    e_n = float(sol_n.energies[state])
    e_n1 = float(sol_n1.energies[state])
    if check_overlap:
        overlap = _centred_overlap(sol_n, cluster_of(sol_n.energies, state, tol), sol_n1, state)
        if overlap < 0.5:
            warnings.warn(f"state {state}: overlap {overlap:.3f} between N and N+1 suggests "
                          "the spectrum reordered", RuntimeWarning, stacklevel=2)
    return delta_E(e_n, e_n1)


def delta_psi(sol: EigenSolution, state: int, reference: ShoReference, m: int = GRID_M,
              tol: float = DEGENERACY_TOL) -> float:
    """Normalized grid RMS difference between computed and exact wavefunctions.

    The m x m grid spans the box including its edges. The global sign of the
    computed state is chosen to minimise the result.
    """
    cluster = cluster_of(sol.energies, state, tol)
    if len(cluster) > 1:
        raise DegenerateStateError(
            f"state {state} belongs to degenerate cluster {cluster}; the solver returns an "
            "arbitrary rotation inside it, so a per-state comparison is meaningless")
    xs, ys, psi = wavefunction_grid(sol, state, m)
    b = sol.basis
    exact = reference.in_box(xs[:, None], ys[None, :], b.length_x, b.length_y)
    denom = np.sum(exact**2)
    num = min(np.sum((exact - psi) ** 2), np.sum((exact + psi) ** 2))
    return float(math.sqrt(num / denom))


@dataclass(frozen=True)
class ErrorReport:
    state: object
    delta_E: float | None
    delta_hat_E: float | None
    delta_psi: float | None = None
    grid_M: int = GRID_M

    def __post_init__(self):
        for name in ("delta_E", "delta_hat_E", "delta_psi"):
            v = getattr(self, name)
            if v is not None and not v >= 0:
                raise ValueError(f"{name} must be non-negative, got {v}")


def convergence_study(n_range: Sequence[int], curve: Callable, exact: float | None,
                      potential_builder: Callable, state: int = 0) -> list:
    """Per-N relative error of one state on the optimized length curve.

    With ``exact`` given this is delta_E at L = curve(N); with ``exact=None``
    it is the self-estimate delta_hat_E from N and N+1, each at its own
    curve length.
    """
    rows = []
    for n in n_range:
        e = ground_energy(int(n), curve(n), potential_builder, state)
        if exact is not None:
            rows.append((int(n), delta_E(e, exact)))
        else:
            e1 = ground_energy(int(n) + 1, curve(n + 1), potential_builder, state)
            rows.append((int(n), delta_E(e, e1)))
    return rows


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    r_squared: float
    n_points: int


def fit_log_decay(rows: Sequence, floor: float = 1e-13) -> DecayFit | None:
    """Least-squares line through log10(error) vs N, skipping errors below ``floor``.

    Returns None with fewer than two usable points.
    """
    pts = [(n, err) for n, err in rows if err >= floor]
    if len(pts) < 2:
        return None
    n, err = np.array(pts, dtype=float).T
    fit = stats.linregress(n, np.log10(err))
    return DecayFit(float(fit.slope), float(fit.intercept), float(fit.rvalue**2), len(pts))
