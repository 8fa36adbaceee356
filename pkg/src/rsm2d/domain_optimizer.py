"""Box-length optimization: for each basis size N, the box length that
minimizes the (ground) state energy, and a monotone interpolant L_hat(N).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from .discretization import BasisSpec, assemble
from .eigensolver import eigenvalues
from .errors import NoInteriorMinimumError, RSMError

log = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
N_SCAN = 17
L_TOL = 1e-3
DEFAULT_BRACKET = (2.0, 25.0)
DEFAULT_CURVE_N = (6, 10, 14, 18, 22)


def ground_energy(n_basis: int, length, potential_builder: Callable, state: int = 0) -> float:
    """Energy of ``state`` (0 = ground) for basis size N on a box of side ``length``.

    ``length`` may also be an ``(Lx, Ly)`` pair for anisotropic boxes.
    """
    if n_basis < 2:
        raise ValueError("n_basis must be >= 2")
    lx, ly = (length, length) if np.isscalar(length) else length
    if not (lx > 0 and ly > 0):
        raise ValueError("box lengths must be positive")
    op = assemble(BasisSpec(n_basis, lx, ly), potential_builder(lx, ly))
    return float(eigenvalues(op, state + 1)[state])


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = L_TOL):
    """Minimize a unimodal f on [a, b]; returns (x, f(x)) of the best point evaluated."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best = min((fc, c), (fd, d))
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
            best = min(best, (fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            best = min(best, (fd, d))
    return best[1], best[0]


def find_optimal_length(n_basis: int, potential_builder: Callable,
                        bracket: Sequence[float] = DEFAULT_BRACKET, state: int = 0,
                        n_scan: int = N_SCAN, tol: float = L_TOL):
    """Box length minimizing the energy of ``state`` for fixed N.

    A coarse scan of ``n_scan`` points must show an interior minimum; the
    neighbouring scan points then bracket a golden-section refinement.
    Returns ``(L_hat, E)``.
    """
    return _minimize_length(
        lambda L: ground_energy(n_basis, L, potential_builder, state), n_basis, bracket, n_scan, tol)


def _minimize_length(energy_of: Callable[[float], float], n_basis: int, bracket, n_scan: int, tol: float):
    lo, hi = map(float, bracket)
    if not 0 < lo < hi:
        raise ValueError(f"bracket must satisfy 0 < lo < hi, got {bracket}")
    cache: dict = {}

    def energy(length):
        if length not in cache:
            cache[length] = energy_of(length)
        return cache[length]

    grid = np.linspace(lo, hi, n_scan)
    values = np.array([energy(float(L)) for L in grid])
    i = int(np.argmin(values))
    if i == 0 or i == n_scan - 1:
        raise NoInteriorMinimumError(
            f"N={n_basis}: energy has no interior minimum in [{lo}, {hi}] "
            f"(lowest at L={grid[i]:.6g}); widen the bracket or check that the potential confines",
            n_basis=n_basis, bracket=(lo, hi))
    l_hat, e_hat = golden_section(energy, float(grid[i - 1]), float(grid[i + 1]), tol)
    if values[i] < e_hat:
        l_hat, e_hat = float(grid[i]), float(values[i])
    log.debug("N=%d: L_hat=%.6f E=%.17g (%d solves)", n_basis, l_hat, e_hat, len(cache))
    return l_hat, e_hat


def find_optimal_lengths(n_basis: int, potential_builder: Callable,
                         bracket_x: Sequence[float] = DEFAULT_BRACKET,
                         bracket_y: Sequence[float] | None = None, state: int = 0,
                         tol: float = L_TOL, max_sweeps: int = 50):
    """Coordinate descent over (Lx, Ly) for potentials without x <-> y symmetry.

    Alternates 1D searches until neither length moves by more than ``tol``.
    Returns ``(Lx_hat, Ly_hat, E)``.
    """
    bracket_y = bracket_x if bracket_y is None else bracket_y
    lx = 0.5 * sum(bracket_x)
    ly = 0.5 * sum(bracket_y)
    e = math.inf
    for _ in range(max_sweeps):
        new_lx, e = _minimize_length(
            lambda L: ground_energy(n_basis, (L, ly), potential_builder, state),
            n_basis, bracket_x, N_SCAN, tol)
        new_ly, e = _minimize_length(
            lambda L: ground_energy(n_basis, (new_lx, L), potential_builder, state),
            n_basis, bracket_y, N_SCAN, tol)
        moved = max(abs(new_lx - lx), abs(new_ly - ly))
        lx, ly = new_lx, new_ly
        if moved < tol:
            return lx, ly, e
    raise RSMError(f"N={n_basis}: coordinate descent did not settle in {max_sweeps} sweeps")


@dataclass(frozen=True, eq=False)
class LhatCurve:
    """Sampled optimal lengths and a monotone cubic interpolant through them."""

    n_values: np.ndarray
    l_hat: np.ndarray
    energies: np.ndarray
    _interp: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        n = np.asarray(self.n_values, dtype=float)
        l = np.asarray(self.l_hat, dtype=float)
        e = np.asarray(self.energies, dtype=float)
        if not (n.shape == l.shape == e.shape) or n.ndim != 1:
            raise ValueError("samples must be equal-length 1D sequences")
        if len(n) < 2:
            raise ValueError("need at least two samples to interpolate")
        if np.any(np.diff(n) <= 0):
            raise ValueError("sample N values must be strictly increasing")
        for name, arr in (("n_values", n), ("l_hat", l), ("energies", e)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "_interp", PchipInterpolator(n, l, extrapolate=True))

    def __call__(self, n_basis):
        out = self._interp(np.asarray(n_basis, dtype=float))
        return float(out) if out.ndim == 0 else out

    @property
    def samples(self) -> list:
        return [(int(n), float(l), float(e)) for n, l, e in zip(self.n_values, self.l_hat, self.energies)]

    def save(self, path) -> None:
        write_curve(self, path)

    @classmethod
    def load(cls, path) -> "LhatCurve":
        return read_curve(path)


def build_curve(n_values: Sequence[int], potential_builder: Callable,
                bracket: Sequence[float] = DEFAULT_BRACKET, state: int = 0) -> LhatCurve:
    """Optimize L at each N and interpolate. Needs >= 3 distinct N values."""
    ns = [int(n) for n in n_values]
    if len(set(ns)) != len(ns):
        raise ValueError(f"duplicate N values in {list(n_values)}")
    if len(ns) < 3:
        raise ValueError("need at least 3 distinct N values")
    rows = []
    for n in sorted(ns):
        try:
            l_hat, e = find_optimal_length(n, potential_builder, bracket, state)
        except RSMError as exc:
            if isinstance(exc, NoInteriorMinimumError):
                raise
            raise type(exc)(f"optimization failed at N={n}: {exc}") from exc
        rows.append((n, l_hat, e))
    n_arr, l_arr, e_arr = map(np.array, zip(*rows))
    return LhatCurve(n_arr, l_arr, e_arr)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def write_curve(curve: LhatCurve, path) -> None:
    """Text table with header ``N L_hat E0``, one sample per line."""
    with open(path, "w") as fh:
        fh.write("N L_hat E0\n")
        for n, l, e in curve.samples:
            fh.write(f"{n} {_fmt(l)} {_fmt(e)}\n")


def read_curve(path) -> LhatCurve:
    with open(path) as fh:
        header = fh.readline().split()
        if header != ["N", "L_hat", "E0"]:
            raise ValueError(f"{path}: expected header 'N L_hat E0', got {' '.join(header)!r}")
        rows = [line.split() for line in fh if line.strip()]
    try:
        n = [int(r[0]) for r in rows]
        l = [float(r[1]) for r in rows]
        e = [float(r[2]) for r in rows]
    except (IndexError, ValueError) as exc:
        raise ValueError(f"{path}: malformed curve row ({exc})") from None
    return LhatCurve(np.array(n), np.array(l), np.array(e))
