"""Separable polynomial potentials and their sine-basis matrix elements.

A dimensionless potential is stored as a sum of products

    f(x, y) = sum_t  c_t * p_t(x - Lx/2) * q_t(y - Ly/2)

where ``p_t`` and ``q_t`` are polynomials given by ascending coefficient
tuples in the *centred* coordinate. The box runs over [0, Lx] x [0, Ly], so
centring each factor is what moves a potential defined around the origin
into the box.

Matrix elements in the normalised sine basis phi_m(x) = sqrt(2/L) sin(m pi x/L)
are closed-form for monomials up to degree 4 and use Gauss-Legendre
quadrature otherwise.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from numbers import Real
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import legendre
from numpy.polynomial import polynomial as P

from .errors import InvalidPotentialError

MAX_ANALYTIC_DEGREE = 4

Poly = tuple  # ascending coefficients


def _as_poly(coeffs) -> Poly:
    c = [float(v) for v in np.atleast_1d(np.asarray(coeffs, dtype=float))]
    if not all(math.isfinite(v) for v in c):
        raise InvalidPotentialError(f"non-finite polynomial coefficient in {coeffs!r}")
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return tuple(c) if c else (0.0,)


def monomial(k: int) -> Poly:
    """Coefficient tuple of u**k."""
    if k < 0:
        raise ValueError("monomial degree must be non-negative")
    return (0.0,) * k + (1.0,)


@dataclass(frozen=True)
class Term:
    coeff: float
    poly_x: Poly
    poly_y: Poly

    def __post_init__(self):
        if not math.isfinite(self.coeff):
            raise InvalidPotentialError(f"non-finite term coefficient {self.coeff!r}")
        object.__setattr__(self, "coeff", float(self.coeff))
        object.__setattr__(self, "poly_x", _as_poly(self.poly_x))
        object.__setattr__(self, "poly_y", _as_poly(self.poly_y))

    def swapped(self) -> "Term":
        return Term(self.coeff, self.poly_y, self.poly_x)


@dataclass(frozen=True)
class SeparablePotential:
    """Dimensionless potential on the box [0, length_x] x [0, length_y]."""

    terms: tuple
    length_x: float
    length_y: float
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        if not (self.length_x > 0 and self.length_y > 0):
            raise ValueError(f"box lengths must be positive, got {self.length_x}, {self.length_y}")
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "length_x", float(self.length_x))
        object.__setattr__(self, "length_y", float(self.length_y))

    def at(self, length_x: float, length_y: float | None = None) -> "SeparablePotential":
        """Same potential on a box of different size (the centring follows the box)."""
        if length_y is None:
            length_y = length_x
        return SeparablePotential(self.terms, length_x, length_y, self.name)

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        u = x - self.length_x / 2
        v = y - self.length_y / 2
        out = np.zeros(np.broadcast(u, v).shape)
        for t in self.terms:
            out = out + t.coeff * P.polyval(u, t.poly_x) * P.polyval(v, t.poly_y)
        return out

    @property
    def is_zero(self) -> bool:
        return all(t.coeff == 0.0 or t.poly_x == (0.0,) or t.poly_y == (0.0,) for t in self.terms)

    @property
    def is_symmetric(self) -> bool:
        """True when f(x, y) == f(y, x) term by term (after merging duplicates)."""
        return _merged(self.terms) == _merged(t.swapped() for t in self.terms)


def _merged(terms) -> dict:
    out: dict = {}
    for t in terms:
        key = (t.poly_x, t.poly_y)
        out[key] = out.get(key, 0.0) + t.coeff
    return {k: v for k, v in out.items() if v != 0.0}


PotentialBuilder = Callable[..., SeparablePotential]


def from_monomials(terms: Sequence, length_x: float, length_y: float | None = None,
                   name: str = "custom") -> SeparablePotential:
    """Build from ``(coeff, i, j)`` triples meaning ``coeff * u**i * v**j``."""
    out = []
    for term in terms:
        try:
            coeff, i, j = term
        except (TypeError, ValueError):
            raise InvalidPotentialError(f"expected (coeff, i, j) triple, got {term!r}") from None
        if not isinstance(coeff, Real):
            raise InvalidPotentialError(f"coefficient must be real, got {coeff!r}")
        for power in (i, j):
            if isinstance(power, bool) or not isinstance(power, (int, np.integer)) or power < 0:
                raise InvalidPotentialError(f"powers must be non-negative integers, got {term!r}")
        out.append(Term(float(coeff), monomial(int(i)), monomial(int(j))))
    return SeparablePotential(tuple(out), length_x, length_x if length_y is None else length_y, name)


def free(length_x: float, length_y: float | None = None) -> SeparablePotential:
    """Particle in a box: f == 0."""
    return from_monomials([], length_x, length_y, name="none")


def sho(length_x: float, length_y: float | None = None) -> SeparablePotential:
    """Isotropic oscillator in units of hbar*omega/2: (x-Lx/2)^2 + (y-Ly/2)^2."""
    return from_monomials([(1.0, 2, 0), (1.0, 0, 2)], length_x, length_y, name="sho")


def qcd(length_x: float, length_y: float | None = None, alpha: float = 1.0) -> SeparablePotential:
    """The x^2 y^2 potential, alpha * (x-Lx/2)^2 (y-Ly/2)^2."""
    if not alpha > 0:
        raise InvalidPotentialError("alpha must be positive")
    return from_monomials([(alpha, 2, 2)], length_x, length_y, name="qcd")


BUILTIN = {"sho": sho, "qcd": qcd, "none": free, "free": free}


_FACTOR_RE = re.compile(r"^\(?\s*([xy])\s*\)?\s*(?:\^\s*(\d+))?$")


def _split_terms(text: str) -> list:
    parts = []
    for chunk in re.split(r"[;\n]", text):
        buf = ""
        for ch in chunk:
            prev = buf.rstrip()[-1:]
            # a sign starts a new term unless it belongs to an exponent or operator
            if ch in "+-" and prev and prev not in "eE*^(":
                parts.append(buf.strip())
                buf = ""
            buf += ch
        if buf.strip():
            parts.append(buf.strip())
    return [p for p in parts if p not in ("", "+", "-")] if parts else []


def parse_terms(text: str) -> list:
    """Parse ``coeff * (x)^i * (y)^j`` terms into ``(coeff, i, j)`` triples.

    Terms are separated by ``;``, newlines, or top-level ``+``/``-``. ``x`` and
    ``y`` are the already-centred coordinates. ``^`` and ``**`` both mean power.

    >>> parse_terms("x^2 + y^2")
    [(1.0, 2, 0), (1.0, 0, 2)]
    >>> parse_terms("2.5*(x)^2*(y)^2; -1")
    [(2.5, 2, 2), (-1.0, 0, 0)]
    """
    out = []
    for raw in _split_terms(text):
        sign = -1.0 if raw.startswith("-") else 1.0
        body = raw.lstrip("+-").strip().replace("**", "^")
        coeff, powers, seen = sign, {"x": 0, "y": 0}, False
        for piece in (s.strip() for s in body.split("*")):
            m = _FACTOR_RE.match(piece)
            if m:
                powers[m.group(1)] += int(m.group(2)) if m.group(2) else 1
            else:
                try:
                    value = float(piece)
                except ValueError:
                    raise InvalidPotentialError(f"cannot parse potential term {raw!r}") from None
                if seen:
                    raise InvalidPotentialError(f"more than one number in term {raw!r}")
                coeff *= value
                seen = True
        out.append((coeff, powers["x"], powers["y"]))
    if not out:
        raise InvalidPotentialError("empty potential definition")
    return out


def builder_for(spec: str, alpha: float = 1.0) -> PotentialBuilder:
    """Resolve a built-in name or a term list into a ``builder(Lx, Ly=None)``."""
    key = spec.strip().lower()
    if key == "qcd":
        def build(length_x, length_y=None):
            return qcd(length_x, length_y, alpha=alpha)
        return build
    if key in BUILTIN:
        return BUILTIN[key]
    terms = parse_terms(spec)

    def build(length_x, length_y=None):
        return from_monomials(terms, length_x, length_y, name=spec)
    return build


# -- physical units ---------------------------------------------------------

@dataclass(frozen=True)
class PhysicalProblem:
    """A 2D Schrödinger problem in physical units.

    ``terms`` are ``(coeff, i, j)`` monomials of U in the physical, origin-
    centred coordinates (x', y'); coefficients carry energy / length**(i+j).
    When ``omega`` is set, lengths are measured in sqrt(hbar/(m omega)) and
    energies in hbar*omega/2, the usual oscillator convention.
    """

    mass: float
    hbar: float
    terms: tuple = ()
    omega: float | None = None

    def __post_init__(self):
        if not self.mass > 0 or not self.hbar > 0:
            raise ValueError("mass and hbar must be positive")
        if self.omega is not None and not self.omega > 0:
            raise ValueError("omega must be positive")
        if callable(self.terms):
            raise InvalidPotentialError(
                "only separable polynomial potentials are supported; pass (coeff, i, j) terms")
        object.__setattr__(self, "terms", tuple(tuple(t) for t in self.terms))

    @classmethod
    def harmonic(cls, mass: float, hbar: float, omega: float) -> "PhysicalProblem":
        k = 0.5 * mass * omega**2
        return cls(mass, hbar, ((k, 2, 0), (k, 0, 2)), omega)

    @property
    def length_unit(self) -> float:
        if self.omega is None:
            return 1.0
        return math.sqrt(self.hbar / (self.mass * self.omega))


def to_dimensionless(problem: PhysicalProblem, length_x: float = 1.0,
                     length_y: float | None = None):
    """Reduce to the form -lap psi + f psi = eps psi.

    Returns ``(potential, energy_scale)`` with physical energy
    ``E = energy_scale * eps``. The scale is hbar^2/(2 m l^2) for length unit l,
    i.e. hbar^2/2m without ``omega`` and hbar*omega/2 with it.
    """
    ell = problem.length_unit
    scale = problem.hbar**2 / (2.0 * problem.mass * ell**2)
    terms = []
    for term in problem.terms:
        try:
            coeff, i, j = term
        except ValueError:
            raise InvalidPotentialError(f"expected (coeff, i, j) triple, got {term!r}") from None
        if isinstance(i, (int, np.integer)) and isinstance(j, (int, np.integer)):
            coeff = coeff * ell ** (i + j) / scale
        terms.append((coeff, i, j))
    pot = from_monomials(terms, length_x, length_y)
    return pot, scale


# -- 1D matrix elements -----------------------------------------------------

@dataclass(frozen=True)
class OneDimCoupling:
    """(2/L) * integral_0^L sin(m pi x/L) p(x - L/2) sin(m' pi x/L) dx, m, m' = 1..N."""

    matrix: np.ndarray
    axis_length: float
    factor: Poly

    @property
    def n_basis(self) -> int:
        return self.matrix.shape[0]


def _cosine_moment(k: int, p: np.ndarray) -> np.ndarray:
    # integral_{-1/2}^{1/2} u^k cos(p pi (u + 1/2)) du for integer p >= 0.
    # Only p with the parity of k contributes; the sum is the exact
    # integration-by-parts expansion evaluated at u = +-1/2.
    out = np.zeros(p.shape)
    zero = p == 0
    if k % 2 == 0:
        out[zero] = 1.0 / (2**k * (k + 1))
    hit = ~zero & (p % 2 == k % 2)
    pp = math.pi * p[hit].astype(float)
    acc = np.zeros(pp.shape)
    for j in range(1, k + 1, 2):
        sign = -1.0 if (j // 2) % 2 else 1.0
        acc += sign * (math.factorial(k) // math.factorial(k - j)) / (2 ** (k - j) * pp ** (j + 1))
    out[hit] = (2.0 if k % 2 == 0 else -2.0) * acc
    return out


def monomial_coupling(k: int, n_basis: int, length: float) -> np.ndarray:
    """Closed-form N x N matrix of u**k, u = x - L/2, for 0 <= k <= 4."""
    if not 0 <= k <= MAX_ANALYTIC_DEGREE:
        raise ValueError(f"closed forms cover degrees 0..{MAX_ANALYTIC_DEGREE}, got {k}")
    m = np.arange(1, n_basis + 1)
    diff = np.abs(m[:, None] - m[None, :])
    total = m[:, None] + m[None, :]
    mat = length**k * (_cosine_moment(k, diff) - _cosine_moment(k, total))
    # exactly symmetric: diff and total are symmetric integer arrays
    return mat


def quadrature_coupling(poly: Sequence[float], n_basis: int, length: float,
                        tol: float = 1e-14, max_nodes: int = 1 << 15) -> np.ndarray:
    """Gauss-Legendre matrix of p(x - L/2), doubling nodes until two rounds agree."""
    poly = _as_poly(poly)
    m = np.arange(1, n_basis + 1)
    n = max(16, n_basis + len(poly))
    prev = None
    while n <= max_nodes:
        t, w = legendre.leggauss(n)
        x = 0.5 * length * (t + 1.0)
        wp = w * P.polyval(x - length / 2, poly)  # 0.5*L Jacobian cancels 1/L of 2/L
        s = np.sin(np.outer(m, x) * (math.pi / length))
        mat = (s * wp) @ s.T
        mat = np.triu(mat) + np.triu(mat, 1).T
        if not np.all(np.isfinite(mat)):
            raise InvalidPotentialError("non-finite matrix element")
        if prev is not None:
            scale = max(1.0, float(np.max(np.abs(mat))))
            if np.max(np.abs(mat - prev)) <= tol * scale:
                return mat
        prev = mat
        n *= 2
    raise InvalidPotentialError(f"quadrature did not settle below {tol} with {max_nodes} nodes")


def coupling_1d(poly: Sequence[float], n_basis: int, length: float) -> OneDimCoupling:
    """Sine-basis matrix of one polynomial factor along one axis."""
    if n_basis < 1:
        raise ValueError("n_basis must be >= 1")
    if not length > 0:
        raise ValueError("length must be positive")
    poly = _as_poly(poly)
    degree = len(poly) - 1
    if degree <= MAX_ANALYTIC_DEGREE:
        mat = np.zeros((n_basis, n_basis))
        for k, c in enumerate(poly):
            if c != 0.0:
                mat = mat + c * monomial_coupling(k, n_basis, length)
    else:
        mat = quadrature_coupling(poly, n_basis, length)
    if not np.all(np.isfinite(mat)):
        raise InvalidPotentialError("non-finite matrix element")
    mat.setflags(write=False)
    return OneDimCoupling(mat, float(length), poly)


def combine_2d(cx: OneDimCoupling, cy: OneDimCoupling, coeff: float = 1.0) -> np.ndarray:
    """Contribution coeff * cx[m, m'] * cy[n, n'] laid out on the row-major (m, n) index."""
    if cx.matrix.shape != cy.matrix.shape:
        raise ValueError(f"basis size mismatch: {cx.matrix.shape} vs {cy.matrix.shape}")
    return coeff * np.kron(cx.matrix, cy.matrix)
