"""Quadrature ground truth for round condensers in any dimension n >= 2.

For a purely radial profile U(r) on the annulus R1 < r < R0, the equation

    div(|U'|^(q-2) U' e_r) + (n-q) |U'|^(q-2) (psi'/psi) U' = 0

has the first integral psi(r)^(n-q) r^(n-1) |U'|^(q-2) U' = const: writing
the radial q-Laplacian as r^(1-n) (r^(n-1) |U'|^(q-2) U')' and multiplying
by psi^(n-q) r^(n-1) folds the drift into an exact derivative (integrating
factor psi^(n-q)).  Normalizing U(R1) = 1, U(R0) = 0 yields

    U(r) = int_r^R0 (psi(s)^(q-n) s^(1-n))^(1/(q-1)) ds
           / int_R1^R0 (same integrand) ds,

which this module evaluates by adaptive quadrature.  It is the reference
the two-dimensional solver is validated against, and the only place where
dimensions n >= 3 appear.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import RadialConformalFactor, adaptive_simpson
from .solver import ScalarField

__all__ = [
    "RadialPotential",
    "radial_potential",
    "radial_potential_profile",
    "compare_round",
]

# 12-point Gauss-Legendre rule on [-1, 1]; used for the vectorized
# cumulative evaluation over many radii at once.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


@dataclass(frozen=True)
class RadialPotential:
    """Round condenser R1 < r < R0 with exponent q and dimension n."""

    factor: RadialConformalFactor
    n: int
    q: float
    r_inner: float
    r_outer: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("dimension must satisfy n >= 2")
        if self.q < 2.0:
            raise ValueError("exponent must satisfy q >= 2")
        if not 0.0 < self.r_inner < self.r_outer:
            raise ValueError("radii must satisfy 0 < R1 < R0")
        if self.r_outer >= self.factor.domain_radius:
            raise ValueError("outer radius must lie inside the chart "
                             f"(domain radius {self.factor.domain_radius:g})")

    def integrand(self, s):
        s = np.asarray(s, dtype=float)
        psi = np.asarray(self.factor.psi(s), dtype=float)
        power = 1.0 / (self.q - 1.0)
        return (psi ** (self.q - self.n) * s ** (1.0 - self.n)) ** power


def _total_integral(pot: RadialPotential) -> float:
    f = lambda s: float(pot.integrand(s))
    return adaptive_simpson(f, pot.r_inner, pot.r_outer, tol=1e-13)


def radial_potential(pot: RadialPotential, r: float) -> float:
    """U(r) in [0, 1] for R1 <= r <= R0, by adaptive quadrature."""
    r = float(r)
    if not pot.r_inner <= r <= pot.r_outer:
        raise DomainError(f"radius {r:g} outside [{pot.r_inner:g}, "
                          f"{pot.r_outer:g}]")
    total = _total_integral(pot)
    f = lambda s: float(pot.integrand(s))
    upper = adaptive_simpson(f, r, pot.r_outer, tol=1e-13)
    return upper / total


def radial_potential_profile(pot: RadialPotential, radii) -> np.ndarray:
    """U at many radii at once via a cumulative composite Gauss rule.

    The integration grid is the union of the requested radii and a uniform
    64-cell subdivision of [R1, R0]; each cell gets a 12-point Gauss rule,
    so the result matches the adaptive scalar path to well below 1e-10 for
    smooth factors.
    """
    radii = np.asarray(radii, dtype=float)
    if np.any(radii < pot.r_inner - 1e-9) or np.any(radii > pot.r_outer + 1e-9):
        raise DomainError("radii outside the condenser")
    clipped = np.clip(radii, pot.r_inner, pot.r_outer)
    base = np.linspace(pot.r_inner, pot.r_outer, 65)
    points = np.union1d(np.unique(clipped), base)
    lo, hi = points[:-1], points[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    samples = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    cell = half * (pot.integrand(samples) @ _GL_WEIGHTS)
    # cumulative integral from R0 down to each grid point
    from_outer = np.concatenate([np.cumsum(cell[::-1])[::-1], [0.0]])
    total = from_outer[0]
    idx = np.searchsorted(points, clipped)
    return from_outer[idx] / total


def compare_round(field: ScalarField, pot: RadialPotential) -> float:
    """Max nodal deviation of a round-annulus solve from the radial oracle.

    The field's ring must be round with radii matching the oracle, carry the
    same conformal factor, and (when recorded) the same exponent; the oracle
    must be two-dimensional.
    """
    ring = field.grid.ring
    if pot.n != 2:
        raise ValueError("field comparisons require a two-dimensional oracle")
    outer, inner = ring.outer.samples, ring.inner.samples
    if np.ptp(outer) > 1e-12 or np.ptp(inner) > 1e-12:
        raise ValueError("field ring is not round")
    if (abs(float(outer[0]) - pot.r_outer) > 1e-12
            or abs(float(inner[0]) - pot.r_inner) > 1e-12):
        raise ValueError("ring radii do not match the oracle condenser")
    if ring.factor != pot.factor:
        raise ValueError("conformal factors differ between field and oracle")
    if field.q is not None and abs(field.q - pot.q) > 0.0:
        raise ValueError("field exponent does not match the oracle")
    reference = radial_potential_profile(pot, field.grid.R.ravel())
    return float(np.max(np.abs(field.values.ravel() - reference)))
