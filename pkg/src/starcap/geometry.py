"""Radial conformal factors of rotationally symmetric coordinate charts.

A rotationally symmetric chart carries the metric g_ij(x) = psi(|x|)^2 d_ij,
so the whole geometry is encoded in one positive function psi on
[0, domain_radius).  Three closed-form kinds cover the constant-curvature
model geometries:

    euclidean(lam):   psi(t) = lam
    sphere(r):        psi(t) = 2 r^2 / (r^2 + t^2)   (stereographic chart)
    hyperbolic(r):    psi(t) = 2 r^2 / (r^2 - t^2)   (disk chart, t < r)

A fourth "custom" kind interpolates a sampled table with a C^1
monotonicity-preserving piecewise cubic (PCHIP), so the drift coefficient
psi'/psi stays continuous.

The module also provides the radial arc length Phi(r) = int_0^r psi and its
inverse r(t), which reparametrize radial curves by arc length, and a
concavity probe for alpha(t) = log r(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import DomainError, RootFindingError

__all__ = [
    "RadialConformalFactor",
    "GeodesicRadialProfile",
    "adaptive_simpson",
    "psi_eval",
    "psi_deriv",
    "log_psi_gradient",
    "arc_length",
    "radius_at_arc_length",
    "alpha_concavity_defect",
]


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-10,
                     max_depth: int = 48) -> float:
    """Integrate f on [a, b] by adaptive Simpson to absolute tolerance tol.

    The interval is split until the Richardson error estimate |S2 - S1|/15
    falls below the locally allotted tolerance.  Deterministic.
    """
    if b < a:
        raise ValueError("integration bounds must satisfy a <= b")
    if b == a:
        return 0.0

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, eps, depth):
        xm = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + xm)
        xr = 0.5 * (xm + x2)
        fl = f(xl)
        fr = f(xr)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        return (recurse(x0, xm, f0, fl, f1, left, 0.5 * eps, depth - 1)
                + recurse(xm, x2, f1, fr, f2, right, 0.5 * eps, depth - 1))

    mid = 0.5 * (a + b)
    fa, fm, fb = f(a), f(mid), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, max_depth)


class RadialConformalFactor:
    """The function psi defining the chart metric psi(|x|)^2 d_ij.

    Instances are immutable; evaluation accepts scalars or arrays and always
    enforces t < domain_radius.
    """

    def __init__(self, kind: str, psi, psi_prime, domain_radius: float,
                 param: float | None = None, table=None):
        self.kind = kind
        self.param = param
        self.domain_radius = float(domain_radius)
        self._psi = psi
        self._psi_prime = psi_prime
        self._table = table  # (t, values) for the custom kind, else None

    # -- constructors -----------------------------------------------------

    @classmethod
    def euclidean(cls, lam: float = 1.0) -> "RadialConformalFactor":
        lam = float(lam)
        if lam <= 0.0:
            raise ValueError("euclidean factor requires lambda > 0")
        return cls("euclidean",
                   lambda t: np.full_like(np.asarray(t, dtype=float), lam),
                   lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                   math.inf, param=lam)

    @classmethod
    def sphere(cls, radius: float) -> "RadialConformalFactor":
        r = float(radius)
        if r <= 0.0:
            raise ValueError("sphere factor requires radius > 0")
        r2 = r * r
        return cls("sphere",
                   lambda t: 2.0 * r2 / (r2 + np.square(np.asarray(t, dtype=float))),
                   lambda t: -4.0 * r2 * np.asarray(t, dtype=float)
                             / np.square(r2 + np.square(np.asarray(t, dtype=float))),
                   math.inf, param=r)

    @classmethod
    def hyperbolic(cls, radius: float) -> "RadialConformalFactor":
        r = float(radius)
        if r <= 0.0:
            raise ValueError("hyperbolic factor requires radius > 0")
        r2 = r * r
        return cls("hyperbolic",
                   lambda t: 2.0 * r2 / (r2 - np.square(np.asarray(t, dtype=float))),
                   lambda t: 4.0 * r2 * np.asarray(t, dtype=float)
                             / np.square(r2 - np.square(np.asarray(t, dtype=float))),
                   r, param=r)

    @classmethod
    def from_table(cls, t, values, zero_slope_tol: float = 1e-2) -> "RadialConformalFactor":
        """Build a custom factor from samples (t_i, psi(t_i)) with monotone t.

        The table must start at t = 0, stay positive, and its fitted
        derivative at 0 must vanish within ``zero_slope_tol`` relative to the
        table's mean slope scale (the chart metric is smooth at the origin
        only if psi'(0) = 0).
        """
        t = np.asarray(t, dtype=float)
        values = np.asarray(values, dtype=float)
        if t.ndim != 1 or t.shape != values.shape or t.size < 4:
            raise ValueError("table needs matching 1-d arrays with >= 4 rows")
        if t[0] != 0.0:
            raise ValueError("table must start at t = 0")
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("table abscissae must be strictly increasing")
        if np.any(values <= 0.0):
            raise ValueError("psi samples must be positive")
        interp = PchipInterpolator(t, values, extrapolate=False)
        deriv = interp.derivative()
        scale = float(np.max(values)) / float(t[-1] - t[0])
        if abs(float(deriv(0.0))) > zero_slope_tol * scale:
            raise ValueError("fitted psi'(0) does not vanish; the table is not "
                             "a valid radial conformal factor")
        return cls("custom",
                   lambda x: interp(np.asarray(x, dtype=float)),
                   lambda x: deriv(np.asarray(x, dtype=float)),
                   float(t[-1]), table=(t.copy(), values.copy()))

    # -- evaluation --------------------------------------------------------

    def _check_domain(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0.0):
            raise DomainError("psi is defined for t >= 0")
        if np.any(t >= self.domain_radius):
            raise DomainError(
                f"t = {float(np.max(t)):g} outside the chart "
                f"(domain radius {self.domain_radius:g})")
        return t

    def psi(self, t):
        """psi(t) for scalar or array t in [0, domain_radius)."""
        t = self._check_domain(t)
        out = self._psi(t)
        return float(out) if np.isscalar(t) or out.ndim == 0 else out

    def psi_prime(self, t):
        """The derivative psi'(t), from the closed form or the interpolant."""
        t = self._check_domain(t)
        out = self._psi_prime(t)
        return float(out) if np.isscalar(t) or out.ndim == 0 else out

    def describe(self) -> str:
        if self.kind == "euclidean":
            return f"euclidean lambda={self.param:g}"
        if self.kind in ("sphere", "hyperbolic"):
            return f"{self.kind} radius={self.param:g}"
        t, v = self._table
        return f"custom table n={t.size} tmax={t[-1]:g}"

    def __eq__(self, other) -> bool:
        if not isinstance(other, RadialConformalFactor):
            return NotImplemented
        if self.kind != other.kind:
            return False
        if self.kind == "custom":
            return (np.array_equal(self._table[0], other._table[0])
                    and np.array_equal(self._table[1], other._table[1]))
        return self.param == other.param

    def __repr__(self) -> str:
        return f"RadialConformalFactor({self.describe()})"


def psi_eval(factor: RadialConformalFactor, t):
    """Evaluate psi(t); raises DomainError for t outside [0, domain_radius)."""
    return factor.psi(t)


def psi_deriv(factor: RadialConformalFactor, t):
    """Evaluate psi'(t) from the factor's own derivative."""
    return factor.psi_prime(t)


def log_psi_gradient(factor: RadialConformalFactor, x) -> np.ndarray:
    """Gradient of log psi(|x|) at a point x in the plane.

    Equals (psi'(|x|)/psi(|x|)) x/|x|, which extends continuously by 0 at
    the origin because psi'(0) = 0.
    """
    x = np.asarray(x, dtype=float)
    r = float(np.hypot(x[0], x[1]))
    if r == 0.0:
        return np.zeros(2)
    coef = factor.psi_prime(r) / factor.psi(r)
    return coef * x / r


def arc_length(factor: RadialConformalFactor, r: float) -> float:
    """Radial arc length Phi(r) = int_0^r psi(s) ds by adaptive Simpson."""
    r = float(r)
    if r < 0.0:
        raise DomainError("arc length requires r >= 0")
    if r >= factor.domain_radius:
        raise DomainError(f"r = {r:g} outside the chart "
                          f"(domain radius {factor.domain_radius:g})")
    if r == 0.0:
        return 0.0
    return adaptive_simpson(lambda s: float(factor.psi(s)), 0.0, r, tol=1e-10)


def radius_at_arc_length(factor: RadialConformalFactor, t: float,
                         r_hi: float) -> float:
    """Invert Phi: the coordinate radius r with Phi(r) = t, for t in [0, Phi(r_hi)].

    Bracketed on [0, r_hi]; Phi is strictly increasing because psi > 0.
    """
    if t == 0.0:
        return 0.0
    lo, hi = 0.0, float(r_hi)
    g = lambda r: arc_length(factor, r) - t
    try:
        return brentq(g, lo, hi, xtol=1e-10, maxiter=200)
    except ValueError as exc:
        raise RootFindingError(
            f"no radius with Phi(r) = {t:g} bracketed in [{lo:g}, {hi:g}]",
            bracket=(lo, hi)) from exc


@dataclass(frozen=True)
class GeodesicRadialProfile:
    """Arc-length parametrization data for the radial curve ending at radius r_p.

    Along a radial curve parametrized by arc length, psi(r(t)) r'(t) = 1, so
    r(t) is the inverse of Phi.  ``alpha(t) = log r(t)`` is the quantity whose
    concavity matters for scaling comparisons along rays.
    """

    factor: RadialConformalFactor
    r_p: float
    arc_length_total: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.r_p < self.factor.domain_radius:
            raise ValueError("profile endpoint must satisfy 0 < r_p < domain radius")
        object.__setattr__(self, "arc_length_total",
                           arc_length(self.factor, self.r_p))

    def radius_at(self, t: float) -> float:
        """Coordinate radius r(t) with Phi(r(t)) = t, t in [0, arc_length_total]."""
        if not 0.0 <= t <= self.arc_length_total * (1.0 + 1e-12):
            raise DomainError("t outside [0, arc_length_total]")
        return radius_at_arc_length(self.factor, min(t, self.arc_length_total),
                                    self.r_p)


def alpha_concavity_defect(profile: GeodesicRadialProfile,
                           t_samples: int) -> float:
    """Max centered second difference of alpha(t) = log r(t) on a uniform t-grid.

    Samples t uniformly in (0, arc_length_total]; a result <= 0 certifies
    concavity of alpha at the sampling resolution, > 0 exhibits a convex spot.
    The second differences are scaled by 1/h^2 so the value estimates alpha''.
    """
    if t_samples < 3:
        raise ValueError("need t_samples >= 3")
    h = profile.arc_length_total / t_samples
    ts = h * np.arange(1, t_samples + 1)
    radii = np.empty(t_samples)
    lo = 0.0
    for idx, t in enumerate(ts):
        # r(t) is increasing, so the previous radius brackets from below
        g = lambda r: arc_length(profile.factor, r) - t
        try:
            radii[idx] = brentq(g, lo, profile.r_p, xtol=1e-10, maxiter=200)
        except ValueError as exc:
            raise RootFindingError(
                f"radius inversion failed at t = {t:g} in bracket "
                f"[{lo:g}, {profile.r_p:g}]", bracket=(lo, profile.r_p)) from exc
        lo = max(0.0, radii[idx] * (1.0 - 1e-9))
    alpha = np.log(radii)
    second = (alpha[2:] - 2.0 * alpha[1:-1] + alpha[:-2]) / (h * h)
    return float(np.max(second))
