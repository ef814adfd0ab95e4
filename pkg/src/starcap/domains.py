"""Starshaped rings in chart coordinates, as radial graphs about the origin.

Every region here is described by a positive 2*pi-periodic radius profile
rho(theta); the region {r < rho(theta)} is starshaped about the origin by
construction.  A ring is the set between an inner and an outer profile.
The module also provides the normal-vector starshapedness test
<nu(x), x - center> >= 0 and the ray-exit time of a point.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError
from .geometry import RadialConformalFactor

__all__ = [
    "RadialFunction",
    "StarshapedRing",
    "boundary_point",
    "outward_normal",
    "star_defect",
    "t_exit",
]

TWO_PI = 2.0 * np.pi


class RadialFunction:
    """A positive 2*pi-periodic radius profile sampled at m uniform angles.

    Values between the nodes theta_j = 2*pi*j/m come from a periodic cubic
    spline, so the profile is C^2 and reproduces the samples exactly.
    """

    def __init__(self, samples):
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 1 or samples.size < 4:
            raise ValueError("need a 1-d array of at least 4 samples")
        if not np.all(np.isfinite(samples)) or np.any(samples <= 0.0):
            raise ValueError("radius samples must be finite and positive")
        self._samples = samples.copy()
        self._samples.flags.writeable = False
        nodes = np.linspace(0.0, TWO_PI, samples.size + 1)
        closed = np.append(samples, samples[0])
        self._spline = CubicSpline(nodes, closed, bc_type="periodic")
        self._deriv = self._spline.derivative()

    @classmethod
    def constant(cls, value: float, m: int = 64) -> "RadialFunction":
        return cls(np.full(m, float(value)))

    @classmethod
    def from_fourier(cls, cos_coeffs, sin_coeffs=(), m: int = 256) -> "RadialFunction":
        """rho(theta) = sum_k cos_coeffs[k] cos(k theta) + sum_k sin_coeffs[k-1] sin(k theta)."""
        theta = TWO_PI * np.arange(m) / m
        rho = np.zeros(m)
        for k, a in enumerate(cos_coeffs):
            rho += a * np.cos(k * theta)
        for k, b in enumerate(sin_coeffs, start=1):
            rho += b * np.sin(k * theta)
        return cls(rho)

    @property
    def samples(self) -> np.ndarray:
        return self._samples

    @property
    def m(self) -> int:
        return self._samples.size

    def __call__(self, theta):
        return self._spline(np.mod(theta, TWO_PI))

    def derivative(self, theta):
        """d rho / d theta, from the spline."""
        return self._deriv(np.mod(theta, TWO_PI))

    def max(self) -> float:
        theta = TWO_PI * np.arange(8 * self.m) / (8 * self.m)
        return float(np.max(self(theta)))

    def canonical_hash(self) -> str:
        """Short hash of the sample vector, for self-describing reports."""
        return hashlib.sha256(self._samples.tobytes()).hexdigest()[:12]

    def __repr__(self) -> str:
        return f"RadialFunction(m={self.m}, hash={self.canonical_hash()})"


def boundary_point(rho: RadialFunction, theta):
    """The boundary point rho(theta) (cos theta, sin theta); vectorized in theta."""
    r = rho(theta)
    return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)


def outward_normal(rho: RadialFunction, theta):
    """Unit outward normal of the curve theta -> rho(theta)(cos, sin).

    Rotating the tangent by -90 degrees gives
    (rho cos + rho' sin, rho sin - rho' cos), whose radial component is
    rho^2 > 0, hence outward.  Vectorized in theta.
    """
    r = rho(theta)
    dr = rho.derivative(theta)
    c, s = np.cos(theta), np.sin(theta)
    n = np.stack([r * c + dr * s, r * s - dr * c], axis=-1)
    return n / np.linalg.norm(n, axis=-1, keepdims=True)


def star_defect(rho: RadialFunction, center, theta_samples: int) -> float:
    """Minimum of <nu(x), x - center> over theta_samples boundary angles.

    The region {r < rho(theta)} is starshaped about ``center`` iff the true
    minimum is >= 0; the sampled value approximates it.  The center must lie
    strictly inside the curve.
    """
    if theta_samples < 1:
        raise ValueError("need at least one sample")
    center = np.asarray(center, dtype=float)
    rc = float(np.hypot(center[0], center[1]))
    if rc > 0.0 and rc >= float(rho(np.arctan2(center[1], center[0]))):
        raise DomainError("center must lie strictly inside the curve")
    theta = TWO_PI * np.arange(theta_samples) / theta_samples
    x = boundary_point(rho, theta)
    nu = outward_normal(rho, theta)
    return float(np.min(np.sum(nu * (x - center), axis=-1)))


@dataclass(frozen=True)
class StarshapedRing:
    """The coordinate ring between two radial graphs, inside a chart.

    The inner boundary must stay strictly below the outer one, and the outer
    boundary must stay strictly inside the chart's domain radius.
    """

    outer: RadialFunction
    inner: RadialFunction
    factor: RadialConformalFactor

    def __post_init__(self):
        n = 8 * max(self.outer.m, self.inner.m)
        theta = TWO_PI * np.arange(n) / n
        gap = self.outer(theta) - self.inner(theta)
        if np.min(gap) <= 0.0:
            raise ValueError("inner radius must be strictly less than the outer "
                             "radius at every angle")
        if np.max(self.outer(theta)) >= self.factor.domain_radius:
            raise ValueError("ring must lie strictly inside the chart "
                             f"(domain radius {self.factor.domain_radius:g})")

    def describe(self) -> str:
        return (f"outer[m={self.outer.m},{self.outer.canonical_hash()}] "
                f"inner[m={self.inner.m},{self.inner.canonical_hash()}] "
                f"factor[{self.factor.describe()}]")

    def canonical_hash(self) -> str:
        h = hashlib.sha256()
        h.update(self.outer.samples.tobytes())
        h.update(self.inner.samples.tobytes())
        h.update(self.factor.describe().encode())
        return h.hexdigest()[:12]


def t_exit(ring: StarshapedRing, x) -> float:
    """Largest t >= 1 with t*x still in the closed outer region.

    For a radial graph this is rho_outer(theta_x)/|x|; boundary points get
    exactly 1.  Scaling law: t_exit(t*x) = t_exit(x)/t for t in (0, 1].
    """
    x = np.asarray(x, dtype=float)
    r = float(np.hypot(x[0], x[1]))
    if r == 0.0:
        raise DomainError("ray exit time is undefined at the origin")
    rho0 = float(ring.outer(np.arctan2(x[1], x[0])))
    if r > rho0 * (1.0 + 1e-9):
        raise DomainError(f"point at radius {r:g} lies outside the outer "
                          f"boundary ({rho0:g})")
    return max(rho0 / r, 1.0)
