"""Starshapedness verification of computed potentials.

A field on a ray-aligned ring grid has all its superlevel sets starshaped
about the origin exactly when it is non-increasing outward along every ray.
Three defects quantify violations:

  * envelope defect: sup of U* - U, where U* is the outward suffix maximum
    along each ray (the smallest ray-monotone majorant of U);
  * monotonicity defect: largest positive outward increment along any ray;
  * normal defect: largest positive value of the normalized gradient test
    <grad U, x> / (|grad U| |x|), a secondary diagnostic valid where the
    gradient does not vanish.

The first two vanish together and are exact on the grid because angular
lines are rays.  The module also extracts superlevel boundaries and checks
the scaling inequality required of nonzero right-hand sides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import RadialFunction, StarshapedRing
from .errors import NoCrossingError
from .geometry import RadialConformalFactor
from .solver import RhsSpec, ScalarField, gradient

__all__ = [
    "StarshapeReport",
    "envelope",
    "starshape_report",
    "superlevel_boundary",
    "condition_margin",
]

DIVIDE_GUARD = 1e-12
GRADIENT_FLOOR = 1e-8


def envelope(field: ScalarField) -> ScalarField:
    """Smallest ray-monotone majorant: outward suffix maximum along each ray.

    Idempotent, pointwise >= the input, non-increasing in s on every
    angular line.
    """
    vals = field.values
    env = np.maximum.accumulate(vals[:, ::-1], axis=1)[:, ::-1]
    return ScalarField(field.grid, env, q=field.q)


@dataclass(frozen=True)
class StarshapeReport:
    """Defect sizes and the resulting verdict for one field."""

    envelope_defect: float
    monotonicity_defect: float
    normal_defect: float
    verdict: bool
    tol: float
    normal_tol: float


def starshape_report(field: ScalarField, tol: float,
                     normal_tol: float | None = None) -> StarshapeReport:
    """Measure the three starshapedness defects and compare against tol.

    The verdict is true iff every defect is within its tolerance; the
    normal-vector diagnostic gets its own tolerance (default: same as tol)
    and skips nodes where |grad U| < 1e-8.
    """
    if normal_tol is None:
        normal_tol = tol
    vals = field.values
    env = np.maximum.accumulate(vals[:, ::-1], axis=1)[:, ::-1]
    envelope_defect = float(np.max(env - vals))
    increments = vals[:, 1:] - vals[:, :-1]
    monotonicity_defect = float(max(0.0, np.max(increments)))

    grid = field.grid
    grad = gradient(field)
    gx, gy = grad[..., 0], grad[..., 1]
    gnorm = np.hypot(gx, gy)
    dot = gx * grid.x1 + gy * grid.x2
    ratio = np.maximum(dot, 0.0) / (gnorm * grid.R + DIVIDE_GUARD)
    select = np.zeros_like(ratio, dtype=bool)
    select[:, 1:-1] = gnorm[:, 1:-1] >= GRADIENT_FLOOR
    normal_defect = float(np.max(ratio[select])) if np.any(select) else 0.0

    verdict = (envelope_defect <= tol and monotonicity_defect <= tol
               and normal_defect <= normal_tol)
    return StarshapeReport(envelope_defect, monotonicity_defect, normal_defect,
                           verdict, tol, normal_tol)


def superlevel_boundary(field: ScalarField, level: float) -> RadialFunction:
    """Radius profile of the set {U > level}, one value per angular line.

    Takes the outermost crossing of the level on each ray and locates it by
    linear interpolation between the bracketing nodes.  Raises
    NoCrossingError when some ray never crosses the level (a sign the field
    did not converge or carries invalid boundary data).
    """
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    grid = field.grid
    vals = field.values
    above = vals[:, :-1] > level
    below = vals[:, 1:] <= level
    mask = above & below
    rev = mask[:, ::-1]
    has = rev.any(axis=1)
    if not np.all(has):
        j_bad = int(np.argmin(has))
        raise NoCrossingError(
            f"no crossing of level {level:g} on ray j={j_bad} "
            "(field not converged or invalid boundary data)")
    i_cross = (grid.k - 2) - np.argmax(rev, axis=1)
    j_all = np.arange(grid.m)
    v_in = vals[j_all, i_cross]
    v_out = vals[j_all, i_cross + 1]
    frac = (v_in - level) / (v_in - v_out)
    s_star = grid.s[i_cross] + grid.ds * frac
    radii = grid.rho1 + s_star * grid.width
    return RadialFunction(radii)


def condition_margin(rhs: RhsSpec, factor: RadialConformalFactor, q: float,
                     ring: StarshapedRing, samples=(8, 8, 5, 8),
                     return_argmin: bool = False):
    """Minimum of the scaling inequality margin for the right-hand side.

    Samples points x in the ring (``samples[0]`` angles times the same
    number of radial stations), scalings tau in [1, T_x], states s in
    [0, 1] and gradient arguments v (``samples[3]`` directions at magnitudes
    0.1, 1 and 10), and returns the minimum of

        tau^q Psi(tau x)^q F(tau x, s, v / tau) - Psi(x)^q F(x, s, v).

    A nonnegative minimum means the structural condition holds on the
    sample set.  With ``return_argmin`` the minimizing sample is also
    returned.
    """
    nx, ntau, ns, nv = samples
    if min(nx, ntau, ns, nv) < 2:
        raise ValueError("need at least 2 samples per axis")

    theta = 2.0 * np.pi * np.arange(nx) / nx
    fractions = (np.arange(nx) + 0.5) / nx
    th_grid, fr_grid = np.meshgrid(theta, fractions, indexing="ij")
    th_flat = th_grid.ravel()
    rho0 = np.asarray(ring.outer(th_flat), dtype=float)
    rho1 = np.asarray(ring.inner(th_flat), dtype=float)
    radius = rho1 + fr_grid.ravel() * (rho0 - rho1)
    x1 = radius * np.cos(th_flat)
    x2 = radius * np.sin(th_flat)
    t_exit_vals = rho0 / radius

    tau_frac = np.arange(ntau) / (ntau - 1)
    tau = 1.0 + tau_frac[np.newaxis, :] * (t_exit_vals - 1.0)[:, np.newaxis]

    s_vals = np.linspace(0.0, 1.0, ns)
    phi = 2.0 * np.pi * np.arange(nv) / nv
    mags = np.array([0.1, 1.0, 10.0])
    v1 = (mags[np.newaxis, :] * np.cos(phi)[:, np.newaxis]).ravel()
    v2 = (mags[np.newaxis, :] * np.sin(phi)[:, np.newaxis]).ravel()

    # Broadcast axes: [point, tau, s, v]
    P, NV = x1.size, v1.size
    x1b = x1[:, None, None, None]
    x2b = x2[:, None, None, None]
    rb = radius[:, None, None, None]
    taub = tau[:, :, None, None]
    sb = s_vals[None, None, :, None]
    v1b = v1[None, None, None, :]
    v2b = v2[None, None, None, :]

    psi_x = np.asarray(factor.psi(rb), dtype=float)
    psi_tx = np.asarray(factor.psi(taub * rb), dtype=float)
    shape = (P, ntau, ns, NV)
    lhs = (taub * psi_tx) ** q * np.broadcast_to(
        rhs.evaluate(taub * x1b, taub * x2b,
                     np.broadcast_to(sb, shape),
                     v1b / taub, v2b / taub), shape)
    rhs_side = psi_x ** q * np.broadcast_to(
        rhs.evaluate(np.broadcast_to(x1b, shape), np.broadcast_to(x2b, shape),
                     np.broadcast_to(sb, shape),
                     np.broadcast_to(v1b, shape), np.broadcast_to(v2b, shape)),
        shape)
    diff = lhs - rhs_side
    margin = float(np.min(diff))
    if not return_argmin:
        return margin
    p_i, t_i, s_i, v_i = np.unravel_index(int(np.argmin(diff)), shape)
    argmin = {
        "x1": float(x1[p_i]),
        "x2": float(x2[p_i]),
        "tau": float(tau[p_i, t_i]),
        "s": float(s_vals[s_i]),
        "v1": float(v1[v_i]),
        "v2": float(v2[v_i]),
    }
    return margin, argmin
