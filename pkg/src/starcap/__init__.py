"""Capacitary potentials of starshaped rings in rotationally symmetric
geometries, with numerical verification that their superlevel sets stay
starshaped."""

from .analysis import (StarshapeReport, condition_margin, envelope,
                       starshape_report, superlevel_boundary)
from .domains import (RadialFunction, StarshapedRing, boundary_point,
                      outward_normal, star_defect, t_exit)
from .errors import (ConfigError, ConvergenceError, DomainError,
                     NoCrossingError, RootFindingError, SolverNanError,
                     StarcapError)
from .geometry import (GeodesicRadialProfile, RadialConformalFactor,
                       alpha_concavity_defect, arc_length, log_psi_gradient,
                       psi_deriv, psi_eval, radius_at_arc_length)
from .oracle import (RadialPotential, compare_round, radial_potential,
                     radial_potential_profile)
from .solver import (RhsSpec, RingGrid, ScalarField, SolveResult,
                     SolverConfig, build_grid, dump_field, gradient,
                     manufactured_residual, solve_linear, solve_qlaplace)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConvergenceError", "DomainError", "GeodesicRadialProfile",
    "NoCrossingError", "RadialConformalFactor", "RadialFunction",
    "RadialPotential", "RhsSpec", "RingGrid", "RootFindingError",
    "ScalarField", "SolveResult", "SolverConfig", "SolverNanError",
    "StarcapError", "StarshapeReport", "StarshapedRing",
    "alpha_concavity_defect", "arc_length", "boundary_point", "compare_round",
    "condition_margin", "build_grid", "dump_field", "envelope", "gradient",
    "log_psi_gradient", "manufactured_residual", "outward_normal", "psi_deriv",
    "psi_eval", "radial_potential", "radial_potential_profile",
    "radius_at_arc_length", "solve_linear", "solve_qlaplace", "star_defect",
    "starshape_report", "superlevel_boundary", "t_exit",
]
