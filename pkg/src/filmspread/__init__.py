"""Self-similar spreading of power-law (Ostwald-de Waele) thin liquid films.

Source-type similarity profiles of the degenerate fourth-order film
equation in planar and radial symmetry, contact-angle shooting with
delta-level continuation, traveling-wave front classification, and a
desk-scale explicit PDE solver for cross-checking the similarity theory.
"""

__version__ = "0.1.0"

from .errors import (ClassificationError, ConvergenceError, DomainError,
                     NumericError, SingularityError, SolverError,
                     StabilityError, UnsupportedRegimeError)
from .params import Rheology, gamma_to_kappa, kappa_to_gamma, make_rheology
from .profile import (Geometry, OutcomeKind, ProfileState, ProfileTrace,
                      ShotOutcome, contact_slope_scale, expand_finite_angle,
                      expand_zero_angle, explicit_interface,
                      integrate_to_event, rhs, series_start)
from .shooting import (AnalyticBounds, DeltaLevelSolve, PhysicalProfile,
                       ShootingResult, analytic_bounds, continue_to_zero_delta,
                       default_delta_schedule, solve_delta_level, to_physical)
from .traveling import (Equilibrium, Family, FrontBehavior, FrontProfile,
                        SeparatrixBranch, TrajectoryClass, TrajectoryLabel,
                        TWState, TWTrajectory, classify_trajectory,
                        equilibrium_analysis, equilibrium_front,
                        front_coefficient, integrate_separatrix,
                        reconstruct_front, tw_rhs)
from .pde import (DropShape, Field1D, SimilarityReport, evolve, front_position,
                  init_drop, rescale_compare, step, suggest_dt, uniform_grid)

__all__ = [
    "__version__",
    "Rheology", "make_rheology", "gamma_to_kappa", "kappa_to_gamma",
    "Geometry", "ProfileState", "OutcomeKind", "ShotOutcome", "ProfileTrace",
    "series_start", "rhs", "integrate_to_event",
    "expand_finite_angle", "expand_zero_angle",
    "explicit_interface", "contact_slope_scale",
    "AnalyticBounds", "DeltaLevelSolve", "ShootingResult", "PhysicalProfile",
    "analytic_bounds", "default_delta_schedule", "solve_delta_level",
    "continue_to_zero_delta", "to_physical",
    "TWState", "Equilibrium", "SeparatrixBranch", "Family", "FrontBehavior",
    "TrajectoryLabel", "TrajectoryClass", "TWTrajectory", "FrontProfile",
    "tw_rhs", "equilibrium_analysis", "integrate_separatrix",
    "classify_trajectory", "reconstruct_front", "equilibrium_front",
    "front_coefficient",
    "DropShape", "Field1D", "SimilarityReport", "uniform_grid", "init_drop",
    "step", "suggest_dt", "evolve", "front_position", "rescale_compare",
    "DomainError", "SingularityError", "UnsupportedRegimeError",
    "StabilityError", "SolverError", "ConvergenceError",
    "ClassificationError", "NumericError",
]
