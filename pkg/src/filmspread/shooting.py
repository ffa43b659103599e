"""Contact-angle shooting for the similarity profiles.

The free parameter gamma (rescaled initial curvature) is tuned so the
profile reaches the working level z = delta with a prescribed slope:

* theta = 0: gamma0(delta), the boundary in gamma between level crossings
  and positive-minimum turns, located by bisection on the outcome kind
  (the slope functional is not defined past the turning point).
* theta in (0, 1): the smallest positive gamma whose slope at the level
  equals -theta * s0 * sqrt(1 - delta), where s0 is the contact slope of
  the explicit gamma = 0 parabola (sqrt(2) planar, 1 radial).
* theta = 1: gamma = 0 exactly, the explicit parabola.

Driving delta -> 0 along a geometric schedule and extrapolating yields the
zero-contact-angle solution (unique interface profile with slope -> 0) and
the finite-angle family; the rate of gamma(delta) -> gamma_theta is not
known a priori, so the exponent is fitted and reported as a diagnostic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, SolverError
from .params import Rheology, gamma_to_kappa
from .profile import (
    Geometry,
    OutcomeKind,
    ShotOutcome,
    contact_slope_scale,
    expand_zero_angle,
    explicit_interface,
    integrate_to_event,
)

__all__ = [
    "AnalyticBounds",
    "DeltaLevelSolve",
    "ShootingResult",
    "PhysicalProfile",
    "analytic_bounds",
    "default_delta_schedule",
    "solve_delta_level",
    "continue_to_zero_delta",
    "to_physical",
]


@dataclass(frozen=True)
class AnalyticBounds:
    """Closed-form gamma/interface bounds for the planar problem.

    no_interface_threshold: no true interface exists for gamma above
        {(1+a)/(2(3+a))}^((1+a)/2) (1+a)(2+a).
    G: every level solve satisfies 0 < gamma0(delta) < G with
        G = 2^((1+a)/2) (1+a)(2+a).
    B(gamma) bounds the interface position from above.
    """

    a: float
    no_interface_threshold: float
    G: float

    def B(self, gamma: float) -> float:
        if not (gamma > 0.0):
            raise DomainError(f"B(gamma) requires gamma > 0, got {gamma!r}")
        return ((1.0 + self.a) * (2.0 + self.a) / gamma) ** (1.0 / (1.0 + self.a))


def analytic_bounds(r: Rheology) -> AnalyticBounds:
    a = r.a
    if not (a > 0.0):
        raise DomainError(f"bounds require a > 0, got {a!r}")
    thr = ((1 + a) / (2 * (3 + a))) ** ((1 + a) / 2) * (1 + a) * (2 + a)
    big_g = 2 ** ((1 + a) / 2) * (1 + a) * (2 + a)
    return AnalyticBounds(a=a, no_interface_threshold=thr, G=big_g)


@dataclass
class DeltaLevelSolve:
    """Converged gamma at one working level z = delta."""

    delta: float
    gamma: float
    y: float
    slope: float
    bracket: tuple[float, float]
    iterations: int


@dataclass
class ShootingResult:
    """delta -> 0 continuation record for one contact-angle target."""

    geometry: Geometry
    theta: float
    gamma_theta: float
    y_theta: float
    slope: float
    kappa: float
    levels: list[DeltaLevelSolve]
    extrapolation_error_estimate: float
    fitted_q: float
    slope_target: float


def default_delta_schedule(n: int = 17) -> list[float]:
    """Geometric refinement 10^(-2 - j/2), j = 0..n-1 (stays above 1e-12)."""
    return [10.0 ** (-2.0 - 0.5 * j) for j in range(n)]


def _shoot(geom, gamma, r, delta, tol) -> ShotOutcome:
    return integrate_to_event(geom, gamma, r, delta=delta, tol=tol)


def _find_turn_bracket(geom, r, delta, tol, hi0: float) -> tuple[float, float]:
    """Grow hi until the outcome is a positive-minimum turn."""
    bounds = analytic_bounds(r)
    lo, hi = 0.0, hi0
    while True:
        out = _shoot(geom, hi, r, delta, tol)
        if out.kind is OutcomeKind.MINIMUM_TURN:
            return lo, hi
        if out.kind is not OutcomeKind.INTERFACE_HIT:
            raise SolverError(
                f"unexpected outcome {out.kind} while bracketing at gamma = {hi}",
                diagnostics={"gamma": hi, "delta": delta, "outcome": out.kind.value})
        lo = hi
        hi *= 1.5
        if hi > 2.0 * bounds.G:
            raise SolverError(
                f"no turning outcome found for gamma up to {hi} (G = {bounds.G})",
                diagnostics={"delta": delta, "hi": hi})


def solve_delta_level(
    geom: Geometry,
    r: Rheology,
    delta: float,
    theta: float,
    tol: float = 1e-10,
    bracket: Optional[tuple[float, float]] = None,
) -> DeltaLevelSolve:
    """Locate the level-delta shooting parameter for one contact-angle target.

    For theta = 0 the returned gamma is the supremum of hit-side gammas
    (outcome-kind bisection); the reported y and slope are evaluated on the
    hit side of the final bracket, so slope <= 0 always.  For theta in
    (0, 1) the smallest positive root of the slope mismatch is returned,
    found by an ascending bracket scan followed by bisection.
    """
    if not (1e-12 <= delta <= 0.5):
        raise DomainError(f"delta must lie in [1e-12, 0.5], got {delta!r}")
    if not (0.0 <= theta <= 1.0):
        raise DomainError(f"theta must lie in [0, 1], got {theta!r}")

    s0 = contact_slope_scale(geom)
    if theta == 1.0:
        # gamma(delta, 1) = 0 by definition: the explicit parabola
        y = explicit_interface(geom) * math.sqrt(1.0 - delta)
        return DeltaLevelSolve(delta=delta, gamma=0.0, y=y,
                               slope=-s0 * math.sqrt(1.0 - delta),
                               bracket=(0.0, 0.0), iterations=0)

    if theta == 0.0:
        if bracket is not None:
            lo, hi = bracket
            if (_shoot(geom, lo, r, delta, tol).kind is not OutcomeKind.INTERFACE_HIT
                    or _shoot(geom, hi, r, delta, tol).kind is not OutcomeKind.MINIMUM_TURN):
                bracket = None
        if bracket is None:
            lo, hi = _find_turn_bracket(geom, r, delta, tol, hi0=1.0)
        else:
            lo, hi = bracket
        iterations = 0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            out = _shoot(geom, mid, r, delta, tol)
            if out.kind is OutcomeKind.INTERFACE_HIT:
                lo = mid
            elif out.kind is OutcomeKind.MINIMUM_TURN:
                hi = mid
            else:
                raise SolverError(
                    f"unexpected outcome {out.kind} during bisection",
                    diagnostics={"gamma": mid, "delta": delta})
            iterations += 1
            if iterations > 200:
                break
        out = _shoot(geom, lo, r, delta, tol)
        return DeltaLevelSolve(delta=delta, gamma=lo, y=out.y, slope=out.slope,
                               bracket=(lo, hi), iterations=iterations)

    # finite-angle target: smallest positive root of the slope mismatch
    target = -theta * s0 * math.sqrt(1.0 - delta)

    def mismatch(g: float) -> tuple[float, Optional[ShotOutcome]]:
        if g == 0.0:
            return -s0 * math.sqrt(1.0 - delta) - target, None
        out = _shoot(geom, g, r, delta, tol)
        if out.kind is OutcomeKind.INTERFACE_HIT:
            return out.slope - target, out
        if out.kind is OutcomeKind.MINIMUM_TURN:
            return -target, out  # past gamma0: slope target unreachable, positive side
        raise SolverError(f"unexpected outcome {out.kind} at gamma = {g}",
                          diagnostics={"gamma": g, "delta": delta})

    iterations = 0
    if bracket is not None:
        lo, hi = bracket
        if not (mismatch(lo)[0] < 0.0 <= mismatch(hi)[0]):
            bracket = None
        iterations += 2
    if bracket is None:
        step = analytic_bounds(r).G / 64.0
        lo, dlo = 0.0, mismatch(0.0)[0]
        hi = None
        for k in range(1, 65):
            gk = step * k
            dk, _ = mismatch(gk)
            iterations += 1
            if dlo < 0.0 <= dk:
                hi = gk
                break
            lo, dlo = gk, dk
        if hi is None:
            raise SolverError(
                f"no sign change of the slope mismatch in (0, G): theta = {theta} "
                f"may be unreachable at this level",
                diagnostics={"delta": delta, "theta": theta, "scanned_to": lo})
    else:
        lo, hi = bracket

    best: Optional[ShotOutcome] = None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        d, out = mismatch(mid)
        if d < 0.0:
            lo = mid
            best = out
        else:
            hi = mid
        iterations += 1
        if iterations > 300:
            break
    if best is None:
        _, best = mismatch(lo)
    if best is None or best.kind is not OutcomeKind.INTERFACE_HIT:
        raise SolverError("finite-angle bisection did not end on the hit side",
                          diagnostics={"delta": delta, "theta": theta, "gamma": lo})
    return DeltaLevelSolve(delta=delta, gamma=lo, y=best.y, slope=best.slope,
                           bracket=(lo, hi), iterations=iterations)


def _aitken(seq: Sequence[float]) -> list[float]:
    out = []
    for i in range(len(seq) - 2):
        d2 = (seq[i + 2] - seq[i + 1]) - (seq[i + 1] - seq[i])
        if d2 != 0.0:
            out.append(seq[i + 2] - (seq[i + 2] - seq[i + 1]) ** 2 / d2)
        else:
            out.append(seq[i + 2])
    return out


def continue_to_zero_delta(
    geom: Geometry,
    r: Rheology,
    theta: float,
    schedule: Optional[Sequence[float]] = None,
    tol: float = 1e-10,
) -> ShootingResult:
    """Run the delta-level solves along a decreasing schedule and extrapolate.

    Each level warm-starts the next bracket (gamma(delta) shrinks with the
    level).  gamma and y are extrapolated to delta = 0 by Aitken acceleration
    of the level sequence; the error estimate is the distance between the two
    deepest extrapolants, and the fitted decay exponent q of
    gamma(delta) - gamma_theta ~ delta^q is reported as a diagnostic.

    For a = 1/lambda >= 1, gamma0(delta) -> 0 (no interface solutions); the
    sequence decays too slowly to vanish at floating-point-reachable levels,
    which the error estimate makes visible.
    """
    if schedule is None:
        schedule = default_delta_schedule()
    schedule = [float(d) for d in schedule]
    if any(not (1e-12 <= d <= 0.5) for d in schedule):
        raise DomainError("schedule levels must lie in [1e-12, 0.5]")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise DomainError("schedule must be strictly decreasing")

    s0 = contact_slope_scale(geom)
    if theta == 1.0:
        levels = [solve_delta_level(geom, r, d, 1.0, tol) for d in schedule]
        y = explicit_interface(geom)
        return ShootingResult(geometry=geom, theta=1.0, gamma_theta=0.0, y_theta=y,
                              slope=-s0, kappa=math.inf, levels=levels,
                              extrapolation_error_estimate=0.0, fitted_q=math.nan,
                              slope_target=-s0)

    levels: list[DeltaLevelSolve] = []
    bracket = None
    for d in schedule:
        lv = solve_delta_level(geom, r, d, theta, tol, bracket=bracket)
        levels.append(lv)
        # next level's root can only sit below this one
        width = max(10 * tol, 0.2 * lv.gamma)
        bracket = (max(0.0, lv.gamma - width), lv.gamma * (1.0 + 1e-9) + 10 * tol)

    gs = [lv.gamma for lv in levels]
    ys = [lv.y for lv in levels]
    diffs = np.diff(gs)
    if len(gs) >= 5 and np.any(diffs[-4:] > 0):
        # gamma(delta) must keep shrinking toward the limit
        raise ConvergenceError("gamma(delta) level sequence is not decreasing",
                               diagnostics={"levels": levels})

    ag = _aitken(gs)
    ay = _aitken(ys)
    if len(ag) >= 2:
        gamma_theta = ag[-1]
        err = abs(ag[-1] - ag[-2])
    elif ag:
        gamma_theta = ag[-1]
        err = abs(gs[-1] - gs[-2])
    else:
        gamma_theta = gs[-1]
        err = abs(gs[-1] - gs[-2]) if len(gs) > 1 else math.inf
    y_theta = ay[-1] if ay else ys[-1]

    # decay-exponent diagnostic from the last difference ratio
    fitted_q = math.nan
    if len(gs) >= 3 and diffs[-1] != 0 and diffs[-2] != 0:
        ratio = diffs[-1] / diffs[-2]
        rho = schedule[-1] / schedule[-2]
        if ratio > 0 and 0 < rho < 1:
            fitted_q = math.log(ratio) / math.log(rho)

    if theta > 0.0:
        slopes = [lv.slope for lv in levels]
        aslope = _aitken(slopes)
        slope = aslope[-1] if aslope else slopes[-1]
    else:
        # grazing levels: slope residuals are bisection noise around 0
        slope = levels[-1].slope

    kappa = gamma_to_kappa(gamma_theta, r) if gamma_theta > 0 else math.inf
    return ShootingResult(geometry=geom, theta=theta, gamma_theta=gamma_theta,
                          y_theta=y_theta, slope=slope, kappa=kappa, levels=levels,
                          extrapolation_error_estimate=err, fitted_q=fitted_q,
                          slope_target=-theta * s0)


@dataclass
class PhysicalProfile:
    """Similarity profile mapped back to the physical variables.

    The spreading solution is u = A t^(-beta) U(x / t^beta) in the plane and
    u = A t^(-2 beta) U(r / t^beta) with radial symmetry; eta_f is the
    interface position in the similarity coordinate eta.
    """

    geometry: Geometry
    theta: float
    kappa: float
    eta_f: float
    beta: float
    height_exponent: float
    amp: float
    mass: float                     # mass of the shape U itself (no amplitude)
    eta: np.ndarray
    U: np.ndarray
    _interp: Optional[Callable] = None

    @property
    def physical_mass(self) -> float:
        """Conserved mass of u = A t^-he U(./t^beta): the amplitude times ∫U."""
        return self.amp * self.mass

    def __call__(self, eta):
        eta = np.abs(np.asarray(eta, dtype=float))
        if self._interp is None:
            u = np.interp(eta, self.eta, self.U, right=0.0)
        else:
            u = np.where(eta < self.eta_f, self._interp(eta), 0.0)
        return np.maximum(u, 0.0)


def to_physical(result: ShootingResult, r: Rheology,
                geom: Optional[Geometry] = None,
                n_samples: int = 2001) -> PhysicalProfile:
    """Convert a converged shooting result into the physical similarity frame.

    Undoes the kappa rescaling x = eta sqrt(kappa), evaluates the mass by
    quadrature of the traced profile, and attaches the geometry's time
    exponents.  theta = 1 has gamma = 0, where kappa is a free parameter
    (the rescaling degenerates); the explicit parabola with kappa = 1 is
    returned in that case.  `geom`, when given, must match the result's own
    geometry (it exists for call-site clarity only).
    """
    if geom is not None and geom is not result.geometry:
        raise DomainError(f"geometry {geom} does not match the result's "
                          f"{result.geometry}")
    geom = result.geometry
    beta = r.beta_planar if geom is Geometry.PLANAR else r.beta_radial
    h_exp = beta if geom is Geometry.PLANAR else 2.0 * beta

    if result.theta == 1.0 or result.gamma_theta == 0.0:
        eta_f = explicit_interface(geom)
        eta = np.linspace(0.0, eta_f, n_samples)
        if geom is Geometry.PLANAR:
            u = 1.0 - eta ** 2 / 2.0
            mass = 4.0 * math.sqrt(2.0) / 3.0
        else:
            u = 1.0 - eta ** 2 / 4.0
            mass = 2.0 * math.pi
        return PhysicalProfile(geometry=geom, theta=result.theta, kappa=1.0,
                               eta_f=eta_f, beta=beta, height_exponent=h_exp,
                               amp=r.amp_A, mass=mass, eta=eta, U=np.maximum(u, 0.0))

    if not math.isfinite(result.gamma_theta) or result.gamma_theta < 0.0:
        raise SolverError("shooting result did not converge to a usable gamma",
                          diagnostics={"gamma_theta": result.gamma_theta})

    g = result.gamma_theta
    kappa = gamma_to_kappa(g, r)
    out = integrate_to_event(geom, g, r, delta=1e-9, tol=1e-10, keep_trace=True)
    if out.kind is OutcomeKind.INTERFACE_HIT:
        x_end, z_end = out.y, out.state.z
    elif out.kind is OutcomeKind.MINIMUM_TURN:
        # extrapolated gamma grazed just above the boundary; the minimum is tiny
        x_end, z_end = out.x_min, out.z_min
    else:
        raise SolverError(f"profile integration ended in {out.kind}",
                          diagnostics={"gamma": g})

    core = out.trace.integral("1" if geom is Geometry.PLANAR else "x")
    # interface tail beyond the traced end, from the local behavior
    s_end = max(result.y_theta - x_end, 0.0)
    if result.theta == 0.0 and 0 < r.a < 1:
        exp_tail = expand_zero_angle(result.y_theta, g, r)
        tail = exp_tail.coefficient * s_end ** (exp_tail.exponent + 1) / (exp_tail.exponent + 1)
    else:
        tail = 0.5 * z_end * s_end
    if geom is Geometry.RADIAL:
        tail *= x_end
    integral = core + tail

    if geom is Geometry.PLANAR:
        mass = 2.0 * integral / math.sqrt(kappa)
    else:
        mass = 2.0 * math.pi * integral / kappa

    eta_f = result.y_theta / math.sqrt(kappa)
    eta = np.linspace(0.0, eta_f, n_samples)
    xq = np.minimum(eta * math.sqrt(kappa), x_end)
    u = np.maximum(out.trace.eval_z(xq), 0.0)
    u[eta >= eta_f] = 0.0
    trace = out.trace

    def interp(q):
        return np.maximum(trace.eval_z(np.minimum(q * math.sqrt(kappa), x_end)), 0.0)

    return PhysicalProfile(geometry=geom, theta=result.theta, kappa=kappa,
                           eta_f=eta_f, beta=beta, height_exponent=h_exp,
                           amp=r.amp_A, mass=mass, eta=eta, U=u, _interp=interp)
