"""Integration of the rescaled similarity profile equations.

Planar:   z^(1+a) z''' = gamma x^a,          state (z, z', z'')
Radial:   z^(1+a) (z'' + z'/x)' = gamma x^a, state (z, z', v), v = z'' + z'/x

Both start from a regularized series at small x > 0 (the origin data
z(0)=1, z'(0)=0 and unit initial curvature are singular points of the
radial form) and run to the first terminal event: the working level
z = delta is crossed from above (an interface at that level), the slope
turns (positive minimum), the x cap is exceeded, or the step size
underflows near the z -> 0 singularity.

The stepper is an embedded Dormand-Prince 5(4) pair with PI step control;
events are located by secant/bisection polish on partial re-steps from the
last accepted node, so the reported crossing is a genuine solution point
rather than an interpolant value.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NumericError, SingularityError, UnsupportedRegimeError
from .params import Rheology

__all__ = [
    "Geometry",
    "ProfileState",
    "OutcomeKind",
    "ShotOutcome",
    "ProfileTrace",
    "series_start",
    "rhs",
    "integrate_to_event",
    "expand_finite_angle",
    "expand_zero_angle",
    "explicit_interface",
    "contact_slope_scale",
]

_EPS = float(np.finfo(float).eps)


class Geometry(enum.Enum):
    PLANAR = "planar"
    RADIAL = "radial"


def explicit_interface(geom: Geometry) -> float:
    """Interface position of the explicit gamma=0 parabola: sqrt(2) or 2."""
    return math.sqrt(2.0) if geom is Geometry.PLANAR else 2.0


def contact_slope_scale(geom: Geometry) -> float:
    """|z'| of the gamma=0 parabola at its interface (sqrt(2) planar, 1 radial).

    Contact-angle targets are expressed as a fraction theta of this scale.
    """
    return math.sqrt(2.0) if geom is Geometry.PLANAR else 1.0


@dataclass(frozen=True)
class ProfileState:
    """Integration state at one abscissa.

    curv is z'' in the planar geometry and v = z'' + z'/x in the radial one
    (the combination whose derivative the equation prescribes).
    """

    x: float
    z: float
    dz: float
    curv: float


class OutcomeKind(enum.Enum):
    INTERFACE_HIT = "interface_hit"
    MINIMUM_TURN = "minimum_turn"
    BOUND_EXCEEDED = "bound_exceeded"
    SINGULAR_STALL = "singular_stall"


class ProfileTrace:
    """Accepted-step samples with a cubic Hermite interpolant per component."""

    def __init__(self, x, z, dz, curv, dcurv):
        self.x = np.asarray(x)
        self.z = np.asarray(z)
        self.dz = np.asarray(dz)
        self.curv = np.asarray(curv)
        self._dcurv = np.asarray(dcurv)

    def __len__(self):
        return self.x.size

    def _hermite(self, q, f, df):
        x = self.x
        i = np.clip(np.searchsorted(x, q, side="right") - 1, 0, x.size - 2)
        h = x[i + 1] - x[i]
        t = (q - x[i]) / h
        h00 = (1 + 2 * t) * (1 - t) ** 2
        h10 = t * (1 - t) ** 2
        h01 = t * t * (3 - 2 * t)
        h11 = t * t * (t - 1)
        return h00 * f[i] + h10 * h * df[i] + h01 * f[i + 1] + h11 * h * df[i + 1]

    def eval_z(self, q):
        return self._hermite(np.asarray(q, dtype=float), self.z, self.dz)

    def eval_dz(self, q):
        # z'' is curv (planar) or curv - dz/x (radial); stored as the
        # derivative actually used during integration
        return self._hermite(np.asarray(q, dtype=float), self.dz, self._ddz())

    def eval_curv(self, q):
        return self._hermite(np.asarray(q, dtype=float), self.curv, self._dcurv)

    def _ddz(self):
        # derivative of dz at the nodes; cached lazily
        if not hasattr(self, "_ddz_cache"):
            self._ddz_cache = self.curv.copy()
        return self._ddz_cache

    def set_dz_derivative(self, ddz):
        self._ddz_cache = np.asarray(ddz)

    def integral(self, weight: str = "1") -> float:
        """Integral of z dx (weight "1") or x*z dx (weight "x") over the trace.

        Gauss-Legendre 5 per interval on the Hermite interpolant; exact for
        the interpolant, so the error is the interpolation error alone.
        """
        xs, ws = np.polynomial.legendre.leggauss(5)
        a, b = self.x[:-1], self.x[1:]
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        total = 0.0
        for xi, wi in zip(xs, ws):
            q = mid + half * xi
            f = self.eval_z(q)
            if weight == "x":
                f = f * q
            total += wi * float(np.sum(half * f))
        return total


@dataclass
class ShotOutcome:
    """Terminal event of one integration at fixed gamma."""

    kind: OutcomeKind
    y: Optional[float] = None          # interface-hit abscissa (z = delta)
    slope: Optional[float] = None      # z' at the hit
    x_min: Optional[float] = None      # turning-point abscissa
    z_min: Optional[float] = None      # positive minimum value
    x_stop: Optional[float] = None     # where a bound/stall terminated
    z_stop: Optional[float] = None
    state: Optional[ProfileState] = None  # full state at the event
    trace: Optional[ProfileTrace] = None
    n_steps: int = 0


def series_start(geom: Geometry, gamma: float, r: Rheology, x0: float = 1e-4) -> ProfileState:
    """Regularized start: truncated series solution at 0 < x0 << 1.

    Planar:  z = 1 - x^2/2 + gamma x^(3+a) / ((1+a)(2+a)(3+a))
    Radial:  z = 1 - x^2/4 + gamma x^(3+a) / ((1+a)(3+a)^2)

    The neglected terms are O(x0^(5+a)), so the state is accurate to well
    beyond O(x0^(4+a)) for the default x0 = 1e-4.
    """
    if not (x0 > 0.0) or not math.isfinite(x0):
        raise DomainError(f"series start requires x0 > 0, got {x0!r}")
    if not math.isfinite(gamma):
        raise DomainError(f"gamma must be finite, got {gamma!r}")
    a = r.a
    if geom is Geometry.PLANAR:
        c3 = gamma / ((1 + a) * (2 + a) * (3 + a))
        z = 1.0 - 0.5 * x0 * x0 + c3 * x0 ** (3 + a)
        dz = -x0 + gamma * x0 ** (2 + a) / ((1 + a) * (2 + a))
        curv = -1.0 + gamma * x0 ** (1 + a) / (1 + a)
    else:
        c3 = gamma / ((1 + a) * (3 + a) ** 2)
        z = 1.0 - 0.25 * x0 * x0 + c3 * x0 ** (3 + a)
        dz = -0.5 * x0 + gamma * x0 ** (2 + a) / ((1 + a) * (3 + a))
        curv = -1.0 + gamma * x0 ** (1 + a) / (1 + a)
    return ProfileState(x=x0, z=z, dz=dz, curv=curv)


def rhs(geom: Geometry, state: ProfileState, gamma: float, r: Rheology) -> tuple[float, float, float]:
    """Derivative of (z, z', curv) at the given state.

    Raises SingularityError for z <= 0: the equation degenerates at the
    interface and callers must not step past it.
    """
    if state.z <= 0.0:
        raise SingularityError(f"rhs evaluated at z = {state.z} <= 0 (x = {state.x})")
    if state.x <= 0.0:
        raise DomainError("rhs requires x > 0; use series_start at the origin")
    third = gamma * state.x ** r.a * state.z ** (-1.0 - r.a)
    if geom is Geometry.PLANAR:
        return (state.dz, state.curv, third)
    return (state.dz, state.curv - state.dz / state.x, third)


# Dormand-Prince 5(4) tableau (scalar form; FSAL)
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40


class _Stepper:
    """Scalar DP5(4) integrator for one (geometry, gamma, rheology) triple."""

    def __init__(self, geom, gamma, r):
        self.planar = geom is Geometry.PLANAR
        self.g = float(gamma)
        self.a = r.a

    def f(self, x, z, dz, cv):
        # returns None when a stage leaves the admissible region z > 0
        if z <= 0.0:
            return None
        third = self.g * x ** self.a / z ** (1.0 + self.a)
        if self.planar:
            return (dz, cv, third)
        return (dz, cv - dz / x, third)

    def step(self, x, y, h, k1):
        """One trial step; returns (ynew, k7, err_norm_terms) or None on a bad stage."""
        f = self.f
        z, dz, cv = y
        k2 = f(x + _C2 * h, z + h * _A21 * k1[0], dz + h * _A21 * k1[1], cv + h * _A21 * k1[2])
        if k2 is None:
            return None
        k3 = f(x + _C3 * h,
               z + h * (_A31 * k1[0] + _A32 * k2[0]),
               dz + h * (_A31 * k1[1] + _A32 * k2[1]),
               cv + h * (_A31 * k1[2] + _A32 * k2[2]))
        if k3 is None:
            return None
        k4 = f(x + _C4 * h,
               z + h * (_A41 * k1[0] + _A42 * k2[0] + _A43 * k3[0]),
               dz + h * (_A41 * k1[1] + _A42 * k2[1] + _A43 * k3[1]),
               cv + h * (_A41 * k1[2] + _A42 * k2[2] + _A43 * k3[2]))
        if k4 is None:
            return None
        k5 = f(x + _C5 * h,
               z + h * (_A51 * k1[0] + _A52 * k2[0] + _A53 * k3[0] + _A54 * k4[0]),
               dz + h * (_A51 * k1[1] + _A52 * k2[1] + _A53 * k3[1] + _A54 * k4[1]),
               cv + h * (_A51 * k1[2] + _A52 * k2[2] + _A53 * k3[2] + _A54 * k4[2]))
        if k5 is None:
            return None
        k6 = f(x + h,
               z + h * (_A61 * k1[0] + _A62 * k2[0] + _A63 * k3[0] + _A64 * k4[0] + _A65 * k5[0]),
               dz + h * (_A61 * k1[1] + _A62 * k2[1] + _A63 * k3[1] + _A64 * k4[1] + _A65 * k5[1]),
               cv + h * (_A61 * k1[2] + _A62 * k2[2] + _A63 * k3[2] + _A64 * k4[2] + _A65 * k5[2]))
        if k6 is None:
            return None
        ynew = (z + h * (_B1 * k1[0] + _B3 * k3[0] + _B4 * k4[0] + _B5 * k5[0] + _B6 * k6[0]),
                dz + h * (_B1 * k1[1] + _B3 * k3[1] + _B4 * k4[1] + _B5 * k5[1] + _B6 * k6[1]),
                cv + h * (_B1 * k1[2] + _B3 * k3[2] + _B4 * k4[2] + _B5 * k5[2] + _B6 * k6[2]))
        k7 = f(x + h, *ynew)
        if k7 is None:
            return None
        err = (h * (_E1 * k1[0] + _E3 * k3[0] + _E4 * k4[0] + _E5 * k5[0] + _E6 * k6[0] + _E7 * k7[0]),
               h * (_E1 * k1[1] + _E3 * k3[1] + _E4 * k4[1] + _E5 * k5[1] + _E6 * k6[1] + _E7 * k7[1]),
               h * (_E1 * k1[2] + _E3 * k3[2] + _E4 * k4[2] + _E5 * k5[2] + _E6 * k6[2] + _E7 * k7[2]))
        return ynew, k7, err


def _default_x_max(gamma: float, r: Rheology) -> float:
    # Interfaces are bounded by B(gamma) (representation-formula estimate),
    # so 4B is a safe cap for gamma > 0; 10 covers the parabola otherwise.
    if gamma > 0.0:
        b = ((1.0 + r.a) * (2.0 + r.a) / gamma) ** (1.0 / (1.0 + r.a))
        return min(4.0 * b, 1e6)
    return 10.0


def integrate_to_event(
    geom: Geometry,
    gamma: float,
    r: Rheology,
    delta: float = 1e-6,
    x_max: Optional[float] = None,
    tol: float = 1e-10,
    x0: float = 1e-4,
    atol: float = 1e-14,
    keep_trace: bool = False,
    max_steps: int = 200_000,
) -> ShotOutcome:
    """Adaptive integration from the series start to the first terminal event.

    Parameters
    ----------
    delta : float
        Working level in [1e-12, 1): the interface event is z = delta crossed
        from above.  Levels below 1e-12 are rejected; double-precision
        cancellation in z near the interface dominates beyond that.
    tol : float
        Relative integration tolerance; also sets the event-polish target
        |z - delta| < tol*delta (saturated at the double-precision floor).
    x_max : float, optional
        Abscissa cap; defaults to 4*B(gamma) for gamma > 0, else 10.

    Returns
    -------
    ShotOutcome
        Exactly one of INTERFACE_HIT (y, slope), MINIMUM_TURN (x_min, z_min),
        BOUND_EXCEEDED or SINGULAR_STALL.
    """
    if not (1e-12 <= delta < 1.0):
        raise DomainError(f"delta must lie in [1e-12, 1), got {delta!r}")
    if not (tol > 0.0):
        raise DomainError(f"tol must be positive, got {tol!r}")
    if x_max is None:
        x_max = _default_x_max(gamma, r)
    if x_max <= x0:
        raise DomainError(f"x_max = {x_max} must exceed x0 = {x0}")

    st = _Stepper(geom, gamma, r)
    s0 = series_start(geom, gamma, r, x0)
    x, y = s0.x, (s0.z, s0.dz, s0.curv)
    k1 = st.f(x, *y)
    if k1 is None:
        raise DomainError("series start below the working level; decrease x0")

    rtol = tol
    xs, zs, dzs, cvs, dcvs = [x], [y[0]], [y[1]], [y[2]], [k1[2]]

    h = min(1e-2, 0.1 * (x_max - x0))
    err_prev = 1.0
    n = 0

    def finish(kind, **kw):
        trace = None
        if keep_trace:
            trace = ProfileTrace(xs, zs, dzs, cvs, dcvs)
            ddz = np.array(cvs) if geom is Geometry.PLANAR else np.array(cvs) - np.array(dzs) / np.array(xs)
            trace.set_dz_derivative(ddz)
        return ShotOutcome(kind=kind, trace=trace, n_steps=n, **kw)

    def partial(x0_, y0_, k0_, h_):
        """State after one RK step of size h_ from (x0_, y0_).

        A failed stage (z <= 0 on a trial past the interface) maps to a
        far-below-level sentinel so the event bisections keep their sign.
        """
        res = st.step(x0_, y0_, h_, k0_)
        if res is None:
            return (-1.0, 1.0, 0.0)
        return res[0]

    def record(x1, y1, k7):
        xs.append(x1)
        zs.append(y1[0])
        dzs.append(y1[1])
        cvs.append(y1[2])
        dcvs.append(k7[2])

    while True:
        if n >= max_steps:
            raise NumericError(f"step budget {max_steps} exhausted at x = {x}")
        h = min(h, x_max - x)
        res = st.step(x, y, h, k1)
        if res is None:
            # a stage left z > 0: shrink hard; underflow means the z -> 0
            # singularity is swallowing the step
            h *= 0.25
            if h < 32 * _EPS * max(x, 1.0):
                return finish(OutcomeKind.SINGULAR_STALL, x_stop=x, z_stop=y[0],
                              state=ProfileState(x, *y))
            continue
        ynew, k7, err = res
        scale = tuple(atol + rtol * max(abs(y[i]), abs(ynew[i])) for i in range(3))
        err_norm = math.sqrt(((err[0] / scale[0]) ** 2 + (err[1] / scale[1]) ** 2 + (err[2] / scale[2]) ** 2) / 3.0)
        if err_norm > 1.0:
            h *= max(0.2, 0.9 * err_norm ** -0.2)
            if h < 32 * _EPS * max(x, 1.0):
                return finish(OutcomeKind.SINGULAR_STALL, x_stop=x, z_stop=y[0],
                              state=ProfileState(x, *y))
            continue

        n += 1
        x1 = x + h
        hit_h = None
        turn_h = None
        if y[0] > delta >= ynew[0]:
            hit_h = brentq(lambda hh: partial(x, y, k1, hh)[0] - delta, 0.0, h,
                           xtol=1e-30, rtol=8.9e-16)
        if y[1] < 0.0 <= ynew[1]:
            turn_h = brentq(lambda hh: partial(x, y, k1, hh)[1], 0.0, h,
                            xtol=1e-30, rtol=8.9e-16)
        if turn_h is not None and hit_h is not None and hit_h <= turn_h:
            turn_h = None
        if turn_h is not None:
            yt = partial(x, y, k1, turn_h)
            if yt[0] <= delta:
                # graze-through: the level was crossed before the turn
                hit_h = brentq(lambda hh: partial(x, y, k1, hh)[0] - delta, 0.0, turn_h,
                               xtol=1e-30, rtol=8.9e-16)
                turn_h = None
            else:
                xe = x + turn_h
                record(xe, yt, st.f(xe, *yt) or k7)
                return finish(OutcomeKind.MINIMUM_TURN, x_min=xe, z_min=yt[0],
                              state=ProfileState(xe, *yt))
        if hit_h is not None:
            ye = partial(x, y, k1, hit_h)
            xe = x + hit_h
            ke = st.f(xe, *ye)
            record(xe, ye, ke if ke is not None else k7)
            return finish(OutcomeKind.INTERFACE_HIT, y=xe, slope=ye[1],
                          state=ProfileState(xe, *ye))

        record(x1, ynew, k7)
        x, y, k1 = x1, ynew, k7
        if x >= x_max:
            return finish(OutcomeKind.BOUND_EXCEEDED, x_stop=x, z_stop=y[0],
                          state=ProfileState(x, *y))
        # PI controller (Gustafsson): damp oscillations of the step size
        factor = 0.9 * err_norm ** -0.14 * err_prev ** 0.08 if err_norm > 0 else 10.0
        h *= min(10.0, max(0.2, factor))
        err_prev = max(err_norm, 1e-10)


@dataclass(frozen=True)
class FiniteAngleExpansion:
    """Two-term interface expansion z = sqrt(2) theta (y-x) + B (y-x)^(2-a)."""

    y: float
    theta: float
    coefficient: float
    exponent: float

    def __call__(self, x):
        s = self.y - np.asarray(x, dtype=float)
        return math.sqrt(2.0) * self.theta * s + self.coefficient * s ** self.exponent

    @property
    def slope_limit(self) -> float:
        return -math.sqrt(2.0) * self.theta


@dataclass(frozen=True)
class ZeroAngleExpansion:
    """Leading interface behavior z = C (y-x)^(3/(2+a)) of zero-angle solutions."""

    y: float
    coefficient: float
    exponent: float

    def __call__(self, x):
        s = self.y - np.asarray(x, dtype=float)
        return self.coefficient * s ** self.exponent


def expand_finite_angle(y: float, theta: float, gamma: float, r: Rheology) -> FiniteAngleExpansion:
    """Local finite-contact-angle expansion near an interface at x = y.

    Valid for a < 1 (any gamma) and for a >= 1 when gamma <= 0; the
    coefficient is the dominant-balance value
    B = gamma y^a / (2^((1+a)/2) theta^(1+a) a (1-a) (2-a)).
    """
    a = r.a
    if a >= 1.0 and gamma > 0.0:
        raise UnsupportedRegimeError(
            f"no interface expansion for a = {a} >= 1 with gamma > 0")
    if not (0.0 < theta <= 1.0):
        raise DomainError(f"theta must lie in (0, 1], got {theta!r}")
    if not (y > 0.0):
        raise DomainError(f"interface position must be positive, got {y!r}")
    b = gamma * y ** a / (2 ** ((1 + a) / 2) * theta ** (1 + a) * a * (1 - a) * (2 - a))
    return FiniteAngleExpansion(y=y, theta=theta, coefficient=b, exponent=2.0 - a)


def expand_zero_angle(y: float, gamma: float, r: Rheology) -> ZeroAngleExpansion:
    """Local zero-contact-angle expansion near an interface at x = y.

    z = C (y-x)^(3/(2+a)) with the dominant-balance prefactor
    C = [gamma y^a (2+a)^3 / (3 (1-a) (1+2a))]^(1/(2+a)); the resulting
    z' -> 0 and z'' -> +inf as x -> y-.
    """
    a = r.a
    if not (0.0 < a < 1.0):
        raise UnsupportedRegimeError(
            f"zero-contact-angle interfaces require 0 < a < 1, got a = {a}")
    if not (gamma > 0.0):
        raise UnsupportedRegimeError(
            f"zero-contact-angle interfaces require gamma > 0, got {gamma!r}")
    if not (y > 0.0):
        raise DomainError(f"interface position must be positive, got {y!r}")
    c = (gamma * y ** a * (2 + a) ** 3 / (3 * (1 - a) * (1 + 2 * a))) ** (1.0 / (2 + a))
    return ZeroAngleExpansion(y=y, coefficient=c, exponent=3.0 / (2.0 + a))
