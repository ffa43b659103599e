"""Traveling-wave fronts of the one-dimensional film equation.

With the wave speed scaled out, c-scaled front profiles satisfy
f''' = -f^(-1-1/lambda); a front moving at speed c is recovered from a
computed profile by f -> |c|^(1/(2 lambda + 1)) f together with the
matching stretch of xi.  The substitution x = f, y = f^(-alpha) f_xi,
z = f^beta f_xi_xi with alpha = (lam-1)/(3 lam), beta = (lam+2)/(3 lam)
and the stretched variable d(xi1) = x^-(alpha+beta) d(xi) turns this into
the autonomous system

    x' = x y,   y' = z - alpha y^2,   z' = -1 + beta y z,

whose (y, z) phase plane has a single saddle P.  The stable manifold is
the union of separatrices Gamma1 (from y -> +inf, z -> 0+) and Gamma2
(from y -> -inf, z ~ (alpha + beta/2) y^2); the unstable one of Gamma3
(to y -> +inf, quadratic z) and Gamma4 (to y -> -inf, z -> 0-).  Escaping
ends satisfy either z*y -> 1/(beta - alpha) = lambda ("linear" ends) or
z/y^2 -> alpha + beta/2 ("quadratic" ends), and the (backward, forward)
end pair classifies every orbit into the four separatrix families, the
orbit sitting at P itself (the explicit power-law front C_lam xi^p with
p = 3 lam/(2 lam + 1)), or one of four mixed families.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ClassificationError, DomainError, UnsupportedRegimeError
from .params import Rheology

__all__ = [
    "TWState",
    "Equilibrium",
    "SeparatrixBranch",
    "Family",
    "FrontBehavior",
    "TrajectoryLabel",
    "TrajectoryClass",
    "TWTrajectory",
    "FrontProfile",
    "tw_rhs",
    "equilibrium_analysis",
    "integrate_separatrix",
    "classify_trajectory",
    "reconstruct_front",
    "equilibrium_front",
    "front_coefficient",
]


@dataclass(frozen=True)
class TWState:
    """Point of the three-dimensional phase space (x = f > 0)."""

    x: float
    y: float
    z: float
    xi1: float = 0.0


@dataclass(frozen=True)
class Equilibrium:
    """Saddle point of the (y, z) subsystem with its linearization."""

    y_P: float
    z_P: float
    jacobian: np.ndarray
    eigenvalues: tuple[float, float]      # (unstable > 0, stable < 0)
    eigenvectors: np.ndarray              # columns match eigenvalues
    det: float
    trace: float


class SeparatrixBranch(enum.Enum):
    GAMMA1 = 1
    GAMMA2 = 2
    GAMMA3 = 3
    GAMMA4 = 4


class Family(enum.Enum):
    """Invariant-manifold families of the 3-D flow (R x Gamma_i) plus P itself."""

    PI1 = 1
    PI2 = 2
    PI3 = 3
    PI4 = 4
    EQUILIBRIUM = 0


class FrontBehavior(enum.Flag):
    NONE = 0
    LINEAR_AT_ORIGIN = enum.auto()
    ZERO_ANGLE_AT_ORIGIN = enum.auto()
    QUADRATIC_FAR_FIELD = enum.auto()
    COMPACT_SUPPORT = enum.auto()
    NO_FRONT = enum.auto()


class TrajectoryLabel(enum.Enum):
    GAMMA1 = "Gamma1"
    GAMMA2 = "Gamma2"
    GAMMA3 = "Gamma3"
    GAMMA4 = "Gamma4"
    EQUILIBRIUM_ORBIT = "EquilibriumOrbit"
    MIXED = "Mixed"


# family pair (unordered) -> front behavior of the reconstructed profile
_BEHAVIOR = {
    frozenset({Family.PI1, Family.EQUILIBRIUM}): FrontBehavior.LINEAR_AT_ORIGIN,
    frozenset({Family.PI2, Family.EQUILIBRIUM}): FrontBehavior.NO_FRONT | FrontBehavior.QUADRATIC_FAR_FIELD,
    frozenset({Family.PI3, Family.EQUILIBRIUM}): FrontBehavior.ZERO_ANGLE_AT_ORIGIN | FrontBehavior.QUADRATIC_FAR_FIELD,
    frozenset({Family.PI4, Family.EQUILIBRIUM}): FrontBehavior.ZERO_ANGLE_AT_ORIGIN | FrontBehavior.COMPACT_SUPPORT,
    frozenset({Family.EQUILIBRIUM}): FrontBehavior.ZERO_ANGLE_AT_ORIGIN,
    frozenset({Family.PI1, Family.PI4}): FrontBehavior.LINEAR_AT_ORIGIN | FrontBehavior.COMPACT_SUPPORT,
    frozenset({Family.PI2, Family.PI4}): FrontBehavior.LINEAR_AT_ORIGIN | FrontBehavior.QUADRATIC_FAR_FIELD,
    frozenset({Family.PI2, Family.PI3}): FrontBehavior.NO_FRONT | FrontBehavior.QUADRATIC_FAR_FIELD,
    frozenset({Family.PI1, Family.PI3}): FrontBehavior.LINEAR_AT_ORIGIN | FrontBehavior.QUADRATIC_FAR_FIELD,
}

_GAMMA_FOR_PAIR = {
    frozenset({Family.PI1, Family.EQUILIBRIUM}): TrajectoryLabel.GAMMA1,
    frozenset({Family.PI2, Family.EQUILIBRIUM}): TrajectoryLabel.GAMMA2,
    frozenset({Family.PI3, Family.EQUILIBRIUM}): TrajectoryLabel.GAMMA3,
    frozenset({Family.PI4, Family.EQUILIBRIUM}): TrajectoryLabel.GAMMA4,
}


@dataclass(frozen=True)
class TrajectoryClass:
    """Classification of one phase-space orbit.

    from_family / to_family are the backward-end and forward-end families
    (in the stretched variable xi1); dewetting marks the y < 0 mixed family
    whose profiles have f' < 0 throughout.
    """

    label: TrajectoryLabel
    from_family: Family
    to_family: Family
    front_behavior: FrontBehavior
    dewetting: bool = False
    tail_constants: dict = field(default_factory=dict)


@dataclass
class TWTrajectory:
    """Sampled phase-space orbit; xi is the accumulated physical coordinate."""

    xi1: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    xi: np.ndarray
    branch: Optional[SeparatrixBranch] = None
    p_end: Optional[str] = None      # "start", "end", or None


@dataclass
class FrontProfile:
    """Reconstructed front samples f(xi) with slope f_xi."""

    xi: np.ndarray
    f: np.ndarray
    f_xi: np.ndarray


def front_coefficient(r: Rheology) -> float:
    """C_lam of the explicit equilibrium front f = C_lam xi^(3 lam/(2 lam+1)).

    Closed form [(alpha+beta) (beta*alpha)^(-1/3)]^(1/(alpha+beta)); satisfies
    C^(2+1/lam) p (p-1) (2-p) = 1 with p the front exponent.
    """
    al, be = r.tw_alpha, r.tw_beta
    if al <= 0:
        raise UnsupportedRegimeError(f"equilibrium front requires lambda > 1, got {r.lam}")
    s = al + be
    return (s * (be * al) ** (-1.0 / 3.0)) ** (1.0 / s)


def tw_rhs(state: TWState, r: Rheology) -> tuple[float, float, float]:
    """(x', y', z') of the autonomous system; requires x > 0."""
    if not (state.x > 0.0):
        raise DomainError(f"traveling-wave states need x = f > 0, got {state.x!r}")
    al, be = r.tw_alpha, r.tw_beta
    return (state.x * state.y,
            state.z - al * state.y ** 2,
            -1.0 + be * state.y * state.z)


def equilibrium_analysis(r: Rheology) -> Equilibrium:
    """Saddle point P and its linearization; requires lambda > 1 (alpha > 0)."""
    if r.lam <= 1.0:
        raise UnsupportedRegimeError(
            f"saddle structure requires lambda > 1 (alpha > 0), got lambda = {r.lam}")
    al, be = r.tw_alpha, r.tw_beta
    y_p = (be * al) ** (-1.0 / 3.0)
    z_p = al ** (1.0 / 3.0) * be ** (-2.0 / 3.0)
    jac = np.array([[-2.0 * al * y_p, 1.0],
                    [be * z_p, be * y_p]])
    det = float(np.linalg.det(jac))
    tr = float(np.trace(jac))
    w, v = np.linalg.eig(jac)
    w = np.real(w)
    v = np.real(v)
    order = np.argsort(w)[::-1]          # unstable first
    w, v = w[order], v[:, order]
    if not (w[0] > 0.0 > w[1]):
        raise ClassificationError(
            "equilibrium is not a saddle (degenerate eigenstructure)",
            diagnostics={"eigenvalues": w.tolist(), "lambda": r.lam})
    # orient both eigenvectors toward positive y for reproducible branches
    for j in range(2):
        if v[0, j] < 0 or (v[0, j] == 0 and v[1, j] < 0):
            v[:, j] = -v[:, j]
    return Equilibrium(y_P=y_p, z_P=z_p, jacobian=jac,
                       eigenvalues=(float(w[0]), float(w[1])),
                       eigenvectors=v, det=det, trace=tr)


def _phase_rhs(r: Rheology, sign: float):
    al, be = r.tw_alpha, r.tw_beta

    def f(t, s):
        y, z, lnx, xi = s
        return (sign * (z - al * y * y),
                sign * (-1.0 + be * y * z),
                sign * y,
                sign * math.exp((al + be) * lnx))

    return f


def _integrate_phase(r, y0, z0, lnx0, span, direction, xi1_max=400.0,
                     p_ball=None, rtol=1e-11, atol=1e-12):
    """Integrate (y, z, ln x, xi) until |y| or |z| escapes span (or P-ball entry).

    direction = +1 integrates forward in xi1, -1 backward; the returned
    samples are always ordered by increasing xi1.
    """
    sign = 1.0 if direction > 0 else -1.0
    # a seed at or beyond the cap would never produce a sign change
    span_eff = max(span, 2.0 * max(abs(y0), abs(z0)))

    def escape(t, s):
        return span_eff - max(abs(s[0]), abs(s[1]))
    escape.terminal = True
    escape.direction = -1.0

    events = [escape]
    if p_ball is not None:
        yp, zp, rad = p_ball

        def ball(t, s):
            return math.hypot(s[0] - yp, s[1] - zp) - rad
        ball.terminal = True
        ball.direction = -1.0
        events.append(ball)

    sol = solve_ivp(_phase_rhs(r, sign), (0.0, xi1_max), (y0, z0, lnx0, 0.0),
                    method="RK45", rtol=rtol, atol=atol, events=events,
                    dense_output=False)
    if sol.status == 0:
        raise ClassificationError(
            f"no escape or equilibrium approach within xi1 span {xi1_max}",
            diagnostics={"final_state": sol.y[:, -1].tolist()})
    if sol.status == -1:
        raise ClassificationError("phase integration failed: " + sol.message,
                                  diagnostics={"t": sol.t[-1]})
    hit_ball = p_ball is not None and sol.t_events[1].size > 0
    t = sign * sol.t
    ys, zs, lnxs, xis = sol.y
    if direction < 0:
        t, ys, zs, lnxs, xis = t[::-1], ys[::-1], zs[::-1], lnxs[::-1], xis[::-1]
    return t, ys, zs, lnxs, xis, hit_ball


def integrate_separatrix(which: SeparatrixBranch, r: Rheology, span: float = 1e4,
                         tol: float = 1e-11, eps: float = 1e-7) -> TWTrajectory:
    """Trace one separatrix from an eps offset along the proper eigenvector.

    Gamma1/Gamma2 live on the stable manifold and are integrated backward in
    xi1 (their tails are the backward ends); Gamma3/Gamma4 on the unstable
    manifold, forward.  The branch pairs to the eigenvector sign: positive-y
    displacement escapes toward y -> +inf (Gamma1, Gamma3).

    Samples are ordered by increasing xi1 and x is seeded so x = 1 at the
    launch point; the multiplicative freedom in x is a translation of the
    reconstructed front.
    """
    eq = equilibrium_analysis(r)
    stable = which in (SeparatrixBranch.GAMMA1, SeparatrixBranch.GAMMA2)
    vec = eq.eigenvectors[:, 1] if stable else eq.eigenvectors[:, 0]
    sgn = +1.0 if which in (SeparatrixBranch.GAMMA1, SeparatrixBranch.GAMMA3) else -1.0
    y0 = eq.y_P + sgn * eps * vec[0]
    z0 = eq.z_P + sgn * eps * vec[1]
    direction = -1 if stable else +1
    t, ys, zs, lnxs, xis, _ = _integrate_phase(r, y0, z0, 0.0, span, direction,
                                               rtol=tol, atol=tol * 0.1)
    return TWTrajectory(xi1=t, x=np.exp(lnxs), y=ys, z=zs, xi=xis,
                        branch=which, p_end="end" if stable else "start")


def _tail_family(ys, zs, r: Rheology, stationarity: float = 0.01):
    """Match a trajectory end (samples ordered toward the end) to a regime.

    Uses the trailing decade of |y|: z*y -> lambda on linear ends,
    z/y^2 -> alpha + beta/2 on quadratic ends; the matching ratio must be
    stationary within 1% over the decade.
    """
    ay = np.abs(ys)
    ymax = ay[-1]
    sel = ay >= max(ymax / 10.0, 1e-12)
    # keep only the contiguous trailing run
    idx = np.nonzero(~sel)[0]
    start = idx[-1] + 1 if idx.size else 0
    yt, zt = ys[start:], zs[start:]
    if yt.size < 8:
        raise ClassificationError("too few tail samples for regime matching",
                                  diagnostics={"n": int(yt.size)})
    r1 = zt * yt
    r2 = zt / yt ** 2
    s1 = np.std(r1) / max(abs(np.mean(r1)), 1e-300)
    s2 = np.std(r2) / max(abs(np.mean(r2)), 1e-300)
    lam_const = 1.0 / (r.tw_beta - r.tw_alpha)    # == lambda
    quad_const = r.tw_alpha + 0.5 * r.tw_beta
    if s1 < stationarity and s1 <= s2:
        fam = Family.PI1 if yt[-1] > 0 else Family.PI4
        return fam, {"zy": float(np.mean(r1)), "zy_expected": lam_const}
    if s2 < stationarity:
        fam = Family.PI3 if yt[-1] > 0 else Family.PI2
        return fam, {"z_over_y2": float(np.mean(r2)), "z_over_y2_expected": quad_const}
    raise ClassificationError(
        "trajectory end matched no asymptotic regime within the caps",
        diagnostics={"zy_variation": float(s1), "z_over_y2_variation": float(s2),
                     "y_end": float(yt[-1]), "z_end": float(zt[-1])})


def classify_trajectory(initial: TWState, r: Rheology, span: float = 1e4,
                        tol: float = 1e-12, keep_orbits: bool = False):
    """Classify the orbit through `initial` by its two ends.

    Integrates forward and backward in xi1 until each end either escapes
    (|y| or |z| beyond span, then matched to a tail regime) or enters a
    small ball around P.  Returns the TrajectoryClass, optionally with the
    two sampled half-orbits attached as (cls, backward, forward).
    """
    if not (initial.x > 0.0):
        raise DomainError("classification requires x > 0")
    eq = equilibrium_analysis(r)
    scale = 1.0 + abs(eq.y_P) + abs(eq.z_P)
    # ball radius is the classification resolution near P: the off-manifold
    # error of a separatrix sample is amplified by contraction^(lam_u/lam_s)
    # on the way in, so the radius must dominate the amplified tracing error
    rad = 1e-2 * scale
    dist = math.hypot(initial.y - eq.y_P, initial.z - eq.z_P)
    if dist <= rad:
        cls = TrajectoryClass(label=TrajectoryLabel.EQUILIBRIUM_ORBIT,
                              from_family=Family.EQUILIBRIUM,
                              to_family=Family.EQUILIBRIUM,
                              front_behavior=_BEHAVIOR[frozenset({Family.EQUILIBRIUM})])
        return (cls, None, None) if keep_orbits else cls

    lnx0 = math.log(initial.x)
    halves = []
    families = []
    consts = {}
    for direction, tag in ((-1, "backward"), (+1, "forward")):
        t, ys, zs, lnxs, xis, hit = _integrate_phase(
            r, initial.y, initial.z, lnx0, span, direction,
            p_ball=(eq.y_P, eq.z_P, rad), rtol=tol, atol=tol * 0.1)
        traj = TWTrajectory(xi1=t, x=np.exp(lnxs), y=ys, z=zs, xi=xis)
        halves.append(traj)
        if hit:
            families.append(Family.EQUILIBRIUM)
        else:
            # order samples toward the end being classified
            if direction < 0:
                fam, c = _tail_family(ys[::-1], zs[::-1], r)
            else:
                fam, c = _tail_family(ys, zs, r)
            families.append(fam)
            consts[tag] = c

    back, fwd = families
    pair = frozenset({back, fwd})
    if pair == frozenset({Family.EQUILIBRIUM}):
        label = TrajectoryLabel.EQUILIBRIUM_ORBIT
    elif pair in _GAMMA_FOR_PAIR:
        label = _GAMMA_FOR_PAIR[pair]
    else:
        label = TrajectoryLabel.MIXED
    behavior = _BEHAVIOR.get(pair)
    if behavior is None:
        raise ClassificationError(f"no family dictionary entry for {back} -> {fwd}",
                                  diagnostics={"backward": back, "forward": fwd})
    dewet = pair == frozenset({Family.PI2, Family.PI4})
    cls = TrajectoryClass(label=label, from_family=back, to_family=fwd,
                          front_behavior=behavior, dewetting=dewet,
                          tail_constants=consts)
    return (cls, halves[0], halves[1]) if keep_orbits else cls


def reconstruct_front(trajectory: TWTrajectory, r: Rheology,
                      xi_anchor: float = 0.0) -> FrontProfile:
    """Recover the physical front f(xi) from a phase-space trajectory.

    xi comes from quadrature of d(xi) = x^(alpha+beta) d(xi1) accumulated
    during integration.  Both kinds of x -> 0 ends are continued with their
    analytic local laws, where the quadrature increments underflow the
    accumulated value: the equilibrium power law f ~ [(alpha+beta) y_P
    xi]^(1/(alpha+beta)) before a P-end, and the linear front law
    f ~ |K| (xi - xi_front) with K = y x^alpha on escaping regime-43 ends.
    The front (smallest-x end, if any) is placed at xi_anchor; trajectories
    without a front keep their first sample at xi_anchor.
    """
    al, be = r.tw_alpha, r.tw_beta
    s = al + be
    x, y = trajectory.x, trajectory.y
    n = x.size
    xmax = float(np.max(x))
    xi = xi_anchor + (trajectory.xi - trajectory.xi[0])
    f_xi = y * x ** al
    x_splice = 1e-3 * xmax
    above = np.nonzero(x >= x_splice)[0]

    # analytic continuation over a trailing x -> 0 touchdown (e.g. Gamma4)
    if (trajectory.p_end != "end" and x[-1] < x_splice and f_xi[-1] < 0.0
            and above.size and above[-1] < n - 1):
        j = int(above[-1])
        xi_front = xi[j] + x[j] / abs(f_xi[j])
        tail = slice(j + 1, n)
        xi = xi.copy()
        xi[tail] = xi_front - x[tail] / np.maximum(np.abs(f_xi[tail]), 1e-300)

    # anchor / continue the leading end
    if trajectory.p_end == "start":
        # pre-sample segment sits on the equilibrium power law
        eqv = equilibrium_analysis(r)
        xi = xi + x[0] ** s / (s * eqv.y_P)
    elif x[0] < x_splice and f_xi[0] > 0.0:
        # escaping linear end at the origin: f ~ K xi
        if above.size and above[0] > 0:
            j = int(above[0])
            xi = xi + (x[j] / abs(f_xi[j]) - (xi[j] - xi_anchor))
            head = slice(0, j)
            xi[head] = xi_anchor + x[head] / np.maximum(np.abs(f_xi[head]), 1e-300)
        else:
            xi = xi + x[0] / max(abs(f_xi[0]), 1e-300)
    return FrontProfile(xi=xi, f=x, f_xi=f_xi)


def equilibrium_front(r: Rheology, xi_lo: float, xi_hi: float,
                      n: int = 400, tol: float = 1e-12) -> FrontProfile:
    """Numerically reconstructed front of the orbit sitting at P.

    Seeds (y, z) exactly at P (the drift of the integrated equilibrium is
    pure roundoff) and integrates x and xi; closed form: C_lam xi^p.
    """
    eq = equilibrium_analysis(r)
    al, be = r.tw_alpha, r.tw_beta
    c_lam = front_coefficient(r)
    p = r.p_front
    # xi1 range covering the requested xi window around x(0) = 1
    lnx_lo = math.log(c_lam * xi_lo ** p) - 0.5
    lnx_hi = math.log(c_lam * xi_hi ** p) + 0.5
    t_back = abs(lnx_lo) / eq.y_P + 0.1
    t_fwd = abs(lnx_hi) / eq.y_P + 0.1

    rhs = _phase_rhs(r, 1.0)
    sol_b = solve_ivp(_phase_rhs(r, -1.0), (0.0, t_back), (eq.y_P, eq.z_P, 0.0, 0.0),
                      method="DOP853", rtol=tol, atol=1e-14, dense_output=True)
    sol_f = solve_ivp(rhs, (0.0, t_fwd), (eq.y_P, eq.z_P, 0.0, 0.0),
                      method="DOP853", rtol=tol, atol=1e-14, dense_output=True)
    tb = np.linspace(t_back, 0.0, n // 2 + 1)
    tf = np.linspace(0.0, t_fwd, n // 2 + 1)
    yb = sol_b.sol(tb)
    yf = sol_f.sol(tf)
    xi1 = np.concatenate([-tb, tf[1:]])
    lnx = np.concatenate([yb[2], yf[2][1:]])
    # backward states already carry signed displacements (d xi/d tau < 0)
    xi_acc = np.concatenate([yb[3], yf[3][1:]])
    x = np.exp(lnx)
    # anchor x -> 0 (xi1 -> -inf) at xi = 0 with the local power law
    xi = xi_acc - xi_acc[0] + x[0] ** (al + be) / ((al + be) * eq.y_P)
    return FrontProfile(xi=xi, f=x, f_xi=eq.y_P * x ** al)
