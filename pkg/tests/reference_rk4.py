"""Independent fixed-step RK4 reference integrator for the profile ODEs.

Deliberately separate from the library's adaptive stepper: this is the
oracle the acceptance suite checks the production shooting against.  The
step size is fixed (default 1e-5); events are located by bisecting the
step size from the last in-bounds state.  numba accelerates the loop when
available; the pure-Python fallback is identical, only slower.
"""
import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is an optional accelerator
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f
        return wrap

PLANAR, RADIAL = 0, 1
HIT, TURN, OUT = 0, 1, 2


@njit(cache=True)
def _rhs(geom, x, s0, s1, s2, g, a):
    if geom == PLANAR:
        return s1, s2, g * x ** a / s0 ** (1.0 + a)
    return s1, s2 - s1 / x, g * x ** a / s0 ** (1.0 + a)


@njit(cache=True)
def _rk4(geom, x, s0, s1, s2, h, g, a):
    k10, k11, k12 = _rhs(geom, x, s0, s1, s2, g, a)
    k20, k21, k22 = _rhs(geom, x + 0.5 * h, s0 + 0.5 * h * k10,
                         s1 + 0.5 * h * k11, s2 + 0.5 * h * k12, g, a)
    k30, k31, k32 = _rhs(geom, x + 0.5 * h, s0 + 0.5 * h * k20,
                         s1 + 0.5 * h * k21, s2 + 0.5 * h * k22, g, a)
    k40, k41, k42 = _rhs(geom, x + h, s0 + h * k30, s1 + h * k31,
                         s2 + h * k32, g, a)
    return (s0 + h / 6.0 * (k10 + 2 * k20 + 2 * k30 + k40),
            s1 + h / 6.0 * (k11 + 2 * k21 + 2 * k31 + k41),
            s2 + h / 6.0 * (k12 + 2 * k22 + 2 * k32 + k42))


@njit(cache=True)
def series(geom, g, a, x0):
    if geom == PLANAR:
        z = 1.0 - x0 ** 2 / 2.0 + g * x0 ** (3.0 + a) / ((1 + a) * (2 + a) * (3 + a))
        dz = -x0 + g * x0 ** (2.0 + a) / ((1 + a) * (2 + a))
    else:
        z = 1.0 - x0 ** 2 / 4.0 + g * x0 ** (3.0 + a) / ((1 + a) * (3 + a) ** 2)
        dz = -0.5 * x0 + g * x0 ** (2.0 + a) / ((1 + a) * (3 + a))
    curv = -1.0 + g * x0 ** (1.0 + a) / (1 + a)
    return z, dz, curv


@njit(cache=True)
def integrate(geom, g, a, delta, h=1e-5, x0=1e-4, x_max=40.0):
    """March until z <= delta (HIT), dz >= 0 with z > delta (TURN) or x_max (OUT).

    Returns (kind, x, z, dz) at the bisected event point.
    """
    x = x0
    s0, s1, s2 = series(geom, g, a, x0)
    n_max = int((x_max - x0) / h) + 2
    for _ in range(n_max):
        t0, t1, t2 = _rk4(geom, x, s0, s1, s2, h, g, a)
        bad = not (t0 == t0)
        if bad or t0 <= delta:
            lo, hi = 0.0, h
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                u0, u1, u2 = _rk4(geom, x, s0, s1, s2, mid, g, a)
                if (not (u0 == u0)) or u0 <= delta:
                    hi = mid
                else:
                    lo = mid
                if hi - lo <= 1e-18 * (1.0 + x):
                    break
            m = 0.5 * (lo + hi)
            u0, u1, u2 = _rk4(geom, x, s0, s1, s2, m, g, a)
            return HIT, x + m, u0, u1
        if t1 >= 0.0 and t0 > delta:
            lo, hi = 0.0, h
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                u0, u1, u2 = _rk4(geom, x, s0, s1, s2, mid, g, a)
                if u1 >= 0.0:
                    hi = mid
                else:
                    lo = mid
                if hi - lo <= 1e-18 * (1.0 + x):
                    break
            m = 0.5 * (lo + hi)
            u0, u1, u2 = _rk4(geom, x, s0, s1, s2, m, g, a)
            return TURN, x + m, u0, u1
        x += h
        s0, s1, s2 = t0, t1, t2
        if x >= x_max:
            return OUT, x, s0, s1
    return OUT, x, s0, s1


def gamma0_level(geom, a, delta, h=1e-5, gtol=1e-10):
    """Hit/turn boundary at one level, by plain bisection."""
    lo, hi = 0.0, 1.0
    while integrate(geom, hi, a, delta, h)[0] != TURN:
        lo = hi
        hi *= 1.5
        if hi > 40.0:
            raise RuntimeError("no turning bracket")
    while hi - lo > gtol:
        mid = 0.5 * (lo + hi)
        if integrate(geom, mid, a, delta, h)[0] == HIT:
            lo = mid
        else:
            hi = mid
    kind, x, z, dz = integrate(geom, lo, a, delta, h)
    return lo, x, dz


def gamma_theta_level(geom, a, delta, theta, slope_scale, h=1e-5, gtol=1e-10):
    """Smallest positive gamma with slope -theta*slope_scale*sqrt(1-delta)."""
    target = -theta * slope_scale * np.sqrt(1.0 - delta)

    def mismatch(g):
        kind, x, z, dz = integrate(geom, g, a, delta, h)
        if kind == HIT:
            return dz - target, x, dz
        return -target, x, dz

    g0, _, _ = gamma0_level(geom, a, delta, h, gtol)
    n = 64
    lo, dlo = 0.0, mismatch(1e-12)[0]
    hi = None
    for k in range(1, n + 1):
        gk = g0 * k / n
        dk = mismatch(gk)[0]
        if dlo < 0.0 <= dk:
            hi = gk
            break
        lo, dlo = gk, dk
    if hi is None:
        hi = g0 * (1.0 + 1e-9)
    while hi - lo > gtol:
        mid = 0.5 * (lo + hi)
        if mismatch(mid)[0] < 0.0:
            lo = mid
        else:
            hi = mid
    _, x, dz = mismatch(lo)
    return lo, x, dz
