import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import simpson

from filmspread import (DomainError, Geometry, OutcomeKind, ProfileState,
                        SingularityError, UnsupportedRegimeError,
                        expand_finite_angle, expand_zero_angle,
                        integrate_to_event, make_rheology, rhs, series_start)

P, R = Geometry.PLANAR, Geometry.RADIAL


class TestSeriesStart:
    def test_planar_parabola(self, rheo2):
        s = series_start(P, 0.0, rheo2, 0.1)
        assert s.z == pytest.approx(0.995, abs=1e-15)
        assert s.dz == pytest.approx(-0.1, abs=1e-15)
        assert s.curv == pytest.approx(-1.0, abs=1e-15)

    def test_radial_parabola(self, rheo2):
        s = series_start(R, 0.0, rheo2, 0.2)
        assert s.z == pytest.approx(0.99, abs=1e-15)
        assert s.dz == pytest.approx(-0.1, abs=1e-15)
        assert s.curv == pytest.approx(-1.0, abs=1e-15)

    def test_planar_gamma_correction(self, rheo2):
        # 0.995 + 0.1^3.5 / (1.5 * 2.5 * 3.5) = 0.99502409354...
        s = series_start(P, 1.0, rheo2, 0.1)
        assert s.z == pytest.approx(0.995 + 0.1 ** 3.5 / 13.125, rel=1e-14)
        assert s.z == pytest.approx(0.9950240935440775, rel=1e-13)

    def test_planar_series_residual_order(self, rheo2):
        # the truncated series satisfies z''' = gamma x^a exactly, so the ODE
        # residual is gamma x^a (z^(1+a) - 1) ~ -(1+a)/2 gamma x^(2+a)
        g, a = 0.7, rheo2.a
        for x0 in (1e-2, 1e-3):
            s = series_start(P, g, rheo2, x0)
            resid = s.z ** (1 + a) * g * x0 ** a - g * x0 ** a
            lead = -g * x0 ** a * (1 + a) * x0 ** 2 / 2.0
            assert resid == pytest.approx(lead, rel=2e-2 if x0 == 1e-2 else 2e-4)

    def test_radial_series_consistency(self):
        # re-derivation check of the radial coefficient gamma/((1+a)(3+a)^2):
        # the series' z-derivatives must reproduce curv = z'' + z'/x exactly
        for lam in (1.5, 2.0, 3.0):
            r = make_rheology(lam)
            a, g, x0 = r.a, 0.8, 1e-2
            s = series_start(R, g, r, x0)
            c3 = g / ((1 + a) * (3 + a) ** 2)
            ddz = -0.5 + c3 * (3 + a) * (2 + a) * x0 ** (1 + a)
            dz_over_x = -0.5 + c3 * (3 + a) * x0 ** (1 + a)
            assert s.curv == pytest.approx(ddz + dz_over_x, rel=1e-13)

    def test_rejects_bad_x0(self, rheo2):
        with pytest.raises(DomainError):
            series_start(P, 0.0, rheo2, 0.0)
        with pytest.raises(DomainError):
            series_start(P, 0.0, rheo2, -1e-3)


class TestRhs:
    def test_planar_unit_point(self, rheo2):
        d = rhs(P, ProfileState(x=1.0, z=1.0, dz=0.0, curv=0.0), 1.0, rheo2)
        assert d[2] == pytest.approx(1.0, rel=1e-15)

    def test_planar_quarter_height(self, rheo2):
        d = rhs(P, ProfileState(x=1.0, z=0.25, dz=0.0, curv=0.0), 1.0, rheo2)
        assert d[2] == pytest.approx(8.0, rel=1e-14)

    def test_radial_decoupled(self, rheo2):
        d = rhs(R, ProfileState(x=2.0, z=1.0, dz=-0.5, curv=-1.0), 0.0, rheo2)
        assert d == pytest.approx((-0.5, -0.75, 0.0), rel=1e-15)

    def test_singularity_guard(self, rheo2):
        with pytest.raises(SingularityError):
            rhs(P, ProfileState(x=1.0, z=0.0, dz=-1.0, curv=0.0), 1.0, rheo2)
        with pytest.raises(DomainError):
            rhs(P, ProfileState(x=0.0, z=1.0, dz=0.0, curv=-1.0), 1.0, rheo2)


class TestIntegrateToEvent:
    def test_explicit_parabola_hits(self, rheo2):
        for delta in (1e-3, 1e-6):
            out = integrate_to_event(P, 0.0, rheo2, delta=delta)
            assert out.kind is OutcomeKind.INTERFACE_HIT
            assert out.y == pytest.approx(math.sqrt(2 * (1 - delta)), abs=1e-12)
            assert out.slope == pytest.approx(-out.y, abs=1e-10)

    def test_radial_explicit_parabola(self, rheo2):
        out = integrate_to_event(R, 0.0, rheo2, delta=1e-6)
        assert out.kind is OutcomeKind.INTERFACE_HIT
        assert out.y == pytest.approx(2 * math.sqrt(1 - 1e-6), abs=1e-12)

    def test_event_level_contract(self, rheo2):
        # |z - delta| at the hit: tol*delta when representable, ulp-floor else
        out = integrate_to_event(P, 0.2, rheo2, delta=1e-3, tol=1e-10)
        assert abs(out.state.z - 1e-3) < 1e-13
        out = integrate_to_event(P, 0.2, rheo2, delta=1e-6, tol=1e-10)
        floor = 64 * np.finfo(float).eps * abs(out.slope) * out.y
        assert abs(out.state.z - 1e-6) < max(1e-16, floor)

    def test_large_gamma_turns(self, rheo2):
        # above the no-interface threshold: positive minimum (reference RK4
        # fixed-step values frozen: x_min, z_min)
        out = integrate_to_event(P, 7.0, rheo2, delta=1e-6)
        assert out.kind is OutcomeKind.MINIMUM_TURN
        assert out.x_min == pytest.approx(0.6364617281, abs=2e-9)
        assert out.z_min == pytest.approx(0.9112835215, abs=2e-9)
        assert 0.0 < out.z_min < 1.0

    def test_dewetting_gamma_negative(self, rheo2):
        out = integrate_to_event(P, -1.0, rheo2, delta=1e-6)
        assert out.kind is OutcomeKind.INTERFACE_HIT
        assert out.y == pytest.approx(1.2454800593, abs=1e-7)
        assert out.y < math.sqrt(2.0)
        assert out.slope < -math.sqrt(2.0)

    def test_comparison_with_parabola(self, rheo2):
        # gamma > 0 profiles sit above 1 - x^2/2, gamma < 0 below
        for g, sign in ((0.5, +1), (-0.5, -1)):
            out = integrate_to_event(P, g, rheo2, delta=1e-6, keep_trace=True)
            tr = out.trace
            x = tr.x[1:]
            gap = sign * (tr.z[1:] - (1 - x ** 2 / 2))
            assert np.all(gap > 0)

    def test_event_dichotomy(self, rheo2):
        kinds = set()
        for g in np.linspace(0.05, 2.0, 9):
            out = integrate_to_event(P, g, rheo2, delta=1e-4)
            kinds.add(out.kind)
            assert out.kind in (OutcomeKind.INTERFACE_HIT, OutcomeKind.MINIMUM_TURN)
        assert kinds == {OutcomeKind.INTERFACE_HIT, OutcomeKind.MINIMUM_TURN}

    def test_interface_curvature_divergence(self, rheo2):
        # curvature blow-up of z'' at a gamma > 0 interface as delta drops
        curvs = []
        for delta in (1e-2, 1e-4, 1e-6, 1e-8):
            out = integrate_to_event(P, 0.3, rheo2, delta=delta)
            curvs.append(out.state.curv)
        assert all(b > a for a, b in zip(curvs, curvs[1:]))
        assert curvs[-1] > 10.0

    def test_radial_slope_single_sign_change(self, rheo2):
        # y dz/dy with y = x^2 changes sign at most once along the profile
        for g in (0.05, 0.13, 0.2):
            out = integrate_to_event(R, g, rheo2, delta=1e-5, x_max=8.0,
                                     keep_trace=True)
            signs = np.sign(out.trace.dz[1:])
            changes = np.sum(signs[:-1] * signs[1:] < 0)
            assert changes <= 1

    def test_representation_formulas(self, rheo2):
        # z'' = -1 + g I1, z' = -x + g I2, z = 1 - x^2/2 + g I3 at the event.
        # Cauchy's repeated-integral formula turns the nested integrals into
        # single weighted quadratures; the grid is geometric in the distance
        # to the event, where the integrand peaks like z^-(1+a)
        g, a = 0.2, rheo2.a
        out = integrate_to_event(P, g, rheo2, delta=1e-6, keep_trace=True)
        tr = out.trace
        y = out.y
        x0 = tr.x[0]
        s = np.geomspace(1e-16, y - x0, 200001)
        f = (y - s) ** a / tr.eval_z(y - s) ** (1 + a)
        # analytic [0, x0] head (z = 1 there to the series accuracy)
        h1 = x0 ** (1 + a) / (1 + a)
        h2 = y * h1 - x0 ** (2 + a) / (2 + a)
        h3 = 0.5 * y ** 2 * h1 - y * x0 ** (2 + a) / (2 + a) \
            + 0.5 * x0 ** (3 + a) / (3 + a)
        i1 = simpson(f, x=s) + h1
        i2 = simpson(s * f, x=s) + h2
        i3 = simpson(0.5 * s ** 2 * f, x=s) + h3
        assert out.state.curv == pytest.approx(-1 + g * i1, rel=1e-6)
        assert out.state.dz == pytest.approx(-y + g * i2, rel=1e-6)
        # the z identity cancels O(1) terms down to the 1e-6 level, so it is
        # bounded by the absolute quadrature resolution of I3, not 1e-6 rel
        assert out.state.z == pytest.approx(1 - y ** 2 / 2 + g * i3, abs=2e-8)

    def test_bound_exceeded(self, rheo2):
        out = integrate_to_event(P, -0.5, rheo2, delta=1e-12, x_max=1.0)
        assert out.kind is OutcomeKind.BOUND_EXCEEDED
        assert out.x_stop == pytest.approx(1.0)

    def test_parameter_validation(self, rheo2):
        with pytest.raises(DomainError):
            integrate_to_event(P, 0.0, rheo2, delta=1e-13)
        with pytest.raises(DomainError):
            integrate_to_event(P, 0.0, rheo2, delta=1.5)
        with pytest.raises(DomainError):
            integrate_to_event(P, 0.0, rheo2, delta=1e-6, tol=0.0)

    def test_a_ge_one_integrates(self):
        # lambda <= 1 is integrable (nonexistence demos); expansion refused
        r = make_rheology(0.5)
        out = integrate_to_event(P, 1.0, r, delta=1e-6)
        assert out.kind in (OutcomeKind.MINIMUM_TURN, OutcomeKind.SINGULAR_STALL)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(min_value=-1.0, max_value=1.5),
           st.floats(min_value=1.2, max_value=4.0))
    def test_dichotomy_and_comparison_property(self, gamma, lam):
        # every shot ends in exactly one event, and the profile sits on the
        # gamma-side of the explicit parabola throughout
        r = make_rheology(lam)
        out = integrate_to_event(P, gamma, r, delta=1e-5, keep_trace=True)
        assert out.kind in (OutcomeKind.INTERFACE_HIT, OutcomeKind.MINIMUM_TURN,
                            OutcomeKind.BOUND_EXCEEDED)
        if gamma != 0.0:
            tr = out.trace
            gap = np.sign(gamma) * (tr.z[1:] - (1 - tr.x[1:] ** 2 / 2))
            assert np.all(gap > -1e-13)


class TestExpansions:
    def test_finite_angle_gamma_zero_is_linear(self, rheo2):
        exp = expand_finite_angle(math.sqrt(2), 1.0, 0.0, rheo2)
        s = np.array([1e-3, 1e-2, 1e-1])
        x = exp.y - s
        assert exp(x) == pytest.approx(math.sqrt(2) * s, rel=1e-14)
        assert exp.slope_limit == pytest.approx(-math.sqrt(2.0))

    def test_finite_angle_coefficient(self, rheo2):
        # B = gamma y^a / (2^((1+a)/2) theta^(1+a) a(1-a)(2-a)) at
        # lambda=2, theta=1, y=sqrt(2), gamma=1: 2^(-1/2)/0.375
        exp = expand_finite_angle(math.sqrt(2), 1.0, 1.0, rheo2)
        assert exp.coefficient == pytest.approx(2 ** -0.5 / 0.375, rel=1e-13)
        assert exp.coefficient == pytest.approx(1.8856180831641267, rel=1e-12)

    def test_finite_angle_residual_cancellation(self, rheo2):
        # two-term expansion must annihilate the leading ODE residual:
        # z^(1+a) z''' / (gamma x^a) -> 1 as x -> y-
        a, g, y, th = rheo2.a, 1.0, math.sqrt(2), 1.0
        exp = expand_finite_angle(y, th, g, rheo2)
        b = exp.coefficient
        errs = []
        ks = range(10, 43, 8)
        for k in ks:
            s = 2.0 ** -k
            z = math.sqrt(2) * th * s + b * s ** (2 - a)
            z3 = a * (1 - a) * (2 - a) * b * s ** (-1 - a)
            errs.append(abs(z ** (1 + a) * z3 / (g * (y - s) ** a) - 1.0))
        assert errs[-1] < 1e-5
        assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
        # residual decays at the expected order (1 - a) in the distance
        order = (np.log(errs[0]) - np.log(errs[-1])) / ((ks[-1] - ks[0]) * math.log(2))
        assert order == pytest.approx(1 - a, abs=0.05)

    def test_finite_angle_regime_errors(self):
        r_bad = make_rheology(0.8)  # a = 1.25
        with pytest.raises(UnsupportedRegimeError):
            expand_finite_angle(1.0, 0.5, 1.0, r_bad)
        # gamma <= 0 stays representable for a >= 1 (the (1-a) factor flips
        # the coefficient sign back to positive)
        exp = expand_finite_angle(1.0, 0.5, -1.0, r_bad)
        assert math.isfinite(exp.coefficient) and exp.coefficient > 0

    def test_zero_angle_exponent_is_front_exponent(self, rheo2):
        exp = expand_zero_angle(2.0, 1.0, rheo2)
        assert exp.exponent == pytest.approx(rheo2.p_front, rel=1e-15)
        assert exp.exponent == pytest.approx(1.2, rel=1e-15)

    def test_zero_angle_coefficient(self, rheo2):
        # C = [gamma y^a (2+a)^3 / (3(1-a)(1+2a))]^(1/(2+a)), lambda=2, y=2
        exp = expand_zero_angle(2.0, 1.0, rheo2)
        expect = (math.sqrt(2) * 2.5 ** 3 / 3.0) ** 0.4
        assert exp.coefficient == pytest.approx(expect, rel=1e-13)
        assert exp.coefficient == pytest.approx(2.2226, abs=2e-4)

    def test_zero_angle_residual_limit(self, rheo2):
        # with the dominant-balance C the residual ratio tends to 1 along a
        # geometric sequence of distances
        a, g, y = rheo2.a, 1.0, 2.0
        exp = expand_zero_angle(y, g, rheo2)
        c, p = exp.coefficient, exp.exponent
        last = None
        for k in range(10, 40, 6):
            s = 2.0 ** -k
            z = c * s ** p
            z3 = c * p * (p - 1) * (2 - p) * s ** (p - 3)
            last = z ** (1 + a) * z3 / (g * (y - s) ** a)
        assert last == pytest.approx(1.0, rel=1e-8)

    def test_zero_angle_regime_errors(self, rheo2):
        with pytest.raises(UnsupportedRegimeError):
            expand_zero_angle(1.0, -1.0, rheo2)
        with pytest.raises(UnsupportedRegimeError):
            expand_zero_angle(1.0, 1.0, make_rheology(1.0))
        with pytest.raises(DomainError):
            expand_zero_angle(-2.0, 1.0, rheo2)
