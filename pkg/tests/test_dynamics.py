"""Fixed-step integrators cross-checked against an adaptive oracle."""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from heun_rsj.dynamics import (
    bias,
    integrate_phase,
    integrate_xy,
    phase_from_xy,
)
from heun_rsj.errors import InvalidParams, NonFiniteState, OriginUndefined
from heun_rsj.model import RsjParams, Trajectory

P = RsjParams(A=1.3, B=0.4, omega=1.1)


def _wrap(x):
    return (np.asarray(x) + np.pi) % (2.0 * np.pi) - np.pi


def _reference_phase(p, phi0, t_end):
    sol = solve_ivp(
        lambda t, y: [p.B + p.A * math.cos(p.omega * t) - math.sin(y[0])],
        (0.0, t_end),
        [phi0],
        rtol=1e-12,
        atol=1e-13,
        dense_output=True,
    )
    assert sol.success
    return sol


def _reference_xy(p, x0, y0, t_end):
    def rhs(t, s):
        q = p.B + p.A * math.cos(p.omega * t)
        return [0.5 * (s[0] + q * s[1]), -0.5 * (q * s[0] + s[1])]

    sol = solve_ivp(rhs, (0.0, t_end), [x0, y0], rtol=1e-12, atol=1e-13)
    assert sol.success
    return sol


class TestBias:
    def test_scalar(self):
        p = RsjParams(A=2.0, B=0.5, omega=3.0)
        assert bias(p, 0.0) == 2.5
        assert bias(p, math.pi / 3.0) == pytest.approx(
            0.5 + 2.0 * math.cos(math.pi), rel=1e-15
        )

    def test_array(self):
        t = np.linspace(0.0, 4.0, 7)
        np.testing.assert_allclose(
            bias(P, t), P.B + P.A * np.cos(P.omega * t), rtol=1e-15
        )


class TestGrid:
    def test_endpoint_hit_exactly(self):
        traj = integrate_phase(P, 0.0, 3.7, h=0.5)
        assert traj.times[-1] == 3.7
        assert np.all(np.diff(traj.times) <= 0.5 + 1e-12)

    def test_default_step_count(self):
        traj = integrate_phase(P, 0.0, P.period)
        assert len(traj) == 2001

    @pytest.mark.parametrize("t_end", [0.0, -1.0, math.nan])
    def test_rejects_bad_t_end(self, t_end):
        with pytest.raises(InvalidParams):
            integrate_phase(P, 0.0, t_end)

    @pytest.mark.parametrize("h", [0.0, -0.1, math.inf])
    def test_rejects_bad_step(self, h):
        with pytest.raises(InvalidParams):
            integrate_xy(P, 1.0, 0.0, 1.0, h)


class TestAgainstAdaptiveOracle:
    def test_phase_endpoint(self):
        t_end = 2.0 * P.period
        ref = _reference_phase(P, 0.2, t_end)
        traj = integrate_phase(P, 0.2, t_end)
        assert traj.values[-1, 0] == pytest.approx(
            ref.y[0][-1], abs=1e-8
        )

    def test_xy_endpoint(self):
        t_end = 2.0 * P.period
        ref = _reference_xy(P, 0.8, -0.6, t_end)
        traj = integrate_xy(P, 0.8, -0.6, t_end)
        np.testing.assert_allclose(traj.values[-1], ref.y[:, -1], atol=1e-9)

    @pytest.mark.parametrize("route", ["phase", "xy"])
    def test_fourth_order_convergence(self, route):
        t_end = P.period
        if route == "phase":
            ref = _reference_phase(P, 0.3, t_end).y[0][-1]

            def run(h):
                return integrate_phase(P, 0.3, t_end, h).values[-1, 0]

        else:
            ref = _reference_xy(P, 1.0, 0.0, t_end).y[0][-1]

            def run(h):
                return integrate_xy(P, 1.0, 0.0, t_end, h).values[-1, 0]

        h0 = t_end / 40.0
        errs = [abs(run(h0 / 2**k) - ref) for k in range(3)]
        orders = [math.log2(errs[k] / errs[k + 1]) for k in range(2)]
        for order in orders:
            assert 3.7 <= order <= 4.3, f"observed order {orders}"


class TestCompanionStructure:
    def test_linearity_in_initial_condition(self):
        # The system is linear and RK4 is a linear map per step, so an
        # integrated sum equals the sum of integrals up to reassociation.
        t_end = 1.5 * P.period
        a = integrate_xy(P, 1.0, 0.25, t_end)
        b = integrate_xy(P, -2.0, 0.5, t_end)
        summed = integrate_xy(P, 1.0 + (-2.0), 0.25 + 0.5, t_end)
        np.testing.assert_allclose(
            summed.values, a.values + b.values, rtol=0.0, atol=1e-12
        )

    def test_wronskian_of_two_solutions_is_constant(self):
        # The companion system is traceless, so the Wronskian
        # x1*y2 - y1*x2 of two solutions is exactly conserved.  Individual
        # solutions grow exponentially, so the float noise floor scales
        # with the product of their magnitudes.
        t_end = 4.0 * P.period
        s1 = integrate_xy(P, 1.0, 0.0, t_end)
        s2 = integrate_xy(P, 0.0, 1.0, t_end)
        w = s1.values[:, 0] * s2.values[:, 1] - s1.values[:, 1] * s2.values[:, 0]
        scale = float(np.max(np.abs(s1.values)) * np.max(np.abs(s2.values)))
        assert np.max(np.abs(w - 1.0)) <= 1e-11 * max(1.0, scale)

    def test_phase_routes_agree(self):
        t_end = 3.0 * P.period
        x0, y0 = math.cos(0.35), -math.sin(0.35)  # phi0 = 2*atan2(-y0, x0)
        phi0 = 2.0 * math.atan2(-y0, x0)
        direct = integrate_phase(P, phi0, t_end)
        companion = phase_from_xy(integrate_xy(P, x0, y0, t_end))
        dev = np.max(np.abs(_wrap(direct.values - companion.values)))
        assert dev <= 1e-6


class TestErrors:
    def test_phase_from_xy_needs_xy(self):
        traj = integrate_phase(P, 0.0, 1.0)
        with pytest.raises(InvalidParams):
            phase_from_xy(traj)

    def test_phase_from_xy_origin(self):
        traj = Trajectory(
            times=[0.0, 1.0], values=[[1.0, 0.0], [0.0, 0.0]], kind="xy"
        )
        with pytest.raises(OriginUndefined):
            phase_from_xy(traj)

    def test_unstable_step_detected(self):
        p = RsjParams(A=5.0, B=5.0, omega=1.0)
        with pytest.raises(NonFiniteState):
            integrate_xy(p, 1.0, 0.0, 4000.0, 50.0)
