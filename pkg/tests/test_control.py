"""Hand-computed examples and properties for the control laws."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brachiation_lab.control import (
    BASELINE_KD,
    BASELINE_KP,
    ControllerGains,
    ControllerState,
    adaptation_rates,
    adaptive_robust_control,
    boundary_layer_trajectory,
    feedback_linearization_control,
    lyapunov_value,
    robust_term,
    sat,
    sliding_variable,
)
from brachiation_lab.dynamics import (
    RobotParams,
    RobotState,
    SpringDamperParams,
    affine_terms,
    forward_dynamics,
    output,
    output_rate,
    param_vector,
    spring_damper_force,
)
from brachiation_lab.trajectory import OutputTarget

PAR = RobotParams()
GAINS = ControllerGains()

finite = st.floats(allow_nan=False, allow_infinity=False, width=32)


class TestGains:
    def test_defaults(self):
        assert GAINS.lam == 8.0
        assert GAINS.gamma == (100.0, 10.0, 100.0)
        assert GAINS.phi == 0.4
        assert GAINS.k_d0 == 0.5
        assert GAINS.torque_limit == 10.0

    @pytest.mark.parametrize(
        "kw",
        [
            dict(lam=0.0),
            dict(gamma=(100.0, -1.0, 100.0)),
            dict(phi=0.0),
            dict(k_d0=0.0),
            dict(k_d0=1.0),
            dict(torque_limit=0.0),
        ],
    )
    def test_invalid_rejected(self, kw):
        with pytest.raises(ValueError):
            ControllerGains(**kw)

    def test_state_validates(self):
        with pytest.raises(ValueError):
            ControllerState(p_hat=np.array([1.0, np.inf, 0.0]), k_d=0.5)


class TestScalarOps:
    def test_sliding_variable_hand_values(self):
        assert sliding_variable(0.0, 0.0, 8.0) == 0.0
        assert sliding_variable(0.1, -0.8, 8.0) == pytest.approx(0.0)
        assert sliding_variable(0.05, 0.2, 8.0) == pytest.approx(0.6)

    def test_sat_hand_values(self):
        assert sat(0.5) == 0.5
        assert sat(2.0) == 1.0
        assert sat(-3.0) == -1.0

    @given(finite)
    def test_sat_range(self, x):
        assert -1.0 <= sat(x) <= 1.0
        if abs(x) <= 1.0:
            assert sat(x) == x

    def test_boundary_layer_hand_values(self):
        assert boundary_layer_trajectory(0.2, 0.4) == 0.0
        assert boundary_layer_trajectory(0.6, 0.4) == pytest.approx(0.2)
        assert boundary_layer_trajectory(-1.0, 0.4) == pytest.approx(-0.6)

    @given(st.floats(-50, 50), st.floats(0.01, 5))
    @settings(max_examples=300)
    def test_boundary_layer_distance_property(self, s, phi):
        s_d = boundary_layer_trajectory(s, phi)
        assert abs(s_d) == pytest.approx(max(0.0, abs(s) - phi), abs=1e-12)
        if s_d != 0.0:
            assert math.copysign(1.0, s_d) == math.copysign(1.0, s)

    def test_robust_term_hand_values(self):
        assert robust_term(0.0, 0.4, 0.5) == 0.0
        assert robust_term(0.2, 0.4, 0.5) == pytest.approx(0.25)
        assert robust_term(10.0, 0.4, 0.5) == 0.5

    def test_adaptation_rates_hand_values(self):
        gains = ControllerGains()
        p_rate, k_rate = adaptation_rates(0.0, np.array([1.0, 2.0, 3.0]), gains)
        assert not p_rate.any() and k_rate == 0.0
        p_rate, k_rate = adaptation_rates(0.2, np.array([1.0, 2.0, 3.0]), gains)
        np.testing.assert_allclose(p_rate, [-20.0, -4.0, -60.0])
        assert k_rate == pytest.approx(0.1)
        p_rate, k_rate = adaptation_rates(-0.2, np.array([1.0, 2.0, 3.0]), gains)
        np.testing.assert_allclose(p_rate, [20.0, 4.0, 60.0])
        assert k_rate == pytest.approx(0.1)  # k_d grows on both sides of the layer

    @given(st.floats(-2, 2), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
    @settings(max_examples=200)
    def test_k_d_rate_never_negative(self, s_delta, h1, h2, h3):
        _, k_rate = adaptation_rates(s_delta, np.array([h1, h2, h3]), GAINS)
        assert k_rate >= 0.0


def on_trajectory_state():
    """A state lying exactly on a mid-swing target, for the zero-error cases."""
    st_ = RobotState([math.radians(-20), math.radians(-40), 1.82], [1.5, 2.0, -0.1])
    target = OutputTarget(
        y_d=output(st_.q), yd_dot=output_rate(st_), yd_ddot=3.0
    )
    return st_, target


class TestAdaptiveRobust:
    def test_zero_error_reduces_to_inversion(self):
        st_, target = on_trajectory_state()
        cstate = ControllerState(p_hat=np.array([400.0, 12.0, 640.0]), k_d=0.5)
        u, diag = adaptive_robust_control(st_, target, cstate, GAINS, PAR)
        at = affine_terms(st_, PAR)
        expected = (target.yd_ddot - at.g_term - float(at.h_row @ cstate.p_hat)) / at.alpha
        assert diag.s == pytest.approx(0.0, abs=1e-12)
        assert diag.v == pytest.approx(0.0, abs=1e-12)
        assert u == pytest.approx(expected, rel=1e-12)

    def test_closed_loop_substitution_identity(self):
        # exact model, no disturbance, on-trajectory start: ydd == yd_ddot
        st_, target = on_trajectory_state()
        sd = SpringDamperParams(680.0, 20.0, 1.9)
        cstate = ControllerState(p_hat=param_vector(sd), k_d=0.5)
        u, _ = adaptive_robust_control(st_, target, cstate, GAINS, PAR)
        F_c = spring_damper_force(st_.z_g, st_.zdot_g, sd)
        qdd = forward_dynamics(st_, u, F_c, PAR)
        assert qdd[0] + 0.5 * qdd[1] == pytest.approx(target.yd_ddot, abs=1e-8)

    def test_torque_clipping(self):
        st_, _ = on_trajectory_state()
        target = OutputTarget(y_d=2.0, yd_dot=0.0, yd_ddot=400.0)
        cstate = ControllerState(p_hat=np.array([400.0, 12.0, 640.0]), k_d=0.5)
        u, diag = adaptive_robust_control(st_, target, cstate, GAINS, PAR)
        assert abs(u) == 10.0
        assert abs(diag.u_raw) > 10.0

    def test_random_inputs_respect_limit(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            st_ = RobotState(
                rng.uniform([-2.5, -2.5, 0.5], [2.5, 2.5, 3.0]), rng.uniform(-4, 4, 3)
            )
            target = OutputTarget(*rng.uniform(-6, 6, 3))
            cstate = ControllerState(p_hat=rng.uniform(0, 900, 3), k_d=0.5)
            u, _ = adaptive_robust_control(st_, target, cstate, GAINS, PAR)
            assert abs(u) <= 10.0


class TestBaseline:
    def test_zero_error_reduces_to_inversion(self):
        st_, target = on_trajectory_state()
        p_assumed = param_vector(SpringDamperParams(400.0, 12.0, 1.6))
        u, diag = feedback_linearization_control(st_, target, p_assumed, PAR)
        at = affine_terms(st_, PAR)
        expected = (target.yd_ddot - at.g_term - float(at.h_row @ p_assumed)) / at.alpha
        assert u == pytest.approx(expected, rel=1e-12)
        assert diag.e == pytest.approx(0.0, abs=1e-12)

    def test_pd_contribution_hand_value(self):
        st_, base = on_trajectory_state()
        assert (BASELINE_KP, BASELINE_KD) == (20.0, 5.0)
        target = OutputTarget(base.y_d + 0.1, base.yd_dot - 0.2, base.yd_ddot)
        p_assumed = param_vector(SpringDamperParams(400.0, 12.0, 1.6))
        u_off, _ = feedback_linearization_control(st_, target, p_assumed, PAR)
        u_on, _ = feedback_linearization_control(st_, base, p_assumed, PAR)
        at = affine_terms(st_, PAR)
        # PD contribution: 20*0.1 + 5*(-0.2) = 1.0 rad/s^2 through the inversion
        assert (u_off - u_on) * at.alpha == pytest.approx(1.0, rel=1e-9)

    def test_clipping(self):
        st_, _ = on_trajectory_state()
        target = OutputTarget(y_d=3.0, yd_dot=0.0, yd_ddot=500.0)
        p_assumed = param_vector(SpringDamperParams(400.0, 12.0, 1.6))
        u, diag = feedback_linearization_control(st_, target, p_assumed, PAR)
        assert abs(u) == 10.0 and abs(diag.u_raw) > 10.0


class TestLyapunov:
    def test_hand_values(self):
        assert lyapunov_value(0.0, np.zeros(3), 0.0, GAINS.gamma) == 0.0
        v = lyapunov_value(0.2, np.array([10.0, 1.0, 10.0]), 0.1, GAINS.gamma)
        assert v == pytest.approx(1.075)

    @given(
        st.floats(-3, 3),
        st.floats(-50, 50),
        st.floats(-50, 50),
        st.floats(-50, 50),
        st.floats(-2, 2),
    )
    @settings(max_examples=200)
    def test_nonnegative(self, s_d, p1, p2, p3, k):
        assert lyapunov_value(s_d, np.array([p1, p2, p3]), k, GAINS.gamma) >= 0.0
