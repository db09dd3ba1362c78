"""Closed-form dynamics vs the finite-difference Lagrangian oracle, plus hand examples."""
import math

import numpy as np
import pytest

from brachiation_lab.dynamics import (
    RobotParams,
    RobotState,
    SingularityError,
    SpringDamperParams,
    affine_terms,
    cable_surrogate_force,
    forward_dynamics,
    kinematics,
    manipulator_matrices,
    output,
    output_rate,
    param_vector,
    require_equal_arms,
    spring_damper_force,
    total_energy,
)

import oracles

PAR = RobotParams()


def random_state(rng):
    return RobotState(
        rng.uniform([-math.pi, -math.pi, 0.0], [math.pi, math.pi, 3.0]),
        rng.uniform(-3.0, 3.0, 3),
    )


class TestParams:
    def test_defaults_match_hardware_table(self):
        assert (PAR.m0, PAR.m1, PAR.m2) == (2.0, 1.0, 1.0)
        assert PAR.l1 == PAR.l2 == 0.71
        assert PAR.d1 == pytest.approx(2 * 0.71 / 3)
        assert PAR.d2 == pytest.approx(0.71 / 3)
        assert PAR.I1 == PAR.I2 == pytest.approx(0.71**2 / 12)
        assert PAR.gravity == 9.81

    @pytest.mark.parametrize(
        "kw",
        [
            dict(m1=-1.0),
            dict(l2=0.0),
            dict(d1=0.8),  # beyond link 1
            dict(d2=-0.1),
            dict(I1=-1e-9),
            dict(gravity=0.0),
        ],
    )
    def test_invalid_params_rejected(self, kw):
        with pytest.raises(ValueError):
            RobotParams(**kw)

    def test_equal_arms_guard(self):
        require_equal_arms(PAR)
        with pytest.raises(ValueError):
            require_equal_arms(RobotParams(l2=0.7, d2=0.7 / 3))

    def test_spring_params_rejected(self):
        with pytest.raises(ValueError):
            SpringDamperParams(k_s=0.0, b_s=1.0, z_s=1.9)
        with pytest.raises(ValueError):
            SpringDamperParams(k_s=100.0, b_s=-1.0, z_s=1.9)

    def test_param_vector_round_trip(self):
        sd = SpringDamperParams(k_s=680.0, b_s=20.0, z_s=1.9)
        assert list(param_vector(sd)) == [680.0, 20.0, 680.0 * 1.9]


class TestKinematics:
    def test_straight_down(self):
        pts = kinematics([0.0, 0.0, 1.84], PAR)
        np.testing.assert_allclose(pts.pivot, [0.0, 1.84])
        np.testing.assert_allclose(pts.tip, [0.0, 1.84 - 2 * 0.71], atol=1e-15)

    def test_horizontal_arm(self):
        pts = kinematics([math.pi / 2, 0.0, 1.84], PAR)
        np.testing.assert_allclose(pts.joint1, [0.71, 1.84], atol=1e-15)

    def test_swing_start_configuration(self):
        # frozen from direct trig evaluation of the chain at (-48 deg, -98 deg, 1.84)
        pts = kinematics([math.radians(-48), math.radians(-98), 1.84], PAR)
        np.testing.assert_allclose(pts.joint1, [-0.5276328, 1.3649173], atol=5e-7)
        np.testing.assert_allclose(pts.tip, [-0.9246598, 1.9535339], atol=5e-7)

    def test_com_points_fractional(self):
        q = [0.4, -1.1, 2.0]
        pts = kinematics(q, PAR)
        np.testing.assert_allclose(
            pts.com1, pts.pivot + (PAR.d1 / PAR.l1) * (pts.joint1 - pts.pivot)
        )
        np.testing.assert_allclose(
            pts.com2, pts.joint1 + (PAR.d2 / PAR.l2) * (pts.tip - pts.joint1)
        )

    def test_oracle_uses_same_geometry(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            q = rng.uniform([-3, -3, 0], [3, 3, 3])
            pts = kinematics(q, PAR)
            (m1, com1), (m0, joint), (m2, com2) = oracles.body_positions(q, PAR)
            assert (m1, m0, m2) == (PAR.m1, PAR.m0, PAR.m2)
            np.testing.assert_allclose(com1, pts.com1, atol=1e-14)
            np.testing.assert_allclose(joint, pts.joint1, atol=1e-14)
            np.testing.assert_allclose(com2, pts.com2, atol=1e-14)


class TestManipulatorForm:
    def test_mass_matrix_symmetric_positive_definite(self):
        rng = np.random.default_rng(11)
        for _ in range(10_000):
            st = RobotState(
                rng.uniform([-math.pi, -math.pi, 0.0], [math.pi, math.pi, 3.0]),
                np.zeros(3),
            )
            M = manipulator_matrices(st, PAR).M
            assert np.array_equal(M, M.T)
            assert np.linalg.eigvalsh(M)[0] > 0.0

    def test_vertical_row_mass_constant(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            st = random_state(rng)
            assert manipulator_matrices(st, PAR).M[2, 2] == PAR.total_mass == 4.0

    def test_matches_finite_difference_oracle(self):
        # independent oracle: KE Hessian -> M, PE gradient -> D, EL residual -> C qd
        rng = np.random.default_rng(13)
        for _ in range(1000):
            st = random_state(rng)
            mm = manipulator_matrices(st, PAR)
            M_o = oracles.mass_matrix(st.q, st.qdot, PAR)
            D_o = oracles.gravity_vector(st.q, PAR)
            C_o = oracles.coriolis_vector(st.q, st.qdot, PAR)
            np.testing.assert_allclose(mm.M, M_o, rtol=1e-6, atol=1e-6)
            np.testing.assert_allclose(mm.D, D_o, rtol=1e-6, atol=1e-6)
            np.testing.assert_allclose(mm.Cqdot, C_o, rtol=1e-6, atol=1e-6)

    def test_example_state_against_oracle(self):
        st = RobotState([0.3, -0.7, 1.8], [0.5, -1.0, 0.2])
        mm = manipulator_matrices(st, PAR)
        np.testing.assert_allclose(mm.M, oracles.mass_matrix(st.q, st.qdot, PAR), rtol=1e-6)
        np.testing.assert_allclose(mm.D, oracles.gravity_vector(st.q, PAR), rtol=1e-6)
        np.testing.assert_allclose(
            mm.Cqdot, oracles.coriolis_vector(st.q, st.qdot, PAR), rtol=1e-6, atol=1e-9
        )


class TestForces:
    def test_spring_damper_hand_values(self):
        sd = SpringDamperParams(k_s=680.0, b_s=20.0, z_s=1.9)
        assert spring_damper_force(1.9, 0.0, sd) == 0.0
        assert spring_damper_force(1.84, 0.0, sd) == pytest.approx(40.8)
        assert spring_damper_force(1.9, 0.5, sd) == pytest.approx(-10.0)

    def test_surrogate_force_is_sum(self):
        sd = SpringDamperParams(k_s=680.0, b_s=20.0, z_s=1.9)
        assert cable_surrogate_force(1.84, 0.0, sd, 0.0) == pytest.approx(40.8)
        assert cable_surrogate_force(1.9, 0.0, sd, 10.0) == pytest.approx(10.0)
        assert cable_surrogate_force(1.9, -0.25, sd, -5.0) == pytest.approx(0.0)


class TestForwardDynamics:
    def test_static_hang(self):
        st = RobotState([0.0, 0.0, 1.84], np.zeros(3))
        qdd = forward_dynamics(st, 0.0, 4.0 * 9.81, PAR)
        np.testing.assert_allclose(qdd, np.zeros(3), atol=1e-12)

    def test_free_fall_any_configuration(self):
        rng = np.random.default_rng(14)
        for _ in range(50):
            st = RobotState(rng.uniform([-3, -3, 0.5], [3, 3, 3]), np.zeros(3))
            qdd = forward_dynamics(st, 0.0, 0.0, PAR)
            np.testing.assert_allclose(qdd, [0.0, 0.0, -9.81], atol=1e-9)

    def test_matches_oracle_acceleration(self):
        rng = np.random.default_rng(15)
        for _ in range(100):
            st = random_state(rng)
            u = rng.uniform(-10, 10)
            F_c = rng.uniform(-50, 100)
            qdd = forward_dynamics(st, u, F_c, PAR)
            qdd_o = oracles.generalized_acceleration(st.q, st.qdot, [0.0, u, F_c], PAR)
            np.testing.assert_allclose(qdd, qdd_o, rtol=1e-6, atol=1e-6)


class TestOutputMap:
    def test_hand_values(self):
        assert output([math.radians(-48), math.radians(-98), 1.84]) == pytest.approx(
            math.radians(-97)
        )
        assert output([0.0, 0.0, 1.0]) == 0.0
        assert output([math.radians(46), math.radians(96), 1.84]) == pytest.approx(
            math.radians(94)
        )

    def test_rate(self):
        assert output_rate(RobotState([0, 0, 1], [0.0, 0.0, 5.0])) == 0.0
        assert output_rate(RobotState([0, 0, 1], [1.0, 2.0, 0.0])) == pytest.approx(2.0)
        assert output_rate(RobotState([0, 0, 1], [1.0, -2.0, 0.0])) == 0.0


class TestAffineTerms:
    def test_equivalent_to_forward_dynamics(self):
        rng = np.random.default_rng(16)
        for _ in range(1000):
            st = random_state(rng)
            sd = SpringDamperParams(
                rng.uniform(50, 900), rng.uniform(0, 40), rng.uniform(0.5, 2.5)
            )
            u = rng.uniform(-10, 10)
            F_d = rng.uniform(-15, 15)
            F_c = cable_surrogate_force(st.z_g, st.zdot_g, sd, F_d)
            qdd = forward_dynamics(st, u, F_c, PAR)
            ydd = qdd[0] + 0.5 * qdd[1]
            at = affine_terms(st, PAR)
            ydd_affine = (
                at.g_term + float(at.h_row @ param_vector(sd)) + at.beta * F_d + at.alpha * u
            )
            assert abs(ydd_affine - ydd) <= 1e-8 * max(1.0, abs(ydd))

    def test_drift_term_is_unforced_output_acceleration(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            st = random_state(rng)
            qdd = forward_dynamics(st, 0.0, 0.0, PAR)
            at = affine_terms(st, PAR)
            assert at.g_term == pytest.approx(qdd[0] + 0.5 * qdd[1], rel=1e-10, abs=1e-10)

    def test_affine_in_input(self):
        st = RobotState([0.5, -1.2, 1.7], [1.0, -2.0, 0.1])
        at = affine_terms(st, PAR)

        def ydd(u):
            qdd = forward_dynamics(st, u, 0.0, PAR)
            return qdd[0] + 0.5 * qdd[1]

        assert ydd(2.0) - ydd(0.0) == pytest.approx(2.0 * at.alpha, rel=1e-9)

    def test_h_row_structure(self):
        st = RobotState([0.2, -0.9, 1.6], [0.3, 0.7, -0.4])
        at = affine_terms(st, PAR)
        np.testing.assert_allclose(
            at.h_row, at.beta * np.array([-st.z_g, -st.zdot_g, 1.0]), rtol=1e-14
        )

    def test_depends_only_on_angles_and_rates(self):
        # alpha, beta, g_term come from the reduced 2x2 block: invariant to z_g, zdot_g
        a = affine_terms(RobotState([0.4, -1.0, 1.2], [1.0, -0.5, 0.8]), PAR)
        b = affine_terms(RobotState([0.4, -1.0, 2.6], [1.0, -0.5, -1.3]), PAR)
        assert a.alpha == pytest.approx(b.alpha, rel=1e-14)
        assert a.beta == pytest.approx(b.beta, rel=1e-14)
        assert a.g_term == pytest.approx(b.g_term, rel=1e-12)


def _rk4(deriv, x0, dt, n):
    x = np.asarray(x0, float)
    for _ in range(n):
        k1 = deriv(x)
        k2 = deriv(x + 0.5 * dt * k1)
        k3 = deriv(x + 0.5 * dt * k2)
        k4 = deriv(x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return x


class TestEnergy:
    def _spring_swing_deriv(self, sd, dissipation_state=False):
        def deriv(x):
            st = RobotState.from_flat(x)
            F_c = spring_damper_force(st.z_g, st.zdot_g, sd)
            qdd = forward_dynamics(st, 0.0, F_c, PAR)
            base = np.concatenate([st.qdot, qdd])
            if dissipation_state:
                return np.append(base, sd.b_s * st.zdot_g**2)
            return base

        return deriv

    def test_conservation_undamped(self):
        sd = SpringDamperParams(k_s=680.0, b_s=0.0, z_s=1.9)
        x0 = np.array([math.radians(-35), math.radians(-110), 1.84, 0.0, 0.0, 0.0])
        e0 = total_energy(RobotState.from_flat(x0), PAR, sd)
        x1 = _rk4(self._spring_swing_deriv(sd), x0, 1e-5, 100_000)
        e1 = total_energy(RobotState.from_flat(x1), PAR, sd)
        assert abs(e1 - e0) <= 1e-6 * abs(e0)

    def test_damped_decrement_matches_dissipation_integral(self):
        sd = SpringDamperParams(k_s=680.0, b_s=20.0, z_s=1.9)
        x0 = np.array([math.radians(-35), math.radians(-110), 1.84, 0.0, 0.0, 0.0, 0.0])
        e0 = total_energy(RobotState.from_flat(x0[:6]), PAR, sd)
        x1 = _rk4(self._spring_swing_deriv(sd, dissipation_state=True), x0, 1e-5, 100_000)
        e1 = total_energy(RobotState.from_flat(x1[:6]), PAR, sd)
        dissipated = x1[6]
        assert dissipated > 0.0
        assert abs((e0 - e1) - dissipated) <= 1e-4 * dissipated

    def test_reference_point_zero(self):
        st = RobotState([0.0, 0.0, 1.84], np.zeros(3))
        assert total_energy(st, PAR) - total_energy(st, PAR) == 0.0

    def test_kinetic_matches_oracle(self):
        rng = np.random.default_rng(18)
        for _ in range(50):
            st = random_state(rng)
            e = total_energy(st, PAR)
            e_o = oracles.kinetic_energy(st.q, st.qdot, PAR) + oracles.potential_energy(
                st.q, PAR
            )
            # oracle potential is offset-free too (same body heights), so totals agree
            assert e == pytest.approx(e_o, rel=1e-7, abs=1e-7)


class TestStateContainer:
    def test_flat_round_trip(self):
        st = RobotState([0.1, 0.2, 1.5], [0.3, -0.4, 0.5])
        np.testing.assert_array_equal(RobotState.from_flat(st.as_flat()).q, st.q)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            RobotState([0.0, math.nan, 1.0], np.zeros(3))

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            RobotState([0.0, 1.0], np.zeros(3))
