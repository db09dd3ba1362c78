"""Self-checks runnable from the CLI: dynamics oracle, affine split, energy.

These rebuild the manipulator quantities from body positions and energies only
(complex-step Jacobians, finite-difference Hessians), so they share no code
path with the closed forms in :mod:`dynamics`.  The CLI `validate` subcommand
runs every suite and reports pass/fail; the test suite applies the same checks
with its own independently written oracle.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .control import ControllerGains
from .dynamics import (
    RobotParams,
    RobotState,
    SpringDamperParams,
    affine_terms,
    forward_dynamics,
    param_vector,
    spring_damper_force,
    total_energy,
)
from .engine import Scenario, run_swing
from .episode import compute_metrics
from .trajectory import quintic_profile

_CS = 1e-30
_EPS = 1e-6
_EPS_V = 1e-3


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


def _bodies(q, params: RobotParams):
    th1, th2, z = q[0], q[1], q[2]
    s1, c1 = np.sin(th1), np.cos(th1)
    s12, c12 = np.sin(th1 + th2), np.cos(th1 + th2)
    com1 = np.array([params.d1 * s1, z - params.d1 * c1])
    joint = np.array([params.l1 * s1, z - params.l1 * c1])
    com2 = joint + params.d2 * np.array([s12, -c12])
    return [(params.m1, com1), (params.m0, joint), (params.m2, com2)]


def _kinetic(q, qdot, params: RobotParams) -> float:
    qdot = np.asarray(qdot, float)
    T = 0.0
    for i_body in range(3):
        J = np.empty((2, 3))
        for i in range(3):
            qc = np.asarray(q, float).astype(complex)
            qc[i] += 1j * _CS
            J[:, i] = np.imag(_bodies(qc, params)[i_body][1]) / _CS
        m = _bodies(np.asarray(q, float), params)[i_body][0]
        v = J @ qdot
        T += 0.5 * m * float(v @ v)
    T += 0.5 * params.I1 * qdot[0] ** 2 + 0.5 * params.I2 * (qdot[0] + qdot[1]) ** 2
    return T


def _qdd_reference(q, qdot, tau, params: RobotParams) -> np.ndarray:
    """Accelerations from energies alone (Hessian mass matrix + EL residual)."""
    q = np.asarray(q, float)
    qdot = np.asarray(qdot, float)
    eye = np.eye(3)
    M = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            pp = _kinetic(q, qdot + _EPS_V * (eye[i] + eye[j]), params)
            pm = _kinetic(q, qdot + _EPS_V * (eye[i] - eye[j]), params)
            mp = _kinetic(q, qdot - _EPS_V * (eye[i] - eye[j]), params)
            mm = _kinetic(q, qdot - _EPS_V * (eye[i] + eye[j]), params)
            M[i, j] = M[j, i] = (pp - pm - mp + mm) / (4.0 * _EPS_V**2)

    def dT_dqd(qq):
        out = np.zeros(3)
        for i_body in range(3):
            J = np.empty((2, 3))
            for i in range(3):
                qc = qq.astype(complex)
                qc[i] += 1j * _CS
                J[:, i] = np.imag(_bodies(qc, params)[i_body][1]) / _CS
            m = _bodies(qq, params)[i_body][0]
            out += m * (J.T @ (J @ qdot))
        out[0] += params.I1 * qdot[0] + params.I2 * (qdot[0] + qdot[1])
        out[1] += params.I2 * (qdot[0] + qdot[1])
        return out

    coriolis = (dT_dqd(q + _EPS * qdot) - dT_dqd(q - _EPS * qdot)) / (2.0 * _EPS)
    for i in range(3):
        dq = np.zeros(3)
        dq[i] = _EPS
        coriolis[i] -= (
            _kinetic(q + dq, qdot, params) - _kinetic(q - dq, qdot, params)
        ) / (2.0 * _EPS)
    grav = np.empty(3)
    for i in range(3):
        qc = q.astype(complex)
        qc[i] += 1j * _CS
        V = params.gravity * sum(m * p[1] for m, p in _bodies(qc, params))
        grav[i] = np.imag(V) / _CS
    return np.linalg.solve(M, np.asarray(tau, float) - coriolis - grav)


def _random_states(rng, n):
    for _ in range(n):
        q = np.array(
            [
                rng.uniform(-2.0, 2.0),
                rng.uniform(-2.8, 2.8),
                rng.uniform(1.2, 2.4),
            ]
        )
        qd = rng.uniform(-4.0, 4.0, 3)
        yield q, qd


def dynamics_oracle_suite(n: int = 1000, seed: int = 0, rtol: float = 1e-6) -> SuiteResult:
    """Closed-form accelerations vs the energy-only reconstruction."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    params = RobotParams()
    worst = 0.0
    for q, qd in _random_states(rng, n):
        u, F_c = rng.uniform(-10, 10), rng.uniform(-60, 60)
        got = forward_dynamics(RobotState(q, qd), u, F_c, params)
        want = _qdd_reference(q, qd, np.array([0.0, u, F_c]), params)
        rel = np.max(np.abs(got - want)) / max(1.0, np.max(np.abs(want)))
        worst = max(worst, rel)
    elapsed = time.perf_counter() - t0
    return SuiteResult(
        "dynamics-oracle",
        worst < rtol and elapsed < 10.0,
        f"max rel err {worst:.2e} over {n} states in {elapsed:.1f} s",
        elapsed,
    )


def affine_suite(n: int = 1000, seed: int = 1, rtol: float = 1e-8) -> SuiteResult:
    """y-acceleration split g + h.p + beta F_d + alpha u vs forward dynamics."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    params = RobotParams()
    worst = 0.0
    for q, qd in _random_states(rng, n):
        state = RobotState(q, qd)
        sd = SpringDamperParams(
            rng.uniform(100, 900), rng.uniform(1, 40), rng.uniform(1.3, 2.2)
        )
        F_d = rng.uniform(-20, 20)
        u = rng.uniform(-10, 10)
        terms = affine_terms(state, params)
        ydd_affine = (
            terms.g_term
            + float(terms.h_row @ param_vector(sd))
            + terms.beta * F_d
            + terms.alpha * u
        )
        F_c = spring_damper_force(q[2], qd[2], sd) + F_d
        qdd = forward_dynamics(state, u, F_c, params)
        ydd_direct = qdd[0] + 0.5 * qdd[1]
        rel = abs(ydd_affine - ydd_direct) / max(1.0, abs(ydd_direct))
        worst = max(worst, rel)
    return SuiteResult(
        "affine-equivalence",
        worst < rtol,
        f"max rel err {worst:.2e} over {n} tuples",
        time.perf_counter() - t0,
    )


def energy_suite(horizon: float = 1.0) -> SuiteResult:
    """Undamped conservation over the horizon; damped decrement matches the b_s integral."""
    t0 = time.perf_counter()
    params = RobotParams()
    dt = 1e-5
    n = round(horizon / dt)

    def rollout(sd: SpringDamperParams):
        x = np.array([0.5, -1.1, 1.88, 0.0, 0.0, 0.0])
        damp_integral = 0.0
        energies = []

        def deriv(xv):
            st = RobotState(xv[:3], xv[3:])
            F_c = spring_damper_force(xv[2], xv[5], sd)
            qdd = forward_dynamics(st, 0.0, F_c, params)
            return np.concatenate([xv[3:], qdd])

        for _ in range(n):
            energies.append(
                total_energy(RobotState(x[:3], x[3:]), params)
                + 0.5 * sd.k_s * (x[2] - sd.z_s) ** 2
            )
            k1 = deriv(x)
            k2 = deriv(x + 0.5 * dt * k1)
            k3 = deriv(x + 0.5 * dt * k2)
            k4 = deriv(x + dt * k3)
            damp_integral += dt * sd.b_s * x[5] ** 2
            x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        energies.append(
            total_energy(RobotState(x[:3], x[3:]), params)
            + 0.5 * sd.k_s * (x[2] - sd.z_s) ** 2
        )
        return np.array(energies), damp_integral

    cons, _ = rollout(SpringDamperParams(680.0, 0.0, 1.9))
    drift = np.max(np.abs(cons - cons[0])) / abs(cons[0])

    damped, integral = rollout(SpringDamperParams(680.0, 20.0, 1.9))
    decrement = damped[0] - damped[-1]
    mismatch = abs(decrement - integral) / max(1.0, abs(decrement))

    ok = drift < 1e-6 and mismatch < 1e-4
    return SuiteResult(
        "energy",
        ok,
        f"undamped drift {drift:.2e}, damped decrement mismatch {mismatch:.2e}",
        time.perf_counter() - t0,
    )


def exact_model_suite() -> SuiteResult:
    """Perfect parameter knowledge on-trajectory tracks to a fraction of a degree."""
    t0 = time.perf_counter()
    truth = SpringDamperParams(680.0, 20.0, 1.9)
    z_eq = truth.z_s - 4.0 * 9.81 / truth.k_s
    traj = quintic_profile(-48.0 * math.pi / 180.0, 98.0 * math.pi / 180.0, 1.1)
    y0 = traj.sample(0.0).y_d
    sc = Scenario(
        plant="spring-damper",
        true_spring=truth,
        initial_guess=truth,
        trajectory=traj,
        # y = th1 + th2/2, so this split starts exactly on-trajectory
        initial_state=RobotState([y0 / 2.0, y0, z_eq], np.zeros(3)),
    )
    log = run_swing(sc)
    m = compute_metrics(log, success=True)
    return SuiteResult(
        "exact-model",
        m.rmse_y < 0.5,
        f"rmse_y {m.rmse_y:.3f} deg (< 0.5 required)",
        time.perf_counter() - t0,
    )


def gain_invariants_suite() -> SuiteResult:
    """Constructor-level invariants on the published tuning."""
    t0 = time.perf_counter()
    msgs = []
    g = ControllerGains()
    if not (0.0 < g.k_d0 < 1.0):
        msgs.append("k_d0 outside (0, 1)")
    for bad in (dict(lam=-1.0), dict(phi=0.0), dict(k_d0=1.0), dict(torque_limit=0.0)):
        try:
            ControllerGains(**bad)
        except ValueError:
            pass
        else:
            msgs.append(f"accepted invalid gains {bad}")
    return SuiteResult(
        "gain-invariants",
        not msgs,
        "; ".join(msgs) or "constructor rejects out-of-range gains",
        time.perf_counter() - t0,
    )


ALL_SUITES = (
    dynamics_oracle_suite,
    affine_suite,
    energy_suite,
    exact_model_suite,
    gain_invariants_suite,
)


def run_all(fast: bool = False):
    results = []
    for suite in ALL_SUITES:
        if fast and suite is dynamics_oracle_suite:
            results.append(suite(n=100))
        elif fast and suite is affine_suite:
            results.append(suite(n=100))
        elif fast and suite is energy_suite:
            results.append(suite(horizon=0.1))
        else:
            results.append(suite())
    return results
