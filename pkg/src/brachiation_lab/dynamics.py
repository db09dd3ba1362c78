"""Closed-form rigid-body model of the two-link robot on a vertically compliant pivot.

Generalized coordinates q = [theta1, theta2, z_g]:

* theta1 — absolute angle of the pivot-side link, CCW from straight down
* theta2 — relative angle of the swing link about the powered center joint
* z_g    — height of the pivot gripper (the attachment point rides vertically)

The chain carries the center body m0 at the powered joint, link masses m1/m2 with
COM offsets d1/d2, and rod inertias I1/I2 about the COMs.  The manipulator-form
entries below were derived offline by the Euler-Lagrange equations and hard-coded;
the tests check them against finite-difference oracles built from the kinematics
alone before anything downstream trusts them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GRAVITY = 9.81


class SingularityError(RuntimeError):
    """Degenerate dynamics: singular inertia solve or vanishing input coefficient."""


@dataclass(frozen=True)
class RobotParams:
    """Masses, geometry and inertias.  Defaults are the hardware values."""

    m0: float = 2.0                  # center-joint body (actuator package), kg
    m1: float = 1.0                  # pivot-side link, kg
    m2: float = 1.0                  # swing-side link, kg
    l1: float = 0.71                 # link lengths, m
    l2: float = 0.71
    d1: float = 2.0 * 0.71 / 3.0     # COM of link 1, measured from the pivot gripper
    d2: float = 0.71 / 3.0           # COM of link 2, measured from the center joint
    I1: float = 1.0 * 0.71**2 / 12.0  # slender-rod inertia about the COM
    I2: float = 1.0 * 0.71**2 / 12.0
    gravity: float = GRAVITY

    def __post_init__(self):
        if min(self.m0, self.m1, self.m2, self.l1, self.l2) <= 0.0:
            raise ValueError("masses and link lengths must be strictly positive")
        if not (0.0 < self.d1 <= self.l1):
            raise ValueError("d1 must lie on link 1")
        if not (0.0 < self.d2 <= self.l2):
            raise ValueError("d2 must lie on link 2")
        if self.I1 < 0.0 or self.I2 < 0.0:
            raise ValueError("link inertias must be non-negative")
        if self.gravity <= 0.0:
            raise ValueError("gravity must be positive")

    @property
    def total_mass(self) -> float:
        return self.m0 + self.m1 + self.m2

    # Shorthand coefficients shared by every closed form in this module.
    @property
    def _a1(self) -> float:
        return self.I1 + self.m1 * self.d1**2 + (self.m0 + self.m2) * self.l1**2

    @property
    def _a2(self) -> float:
        return self.I2 + self.m2 * self.d2**2

    @property
    def _a3(self) -> float:
        return self.m2 * self.l1 * self.d2

    @property
    def _b1(self) -> float:
        return self.m1 * self.d1 + (self.m0 + self.m2) * self.l1

    @property
    def _b2(self) -> float:
        return self.m2 * self.d2


def require_equal_arms(params: RobotParams) -> None:
    """The scalar output y = theta1 + theta2/2 bisects the arms only when l1 == l2."""
    if params.l1 != params.l2:
        raise ValueError("output map requires equal arm lengths (l1 == l2)")


@dataclass(frozen=True)
class SpringDamperParams:
    """Surrogate for the cable at the attachment: F_s = k_s (z_s - z_g) - b_s zdot_g."""

    k_s: float
    b_s: float
    z_s: float

    def __post_init__(self):
        if self.k_s <= 0.0:
            raise ValueError("spring stiffness must be positive")
        if self.b_s < 0.0:
            raise ValueError("damping must be non-negative")


def param_vector(sd: SpringDamperParams) -> np.ndarray:
    """Uncertain parameter vector p = [k_s, b_s, k_s*z_s] used by the estimator."""
    return np.array([sd.k_s, sd.b_s, sd.k_s * sd.z_s])


@dataclass
class RobotState:
    """q = [theta1, theta2, z_g] and qdot; angles cumulative, never wrapped."""

    q: np.ndarray
    qdot: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        self.qdot = np.asarray(self.qdot, dtype=float)
        if self.q.shape != (3,) or self.qdot.shape != (3,):
            raise ValueError("q and qdot must be 3-vectors")
        if not (np.isfinite(self.q).all() and np.isfinite(self.qdot).all()):
            raise ValueError("state entries must be finite")

    @classmethod
    def from_flat(cls, x) -> "RobotState":
        x = np.asarray(x, dtype=float)
        return cls(x[:3].copy(), x[3:6].copy())

    def as_flat(self) -> np.ndarray:
        return np.concatenate([self.q, self.qdot])

    @property
    def z_g(self) -> float:
        return float(self.q[2])

    @property
    def zdot_g(self) -> float:
        return float(self.qdot[2])


@dataclass(frozen=True)
class LinkagePoints:
    """Planar positions (x, z) of the named chain points, pivot at x = 0."""

    pivot: np.ndarray
    com1: np.ndarray
    joint1: np.ndarray
    com2: np.ndarray
    tip: np.ndarray


@dataclass(frozen=True)
class ManipulatorMatrices:
    M: np.ndarray        # 3x3 inertia matrix, symmetric positive definite
    Cqdot: np.ndarray    # Coriolis/centripetal generalized forces C(q, qd) qd
    D: np.ndarray        # gravity forces


@dataclass(frozen=True)
class AffineTerms:
    """Output-channel dynamics ydd = g_term + h_row @ p + beta * F_d + alpha * u."""

    g_term: float
    h_row: np.ndarray
    beta: float
    alpha: float


def kinematics(q, params: RobotParams) -> LinkagePoints:
    """Chain points in the vertical plane for configuration q."""
    th1, th2, z = float(q[0]), float(q[1]), float(q[2])
    s1, c1 = math.sin(th1), math.cos(th1)
    s12, c12 = math.sin(th1 + th2), math.cos(th1 + th2)
    pivot = np.array([0.0, z])
    u1 = np.array([s1, -c1])
    u12 = np.array([s12, -c12])
    joint1 = pivot + params.l1 * u1
    return LinkagePoints(
        pivot=pivot,
        com1=pivot + params.d1 * u1,
        joint1=joint1,
        com2=joint1 + params.d2 * u12,
        tip=joint1 + params.l2 * u12,
    )


def manipulator_matrices(state: RobotState, params: RobotParams) -> ManipulatorMatrices:
    """Closed-form M, C(q,qd)qd and D for the 3-DOF chain."""
    th1, th2 = state.q[0], state.q[1]
    w1, w2 = state.qdot[0], state.qdot[1]
    a1, a2, a3 = params._a1, params._a2, params._a3
    b1, b2, mt = params._b1, params._b2, params.total_mass
    g = params.gravity

    s1, c1 = math.sin(th1), math.cos(th1)
    s2, c2 = math.sin(th2), math.cos(th2)
    s12, c12 = math.sin(th1 + th2), math.cos(th1 + th2)

    m11 = a1 + a2 + 2.0 * a3 * c2
    m12 = a2 + a3 * c2
    m13 = b1 * s1 + b2 * s12
    m23 = b2 * s12
    M = np.array([[m11, m12, m13], [m12, a2, m23], [m13, m23, mt]])

    w12 = w1 + w2
    Cqdot = np.array(
        [
            -a3 * s2 * w2 * (2.0 * w1 + w2),
            a3 * s2 * w1 * w1,
            b1 * c1 * w1 * w1 + b2 * c12 * w12 * w12,
        ]
    )
    D = np.array([g * (b1 * s1 + b2 * s12), g * b2 * s12, g * mt])
    return ManipulatorMatrices(M=M, Cqdot=Cqdot, D=D)


def spring_damper_force(z_g: float, zdot_g: float, sd: SpringDamperParams) -> float:
    """Vertical surrogate cable force at the attachment."""
    return sd.k_s * (sd.z_s - z_g) - sd.b_s * zdot_g


def cable_surrogate_force(
    z_g: float, zdot_g: float, sd: SpringDamperParams, F_d: float
) -> float:
    """F_c = F_s + F_d: spring-damper force plus the unmodeled residual."""
    return spring_damper_force(z_g, zdot_g, sd) + F_d


def forward_dynamics(
    state: RobotState, u: float, F_c: float, params: RobotParams
) -> np.ndarray:
    """qdd from M qdd = [0, u, F_c] - Cqd - D by a direct 3x3 solve."""
    mm = manipulator_matrices(state, params)
    rhs = np.array([0.0, u, F_c]) - mm.Cqdot - mm.D
    try:
        return np.linalg.solve(mm.M, rhs)
    except np.linalg.LinAlgError as exc:  # unreachable for valid params; derivation bug
        raise SingularityError("inertia matrix solve failed") from exc


def output(q) -> float:
    """Scalar output y = theta1 + theta2/2 (arm-bisector angle; needs l1 == l2)."""
    return float(q[0]) + 0.5 * float(q[1])


def output_rate(state: RobotState) -> float:
    return float(state.qdot[0]) + 0.5 * float(state.qdot[1])


def affine_terms(state: RobotState, params: RobotParams) -> AffineTerms:
    """Control-affine output dynamics, eliminating zdd_g through the vertical row.

    Row 3 of the manipulator form gives zdd_g = (F_c - n3 - m13 thdd1 - m23 thdd2)/mt
    with n_i = (Cqd + D)_i.  Substituting into rows 1-2 and solving the reduced 2x2
    system for thdd1, thdd2 yields ydd = thdd1 + thdd2/2 in the affine shape above,
    with the whole F_c dependence carried by beta and h_row = beta * [-z_g, -zd_g, 1]
    (so h_row @ p reproduces the spring part of F_c for p = [k_s, b_s, k_s z_s]).
    """
    return affine_from_matrices(
        manipulator_matrices(state, params), state.z_g, state.zdot_g
    )


def affine_from_matrices(
    mm: ManipulatorMatrices, z_g: float, zdot_g: float
) -> AffineTerms:
    """Affine elimination from an already-computed manipulator form (hot path)."""
    M, n = mm.M, mm.Cqdot + mm.D
    mt = M[2, 2]
    a11 = M[0, 0] - M[0, 2] ** 2 / mt
    a12 = M[0, 1] - M[0, 2] * M[1, 2] / mt
    a22 = M[1, 1] - M[1, 2] ** 2 / mt
    det = a11 * a22 - a12 * a12
    if not np.isfinite(det) or det == 0.0:
        raise SingularityError("reduced inertia block is singular")
    k1 = (a22 - 0.5 * a12) / det
    k2 = (0.5 * a11 - a12) / det
    g_term = k1 * (M[0, 2] * n[2] / mt - n[0]) + k2 * (M[1, 2] * n[2] / mt - n[1])
    beta = -(k1 * M[0, 2] + k2 * M[1, 2]) / mt
    alpha = k2
    if alpha == 0.0:
        raise SingularityError("input coefficient alpha vanished")
    h_row = beta * np.array([-z_g, -zdot_g, 1.0])
    return AffineTerms(g_term=float(g_term), h_row=h_row, beta=float(beta), alpha=float(alpha))


def total_energy(
    state: RobotState, params: RobotParams, sd: SpringDamperParams | None = None
) -> float:
    """Kinetic + gravitational energy (+ surrogate spring potential when sd given)."""
    mm = manipulator_matrices(state, params)
    kinetic = 0.5 * float(state.qdot @ mm.M @ state.qdot)
    th1, th12 = state.q[0], state.q[0] + state.q[1]
    potential = params.gravity * (
        params.total_mass * state.z_g
        - params._b1 * math.cos(th1)
        - params._b2 * math.cos(th12)
    )
    if sd is not None:
        potential += 0.5 * sd.k_s * (sd.z_s - state.z_g) ** 2
    return kinetic + potential
