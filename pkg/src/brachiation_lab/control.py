"""Combined direct-indirect adaptive robust controller and the fixed-model baseline.

The adaptive law feedback-linearizes the scalar output channel with an online
parameter estimate p_hat and adds a saturated robust term whose gain k_d grows
whenever the sliding variable leaves the boundary layer.  Adaptation is driven by
the boundary-layer trajectory s_delta, so both the estimator and the gain freeze
inside the layer.  The baseline is plain input-output feedback linearization
around a fixed (wrong) parameter guess with PD error feedback and no adaptation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import (
    RobotParams,
    RobotState,
    SingularityError,
    affine_terms,
    output,
    output_rate,
)
from .trajectory import OutputTarget

# Fixed-model baseline PD gains.
BASELINE_KP = 20.0
BASELINE_KD = 5.0

ALPHA_ABORT = 1e-9  # |alpha| below this aborts the episode (loss of authority)


@dataclass(frozen=True)
class ControllerGains:
    """Adaptive-robust gains; defaults are the published tuning."""

    lam: float = 8.0
    gamma: tuple[float, float, float] = (100.0, 10.0, 100.0)
    phi: float = 0.4
    k_d0: float = 0.5
    torque_limit: float = 10.0

    def __post_init__(self):
        if self.lam <= 0.0:
            raise ValueError("lambda must be positive")
        if len(self.gamma) != 3 or min(self.gamma) <= 0.0:
            raise ValueError("adaptation gains must be three positive entries")
        if self.phi <= 0.0:
            raise ValueError("boundary-layer width must be positive")
        if not 0.0 < self.k_d0 < 1.0:
            raise ValueError("k_d0 must lie in (0, 1)")
        if self.torque_limit <= 0.0:
            raise ValueError("torque limit must be positive")


@dataclass
class ControlDiagnostics:
    e: float
    edot: float
    s: float
    s_delta: float
    v: float
    u_raw: float
    h_row: np.ndarray
    beta: float
    alpha: float


@dataclass
class ControllerState:
    """Estimator + robust gain, owned by one episode; k_d never decreases."""

    p_hat: np.ndarray
    k_d: float
    last: ControlDiagnostics | None = field(default=None, repr=False)

    def __post_init__(self):
        self.p_hat = np.asarray(self.p_hat, dtype=float)
        if self.p_hat.shape != (3,) or not np.isfinite(self.p_hat).all():
            raise ValueError("p_hat must be a finite 3-vector")


def sliding_variable(e: float, edot: float, lam: float) -> float:
    """s = edot + lam * e."""
    return edot + lam * e


def sat(ratio: float) -> float:
    """Identity inside [-1, 1], sign outside."""
    if ratio > 1.0:
        return 1.0
    if ratio < -1.0:
        return -1.0
    return ratio


def boundary_layer_trajectory(s: float, phi: float) -> float:
    """Distance of s from the boundary layer (zero inside it)."""
    if abs(s) <= phi:
        return 0.0
    return s - phi * sat(s / phi)


def robust_term(s: float, phi: float, k_d: float) -> float:
    """v = k_d * sat(s / phi)."""
    return k_d * sat(s / phi)


def adaptation_rates(
    s_delta: float, h_row: np.ndarray, gains: ControllerGains
) -> tuple[np.ndarray, float]:
    """Continuous-time rates (p_hat_dot, k_d_dot); the engine co-integrates them."""
    p_hat_rate = -np.asarray(gains.gamma) * h_row * s_delta
    return p_hat_rate, gains.k_d0 * abs(s_delta)


def _tracking_terms(state: RobotState, target: OutputTarget, lam: float):
    e = target.y_d - output(state.q)
    edot = target.yd_dot - output_rate(state)
    return e, edot, sliding_variable(e, edot, lam)


def adaptive_robust_control(
    state: RobotState,
    target: OutputTarget,
    cstate: ControllerState,
    gains: ControllerGains,
    params: RobotParams,
) -> tuple[float, ControlDiagnostics]:
    """u = alpha^-1 (yd_ddot - g - h p_hat + v + lam edot), clipped to the torque limit."""
    at = affine_terms(state, params)
    if abs(at.alpha) < ALPHA_ABORT:
        raise SingularityError("control authority lost (alpha ~ 0)")
    e, edot, s = _tracking_terms(state, target, gains.lam)
    s_delta = boundary_layer_trajectory(s, gains.phi)
    v = robust_term(s, gains.phi, cstate.k_d)
    u_raw = (
        target.yd_ddot
        - at.g_term
        - float(at.h_row @ cstate.p_hat)
        + v
        + gains.lam * edot
    ) / at.alpha
    u = min(max(u_raw, -gains.torque_limit), gains.torque_limit)
    diag = ControlDiagnostics(
        e=e, edot=edot, s=s, s_delta=s_delta, v=v, u_raw=u_raw,
        h_row=at.h_row, beta=at.beta, alpha=at.alpha,
    )
    cstate.last = diag
    return u, diag


def feedback_linearization_control(
    state: RobotState,
    target: OutputTarget,
    p_assumed: np.ndarray,
    params: RobotParams,
    kp: float = BASELINE_KP,
    kd: float = BASELINE_KD,
    torque_limit: float = 10.0,
    lam_diag: float = 8.0,
    phi_diag: float = 0.4,
) -> tuple[float, ControlDiagnostics]:
    """Baseline: inversion around a fixed parameter guess + PD feedback, no adaptation.

    lam_diag only feeds the logged sliding variable so baseline and adaptive
    episodes share diagnostics; it does not enter the control law.
    """
    at = affine_terms(state, params)
    if abs(at.alpha) < ALPHA_ABORT:
        raise SingularityError("control authority lost (alpha ~ 0)")
    e, edot, s = _tracking_terms(state, target, lam_diag)
    u_raw = (
        target.yd_ddot
        - at.g_term
        - float(at.h_row @ np.asarray(p_assumed, float))
        + kp * e
        + kd * edot
    ) / at.alpha
    u = min(max(u_raw, -torque_limit), torque_limit)
    diag = ControlDiagnostics(
        e=e, edot=edot, s=s, s_delta=boundary_layer_trajectory(s, phi_diag), v=0.0,
        u_raw=u_raw, h_row=at.h_row, beta=at.beta, alpha=at.alpha,
    )
    return u, diag


def lyapunov_value(
    s_delta: float, p_tilde: np.ndarray, k_tilde: float, gamma
) -> float:
    """V = s_delta^2/2 + p_tilde' Gamma^-1 p_tilde / 2 + k_tilde^2/2."""
    p_tilde = np.asarray(p_tilde, float)
    return float(
        0.5 * s_delta**2
        + 0.5 * float(p_tilde @ (p_tilde / np.asarray(gamma, float)))
        + 0.5 * k_tilde**2
    )
