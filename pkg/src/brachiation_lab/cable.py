"""Ground-truth flexible cable: a planar lumped-mass chain pinned at both supports.

Point masses joined by axial spring-dampers; the robot's pivot gripper slaves the
vertical coordinate of one node (the attachment) while that node's horizontal
coordinate stays at its relaxed value.  While slaved, the node's own mass and
weight are excluded from the cable side — the robot's vertical dynamics row
already carries everything hanging at the attachment — which makes the coupled
undamped system conserve energy exactly and the static reaction equal the robot
weight.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import root

from . import _cable_kernel
from .dynamics import GRAVITY, RobotState, RobotParams, forward_dynamics


class ConvergenceError(RuntimeError):
    """Static relaxation failed to reach the residual tolerance."""


@dataclass(frozen=True)
class CableParams:
    """Lumped-mass discretization; defaults match the hardware cable."""

    length: float = 8.0
    linear_mass: float = 0.25
    segment_stiffness: float = 785400.0
    segment_damping: float = 4.0
    n_segments: int = 32
    support_left: tuple[float, float] = (0.0, 2.0)
    support_right: tuple[float, float] = (8.0, 2.0)
    # Table's stiffness read as per-segment by default; set True to read it as
    # total axial stiffness EA/L (per-segment value then scales with n_segments).
    stiffness_is_total: bool = False
    gravity: float = GRAVITY
    dt_substep: float = 2e-6

    def __post_init__(self):
        if self.n_segments < 8:
            raise ValueError("need at least 8 segments")
        if min(self.length, self.linear_mass, self.segment_stiffness) <= 0.0:
            raise ValueError("cable physical constants must be positive")
        if self.segment_damping < 0.0 or self.gravity <= 0.0 or self.dt_substep <= 0.0:
            raise ValueError("cable physical constants must be positive")

    @property
    def k_seg(self) -> float:
        if self.stiffness_is_total:
            return self.segment_stiffness * self.n_segments
        return self.segment_stiffness

    @property
    def rest_length(self) -> float:
        return self.length / self.n_segments

    @property
    def total_mass(self) -> float:
        return self.linear_mass * self.length

    def node_masses(self) -> np.ndarray:
        """Lumped node masses; half-segments at the supports, summing to total_mass."""
        m = np.full(self.n_segments + 1, self.linear_mass * self.rest_length)
        m[0] *= 0.5
        m[-1] *= 0.5
        return m


@dataclass
class CableState:
    """Node positions/velocities; first and last nodes are the pinned supports."""

    node_pos: np.ndarray
    node_vel: np.ndarray
    attach_index: int | None = None

    def __post_init__(self):
        self.node_pos = np.ascontiguousarray(self.node_pos, dtype=float)
        self.node_vel = np.ascontiguousarray(self.node_vel, dtype=float)
        if self.node_pos.shape != self.node_vel.shape or self.node_pos.ndim != 2:
            raise ValueError("node arrays must share an (n+1, 2) shape")
        if self.attach_index is not None and not (
            0 < self.attach_index < len(self.node_pos) - 1
        ):
            raise ValueError("attachment must be an interior node")

    def copy(self) -> "CableState":
        return CableState(self.node_pos.copy(), self.node_vel.copy(), self.attach_index)


def straight_line_state(params: CableParams, attach_index: int | None = None) -> CableState:
    """Unsagged starting shape: nodes evenly spaced between the supports."""
    frac = np.linspace(0.0, 1.0, params.n_segments + 1)[:, None]
    left = np.asarray(params.support_left, float)
    right = np.asarray(params.support_right, float)
    pos = left + frac * (right - left)
    return CableState(pos, np.zeros_like(pos), attach_index)


def _segment_tensions(state: CableState, params: CableParams):
    seg = state.node_pos[1:] - state.node_pos[:-1]
    lengths = np.linalg.norm(seg, axis=1)
    unit = seg / np.where(lengths < 1e-12, 1.0, lengths)[:, None]
    rate = np.einsum("ij,ij->i", state.node_vel[1:] - state.node_vel[:-1], unit)
    tension = params.k_seg * (lengths - params.rest_length) + params.segment_damping * rate
    return tension, unit


def internal_forces(state: CableState, params: CableParams) -> np.ndarray:
    """Per-node force: accumulated axial spring-damper forces plus node weight."""
    tension, unit = _segment_tensions(state, params)
    forces = np.zeros_like(state.node_pos)
    pull = tension[:, None] * unit
    forces[:-1] += pull
    forces[1:] -= pull
    forces[:, 1] -= params.node_masses() * params.gravity
    return forces


def segment_forces_on_node(state: CableState, params: CableParams, index: int) -> np.ndarray:
    """Net axial segment force on one node, excluding its weight."""
    tension, unit = _segment_tensions(state, params)
    f = np.zeros(2)
    if index < len(tension):
        f += tension[index] * unit[index]
    if index > 0:
        f -= tension[index - 1] * unit[index - 1]
    return f


def elastic_energy(state: CableState, params: CableParams) -> float:
    lengths = np.linalg.norm(state.node_pos[1:] - state.node_pos[:-1], axis=1)
    return 0.5 * params.k_seg * float(((lengths - params.rest_length) ** 2).sum())


def cable_energy(state: CableState, params: CableParams) -> float:
    """Elastic + kinetic + gravitational energy of the moving cable material.

    The pinned supports and the slaved attachment node are excluded from the
    kinetic/gravity bookkeeping (the robot carries the attachment's share).
    """
    masses = params.node_masses()
    active = np.ones(len(masses), dtype=bool)
    active[0] = active[-1] = False
    if state.attach_index is not None:
        active[state.attach_index] = False
    m = masses[active]
    v2 = np.einsum("ij,ij->i", state.node_vel[active], state.node_vel[active])
    kinetic = 0.5 * float(m @ v2)
    potential = params.gravity * float(m @ state.node_pos[active, 1])
    return elastic_energy(state, params) + kinetic + potential


def _relaxation_accel(params: CableParams, load: float, load_index: int | None):
    """Constant per-node acceleration: gravity everywhere free, load replacing
    the attached node's own weight (the robot hangs there in its place)."""
    n = params.n_segments + 1
    masses = params.node_masses()
    inv_mass = 1.0 / masses
    inv_mass[0] = inv_mass[-1] = 0.0
    acc0 = np.zeros((n, 2))
    acc0[:, 1] = -params.gravity
    acc0[0] = acc0[-1] = 0.0
    if load_index is not None:
        acc0[load_index, 1] = -load / masses[load_index]
    return inv_mass, acc0


def _static_residual(state: CableState, params: CableParams, load: float,
                     load_index: int | None) -> np.ndarray:
    """Net force on interior nodes at zero velocity (what equilibrium must null)."""
    frozen = CableState(state.node_pos, np.zeros_like(state.node_vel), state.attach_index)
    forces = internal_forces(frozen, params)
    if load_index is not None:
        # the attached node carries the external load instead of its own weight
        forces[load_index, 1] += params.node_masses()[load_index] * params.gravity - load
    return forces[1:-1]


def static_equilibrium(
    params: CableParams,
    load: float = 0.0,
    load_index: int | None = None,
    tol: float = 1e-6,
    max_batches: int = 400,
    pin_height: float | None = None,
) -> CableState:
    """Sagged equilibrium by damped dynamic relaxation, polished to the tolerance.

    Relaxation (kinetic damping + viscous drag) gets near the fixed point; a
    root-solve on the interior node positions then drives the residual force
    infinity-norm below min(tol, 1e-9) so mirror-symmetry holds to tight bounds.

    With pin_height set, the attached node is held at that height instead of
    carrying a load: its horizontal coordinate still equilibrates, and whatever
    vertical force the pin supplies is the gripper's share.  This is the shape a
    cable settles into while a gripper holds it somewhere specific.
    """
    if load != 0.0 and load_index is None:
        raise ValueError("load requires a load_index")
    if pin_height is not None and load_index is None:
        raise ValueError("pin_height requires a load_index")
    state = straight_line_state(params, attach_index=load_index)
    inv_mass, acc0 = _relaxation_accel(params, load, load_index)
    pinned = pin_height is not None
    ai = load_index if pinned else -1
    if pinned:
        state.node_pos[load_index, 1] = pin_height
    dt = 2e-5
    drag = float(np.exp(-8.0 * dt))  # near-critical for the slow transverse modes
    for _ in range(max_batches):
        _cable_kernel.advance(
            state.node_pos, state.node_vel, 2000, dt,
            params.k_seg, params.segment_damping, params.rest_length,
            inv_mass, acc0, ai, pin_height if pinned else 0.0, 0.0, drag,
        )
        state.node_vel[:] = 0.0  # kinetic reset keeps the relaxation from ringing
        residual = _residual_norm(state, params, load, load_index, pin_height)
        if residual < max(tol * 1e3, 1e-3):
            break
    else:
        raise ConvergenceError(f"relaxation stalled at residual {residual:.3e} N")

    n_interior = params.n_segments - 1
    base = state.copy()

    def fun(flat):
        trial = base.copy()
        trial.node_pos[1:-1] = flat.reshape(n_interior, 2)
        if pinned:
            trial.node_pos[load_index, 1] = pin_height
        res = _static_residual(trial, params, load, load_index)
        if pinned:
            res = res.copy()
            res[load_index - 1, 1] = 0.0  # pin supplies the vertical balance
        return res.ravel()

    guess = state.node_pos[1:-1].ravel()
    for _ in range(3):  # hybr occasionally stops a hair short; re-seed and polish
        sol = root(fun, guess, method="hybr", tol=1e-12)
        guess = sol.x
        state.node_pos[1:-1] = sol.x.reshape(n_interior, 2)
        if pinned:
            state.node_pos[load_index, 1] = pin_height
        final = _residual_norm(state, params, load, load_index, pin_height)
        if final <= min(tol, 1e-8):
            break
    state.node_vel[:] = 0.0
    if final > min(tol, 1e-8):
        raise ConvergenceError(f"equilibrium residual {final:.3e} N above tolerance")
    return state


def _residual_norm(state, params, load, load_index, pin_height) -> float:
    res = _static_residual(state, params, load, load_index)
    if pin_height is not None:
        res = res.copy()
        res[load_index - 1, 1] = 0.0
    return float(np.abs(res).max())


def attachment_reaction(
    state: CableState, params: CableParams, z_g: float, zdot_g: float
) -> float:
    """Clamp the attachment node vertically to (z_g, zdot_g); return the vertical
    net segment force on it (positive up).  Horizontal coordinate stays put."""
    if state.attach_index is None:
        raise ValueError("cable has no attachment set")
    ai = state.attach_index
    state.node_pos[ai, 1] = z_g
    state.node_vel[ai, 1] = zdot_g
    state.node_vel[ai, 0] = 0.0
    return float(segment_forces_on_node(state, params, ai)[1])


def coupled_derivative(
    robot: RobotState,
    cable: CableState,
    u: float,
    robot_params: RobotParams,
    cable_params: CableParams,
) -> np.ndarray:
    """Derivative of the concatenated [q, qd, node_pos, node_vel] state.

    Pure function (does not mutate its arguments): the attachment node is slaved
    to the robot's z_g, the supports are pinned, free nodes follow the internal
    forces, and the robot sees F_c = the vertical segment force at the attachment.
    Exists for the conservation oracle; production stepping uses the substep
    kernel instead.
    """
    if cable.attach_index is None:
        raise ValueError("cable has no attachment set")
    ai = cable.attach_index
    work = cable.copy()
    work.node_pos[ai, 1] = robot.z_g
    work.node_vel[ai] = (0.0, robot.zdot_g)

    F_c = float(segment_forces_on_node(work, cable_params, ai)[1])
    qdd = forward_dynamics(robot, u, F_c, robot_params)

    masses = cable_params.node_masses()
    acc = internal_forces(work, cable_params) / masses[:, None]
    acc[0] = acc[-1] = 0.0
    acc[ai] = (0.0, qdd[2])
    dpos = work.node_vel.copy()
    dpos[0] = dpos[-1] = 0.0
    dpos[ai] = (0.0, robot.zdot_g)
    return np.concatenate([robot.qdot, qdd, dpos.ravel(), acc.ravel()])


def distance_to_polyline(point, node_pos) -> tuple[float, int]:
    """Min distance from a point to the cable polyline + index of nearest node."""
    p = np.asarray(point, float)
    a = node_pos[:-1]
    b = node_pos[1:]
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", p - a, ab) / np.where(denom == 0, 1.0, denom), 0.0, 1.0)
    closest = a + t[:, None] * ab
    d = np.linalg.norm(closest - p, axis=1)
    nearest_node = int(np.argmin(np.linalg.norm(node_pos - p, axis=1)))
    return float(d.min()), nearest_node
