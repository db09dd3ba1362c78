"""Episode orchestration: integration, grab/swap sequencing, Monte Carlo, metrics.

Time structure of every episode: the controller runs at a zero-order hold
(default 1 kHz); each hold interval wraps an integer number of fixed RK4 steps
(default dt = 1e-4) on the robot + adaptation co-state [q, qd, p_hat, k_d].
Full-cable plants hold the attachment reaction constant over one robot step and
advance the cable with compiled substeps in between; spring-damper plants are a
single smooth ODE.  Everything is deterministic: scenario + seed fixes every
logged byte.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from . import cable as cable_mod
from .cable import CableParams, CableState, attachment_reaction, static_equilibrium
from .control import (
    ControlDiagnostics,
    ControllerGains,
    ControllerState,
    adaptation_rates,
    adaptive_robust_control,
    boundary_layer_trajectory,
    feedback_linearization_control,
    lyapunov_value,
    sliding_variable,
)
from .dynamics import (
    RobotParams,
    RobotState,
    SingularityError,
    SpringDamperParams,
    affine_from_matrices,
    kinematics,
    manipulator_matrices,
    param_vector,
    require_equal_arms,
    spring_damper_force,
)
from .episode import (
    EV_GRAB,
    EV_GRAB_FAILURE,
    EV_PAUSE_END,
    EV_PAUSE_START,
    EV_RELEASE,
    EV_SATURATION,
    EV_SINGULARITY,
    EV_SWAP,
    EpisodeLog,
    Metrics,
    compute_metrics,
)
from .trajectory import OutputTrajectory, default_swing_profile

DEG = math.pi / 180.0

PLANT_KINDS = ("spring-damper", "full-cable")
CONTROLLER_KINDS = ("adaptive-robust", "feedback-linearization")

# Monte Carlo initial-condition ranges (radians).
DEFAULT_MC_RANGES = (
    (-60.0 * DEG, -30.0 * DEG),
    (-120.0 * DEG, -60.0 * DEG),
)


@dataclass(frozen=True)
class DisturbanceSpec:
    """Sinusoidal force residual F_d = amplitude * sin(2 pi frequency t)."""

    amplitude: float = 10.0
    frequency: float = 5.0

    def force(self, t: float) -> float:
        return self.amplitude * math.sin(2.0 * math.pi * self.frequency * t)


def _default_initial_state() -> RobotState:
    return RobotState([-35.0 * DEG, -110.0 * DEG, 1.84], np.zeros(3))


@dataclass
class Scenario:
    """Everything that determines an episode.  Fixed seed => deterministic run."""

    plant: str = "spring-damper"
    controller: str = "adaptive-robust"
    initial_state: RobotState = field(default_factory=_default_initial_state)
    robot: RobotParams = field(default_factory=RobotParams)
    gains: ControllerGains = field(default_factory=ControllerGains)
    true_spring: SpringDamperParams = SpringDamperParams(680.0, 20.0, 1.9)
    initial_guess: SpringDamperParams = SpringDamperParams(400.0, 12.0, 1.6)
    disturbance: DisturbanceSpec | None = None
    trajectory: OutputTrajectory | None = None  # None -> default quintic profile
    horizon: float = 1.1
    swings: int = 1
    pause: float = 1.0
    dt: float = 1e-4
    control_rate: float = 1000.0
    log_rate: float = 1000.0
    seed: int = 0
    cable: CableParams = field(default_factory=CableParams)
    attach_index: int | None = None  # None -> engine picks a station
    capture_radius: float = 0.10
    grab_speed_limit: float = 3.0
    baseline_kp: float = 20.0
    baseline_kd: float = 5.0

    def __post_init__(self):
        if self.plant not in PLANT_KINDS:
            raise ValueError(f"unknown plant {self.plant!r}")
        if self.controller not in CONTROLLER_KINDS:
            raise ValueError(f"unknown controller {self.controller!r}")
        if self.horizon <= 0.0:
            raise ValueError("horizon must be positive")
        if self.swings < 1:
            raise ValueError("need at least one swing")
        if self.pause < 0.0 or self.dt <= 0.0:
            raise ValueError("pause/dt must be non-negative/positive")
        steps = 1.0 / (self.control_rate * self.dt)
        if abs(steps - round(steps)) > 1e-9 or round(steps) < 1:
            raise ValueError("control interval must be an integer number of dt steps")
        stride = self.control_rate / self.log_rate
        if abs(stride - round(stride)) > 1e-9 or round(stride) < 1:
            raise ValueError("log rate must divide the control rate")
        require_equal_arms(self.robot)

    @property
    def steps_per_tick(self) -> int:
        return round(1.0 / (self.control_rate * self.dt))

    @property
    def log_stride(self) -> int:
        return round(self.control_rate / self.log_rate)

    def resolved_trajectory(self) -> OutputTrajectory:
        return self.trajectory if self.trajectory is not None else default_swing_profile(
            self.horizon
        )


@dataclass
class GrabResult:
    success: bool
    grab_point: np.ndarray   # (x, z) the swing gripper closes on
    attach_node: int | None  # nearest cable node (full-cable plants)
    distance: float          # tip-to-cable distance at the check
    tip_speed: float
    far_side: bool


def integrate_step(x: np.ndarray, t: float, dt: float, deriv) -> np.ndarray:
    """One fixed-step RK4 update of a flat co-state under deriv(x, t)."""
    k1 = deriv(x, t)
    k2 = deriv(x + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = deriv(x + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = deriv(x + dt * k3, t + dt)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def tip_state(state: RobotState, params: RobotParams, pivot_x: float = 0.0):
    """Swing-gripper tip position and velocity in world coordinates."""
    th1, th2 = state.q[0], state.q[1]
    w1, w2 = state.qdot[0], state.qdot[1]
    s1, c1 = math.sin(th1), math.cos(th1)
    s12, c12 = math.sin(th1 + th2), math.cos(th1 + th2)
    pos = np.array(
        [
            pivot_x + params.l1 * s1 + params.l2 * s12,
            state.z_g - params.l1 * c1 - params.l2 * c12,
        ]
    )
    vel = np.array(
        [
            params.l1 * c1 * w1 + params.l2 * c12 * (w1 + w2),
            state.zdot_g + params.l1 * s1 * w1 + params.l2 * s12 * (w1 + w2),
        ]
    )
    return pos, vel


def grab_check(
    state: RobotState,
    scenario: Scenario,
    cable_state: CableState | None = None,
    pivot_x: float = 0.0,
) -> GrabResult:
    """Can the swing gripper close on the cable here?

    Success needs the tip within the capture radius of the cable curve (full
    cable) or of the surrogate line z = z_g (spring-damper), on the far side of
    the pivot, moving slower than the tip-speed limit.
    """
    tip, tip_vel = tip_state(state, scenario.robot, pivot_x)
    speed = float(np.linalg.norm(tip_vel))
    far_side = tip[0] > pivot_x
    if cable_state is not None:
        dist, node = cable_mod.distance_to_polyline(tip, cable_state.node_pos)
        grab_point = cable_state.node_pos[node].copy()
    else:
        dist = abs(tip[1] - state.z_g)
        node = None
        grab_point = np.array([tip[0], state.z_g])
    success = (
        far_side and dist <= scenario.capture_radius and speed < scenario.grab_speed_limit
    )
    return GrabResult(
        success=success, grab_point=grab_point, attach_node=node,
        distance=float(dist), tip_speed=speed, far_side=bool(far_side),
    )


def swap_grippers(
    state: RobotState, grab_point, params: RobotParams, pivot_x: float = 0.0
) -> tuple[RobotState, float]:
    """Re-label the chain with the old swing gripper as the new pivot.

    The physical body is unchanged, so both link endpoint positions and
    velocities are continuous; with the symmetric mass layout (COM at 2l/3 from
    the gripping end of the pivot link, l/3 from the joint on the swing link) the
    same RobotParams keep describing the relabeled robot.
    """
    th1, th2 = state.q[0], state.q[1]
    w1, w2 = state.qdot[0], state.qdot[1]
    _, tip_vel = tip_state(state, params, pivot_x)
    new_q = np.array([th1 + th2 - math.pi, -th2, float(grab_point[1])])
    new_qd = np.array([w1 + w2, -w2, tip_vel[1]])
    return RobotState(new_q, new_qd), float(grab_point[0])


def _pick_attach_index(cable: CableParams, swings: int) -> int:
    # quarter-point station for a single swing; start further left when the run
    # must traverse (each swing advances roughly one chord ~ 4 nodes at default
    # discretization)
    frac = 0.25 if swings == 1 else 0.125
    return min(max(1, round(cable.n_segments * frac)), cable.n_segments - 1)


class _Recorder:
    """Accumulates log rows/events and the V-column ingredients."""

    def __init__(self, scenario: Scenario):
        self.rows: list[np.ndarray] = []
        self.events: list[tuple[float, str]] = []
        self._beta_fd: list[float] = []
        self._scenario = scenario
        self._saturated = False

    def event(self, t: float, name: str):
        self.events.append((t, name))

    def row(
        self,
        t: float,
        x: np.ndarray,
        target,
        u: float,
        diag: ControlDiagnostics | None,
        F_c: float,
        F_d: float,
        adaptive: bool,
    ):
        q, qd = x[0:3], x[3:6]
        y = q[0] + 0.5 * q[1]
        ydot = qd[0] + 0.5 * qd[1]
        if diag is not None:
            s, s_delta, u_raw = diag.s, diag.s_delta, diag.u_raw
            self._beta_fd.append(abs(diag.beta * F_d))
            sat_now = abs(u_raw) > self._scenario.gains.torque_limit
            if sat_now and not self._saturated:
                self.event(t, EV_SATURATION)
            self._saturated = sat_now
        else:  # pause rows: brake on, no control computed
            e = target.y_d - y
            edot = target.yd_dot - ydot
            s = sliding_variable(e, edot, self._scenario.gains.lam)
            s_delta = boundary_layer_trajectory(s, self._scenario.gains.phi)
            u_raw = 0.0
            self._beta_fd.append(0.0)
        k_d = x[9] if adaptive else 0.0
        self.rows.append(
            np.array(
                [
                    t, q[0], q[1], q[2], qd[0], qd[1], qd[2],
                    y, ydot, target.y_d, target.yd_dot, u, u_raw, s, s_delta, k_d,
                    x[6], x[7], x[8], F_c, F_d, math.nan,
                ]
            )
        )

    def finalize(self, scenario: Scenario, success: bool) -> EpisodeLog:
        rows = np.array(self.rows).reshape(-1, 22)
        adaptive = scenario.controller == "adaptive-robust"
        if adaptive and scenario.plant == "spring-damper":
            # Lyapunov diagnostic against the episode-wide disturbance bound:
            # the matched ideal gain is sup |beta F_d| / k_d0, knowable post hoc.
            p_true = param_vector(scenario.true_spring)
            k_bar = max(self._beta_fd, default=0.0) / scenario.gains.k_d0
            gamma = scenario.gains.gamma
            for i, row in enumerate(rows):
                p_tilde = row[16:19] - p_true
                rows[i, 21] = lyapunov_value(row[14], p_tilde, row[15] - k_bar, gamma)
        return EpisodeLog(rows, self.events)


def _make_tick_deriv(scenario: Scenario, traj: OutputTrajectory, adaptive: bool):
    """Derivative of [q, qd, p_hat, k_d] with u and (for the cable) F_c held.

    Returns deriv(x, t, u, F_c_held, t_swing_start); spring-damper plants pass
    F_c_held=None and get the smooth surrogate force at each stage time.
    """
    par = scenario.robot
    gains = scenario.gains
    sd = scenario.true_spring
    dist = scenario.disturbance
    gamma = np.asarray(gains.gamma)
    surrogate = scenario.plant == "spring-damper"

    def deriv(x, t, u, F_c_held, t0):
        st = RobotState(x[0:3], x[3:6])
        mm = manipulator_matrices(st, par)
        if surrogate:
            F_d = dist.force(t - t0) if dist is not None else 0.0
            F_c = spring_damper_force(st.z_g, st.zdot_g, sd) + F_d
        else:
            F_c = F_c_held
        rhs = np.array([0.0, u, F_c]) - mm.Cqdot - mm.D
        qdd = np.linalg.solve(mm.M, rhs)
        out = np.empty(10)
        out[0:3] = x[3:6]
        out[3:6] = qdd
        if adaptive:
            at = affine_from_matrices(mm, st.z_g, st.zdot_g)
            tgt = traj.sample(t - t0)
            e = tgt.y_d - (x[0] + 0.5 * x[1])
            edot = tgt.yd_dot - (x[3] + 0.5 * x[4])
            s = sliding_variable(e, edot, gains.lam)
            s_delta = boundary_layer_trajectory(s, gains.phi)
            out[6:9] = -gamma * at.h_row * s_delta
            out[9] = gains.k_d0 * abs(s_delta)
        else:
            out[6:10] = 0.0
        return out

    return deriv


class _World:
    """Mutable per-episode plant state: robot co-state + optional cable."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.adaptive = scenario.controller == "adaptive-robust"
        self.traj = scenario.resolved_trajectory()
        self.x = np.empty(10)
        self.x[0:3] = scenario.initial_state.q
        self.x[3:6] = scenario.initial_state.qdot
        self.x[6:9] = param_vector(scenario.initial_guess)
        self.x[9] = scenario.gains.k_d0 if self.adaptive else 0.0
        self.pivot_x = 0.0
        self.cable: CableState | None = None
        self.deriv = _make_tick_deriv(scenario, self.traj, self.adaptive)
        if scenario.plant == "full-cable":
            self._init_cable()

    def _init_cable(self):
        sc = self.scenario
        attach = sc.attach_index
        if attach is None:
            attach = _pick_attach_index(sc.cable, sc.swings)
        # the cable starts in the shape it holds while the gripper pins it at the
        # scenario's z_g; the reaction then ramps as the robot's weight transfers
        self.cable = static_equilibrium(
            sc.cable, load_index=attach, pin_height=float(self.x[2])
        )
        self.pivot_x = float(self.cable.node_pos[attach, 0])
        self._rebuild_substep_arrays()
        attachment_reaction(self.cable, sc.cable, self.x[2], self.x[5])

    def _rebuild_substep_arrays(self):
        cp = self.scenario.cable
        inv_mass = 1.0 / cp.node_masses()
        inv_mass[0] = inv_mass[-1] = 0.0
        inv_mass[self.cable.attach_index] = 0.0
        acc0 = np.zeros((len(inv_mass), 2))
        acc0[:, 1] = -cp.gravity
        self._inv_mass = inv_mass
        self._acc0 = acc0
        self._n_sub = max(1, round(self.scenario.dt / cp.dt_substep))

    def state(self) -> RobotState:
        return RobotState(self.x[0:3].copy(), self.x[3:6].copy())

    def controller_state(self) -> ControllerState:
        return ControllerState(p_hat=self.x[6:9].copy(), k_d=float(self.x[9]))

    def reaction(self) -> float:
        return attachment_reaction(
            self.cable, self.scenario.cable, self.x[2], self.x[5]
        )

    def control(self, t_local: float) -> tuple[float, ControlDiagnostics]:
        sc = self.scenario
        target = self.traj.sample(t_local)
        if self.adaptive:
            return adaptive_robust_control(
                self.state(), target, self.controller_state(), sc.gains, sc.robot
            )
        return feedback_linearization_control(
            self.state(), target, self.x[6:9], sc.robot,
            kp=sc.baseline_kp, kd=sc.baseline_kd,
            torque_limit=sc.gains.torque_limit,
            lam_diag=sc.gains.lam, phi_diag=sc.gains.phi,
        )

    def advance_robot_step(self, t: float, u: float, t0: float):
        """One robot dt: RK4 with held inputs, then cable substeps tracking z_g."""
        sc = self.scenario
        if self.cable is None:
            self.x = integrate_step(
                self.x, t, sc.dt, lambda x, tau: self.deriv(x, tau, u, None, t0)
            )
            return
        F_c = self.reaction()
        z_old = self.x[2]
        self.x = integrate_step(
            self.x, t, sc.dt, lambda x, tau: self.deriv(x, tau, u, F_c, t0)
        )
        self._advance_cable(z_old, self.x[2])

    def _advance_cable(self, z_old: float, z_new: float):
        sc = self.scenario
        cp = sc.cable
        cable_mod._cable_kernel.advance(
            self.cable.node_pos, self.cable.node_vel,
            self._n_sub, sc.dt / self._n_sub,
            cp.k_seg, cp.segment_damping, cp.rest_length,
            self._inv_mass, self._acc0, self.cable.attach_index,
            z_old, (z_new - z_old) / sc.dt, 1.0,
        )

    def advance_pause_step(self):
        """Brake on: joints frozen, vertical pivot + cable keep evolving."""
        sc = self.scenario
        mt = sc.robot.total_mass
        dt = sc.dt
        if self.cable is None:
            sd = sc.true_spring
            z, zd = self.x[2], self.x[5]
            zdd = (spring_damper_force(z, zd, sd) - mt * sc.robot.gravity) / mt
            self.x[2] = z + dt * zd + 0.5 * dt * dt * zdd
            self.x[5] = zd + dt * zdd
            return
        F_c = self.reaction()
        z, zd = self.x[2], self.x[5]
        zdd = F_c / mt - sc.robot.gravity
        z_new = z + dt * zd + 0.5 * dt * dt * zdd
        self.x[2] = z_new
        self.x[5] = zd + dt * zdd
        self._advance_cable(z, z_new)

    def apply_swap(self, grab: GrabResult):
        sc = self.scenario
        if self.cable is not None:
            node = grab.attach_node
            grab_point = self.cable.node_pos[node].copy()
        else:
            grab_point = grab.grab_point
        new_state, new_pivot_x = swap_grippers(
            self.state(), grab_point, sc.robot, self.pivot_x
        )
        self.x[0:3] = new_state.q
        self.x[3:6] = new_state.qdot
        self.pivot_x = new_pivot_x
        if self.cable is not None:
            old = self.cable.attach_index
            self.cable.node_vel[old] = (0.0, self.cable.node_vel[old, 1])
            self.cable.attach_index = node
            self._rebuild_substep_arrays()
            attachment_reaction(self.cable, sc.cable, self.x[2], self.x[5])


def _run_episode(scenario: Scenario) -> EpisodeLog:
    world = _World(scenario)
    rec = _Recorder(scenario)
    ticks_per_swing = round(scenario.horizon * scenario.control_rate)
    pause_ticks = round(scenario.pause * scenario.control_rate)
    stride = scenario.log_stride
    tick_dt = 1.0 / scenario.control_rate
    steps = scenario.steps_per_tick
    sub_dt = scenario.dt

    t_global_ticks = 0
    success = True
    try:
        for swing in range(scenario.swings):
            swing_start = t_global_ticks * tick_dt
            rec.event(swing_start, EV_RELEASE)
            for k in range(ticks_per_swing + 1):
                t = t_global_ticks * tick_dt
                t_local = k * tick_dt
                u, diag = world.control(t_local)
                if t_global_ticks % stride == 0:
                    F_c = (
                        world.reaction()
                        if world.cable is not None
                        else _surrogate_force(scenario, world.x, t_local)
                    )
                    F_d = _applied_disturbance(scenario, t_local)
                    rec.row(
                        t, world.x, world.traj.sample(t_local), u, diag,
                        F_c, F_d, world.adaptive,
                    )
                if k == ticks_per_swing:
                    break  # final row logged at the horizon; stop before stepping
                for j in range(steps):
                    world.advance_robot_step(t + j * sub_dt, u, swing_start)
                t_global_ticks += 1

            grab = grab_check(world.state(), scenario, world.cable, world.pivot_x)
            t = t_global_ticks * tick_dt
            if not grab.success:
                rec.event(t, EV_GRAB_FAILURE)
                success = False
                break
            rec.event(t, EV_GRAB)
            if swing == scenario.swings - 1:
                break

            # inter-swing pause: joints braked, cable live, then the swap
            rec.event(t, EV_PAUSE_START)
            world.x[3] = world.x[4] = 0.0
            held = world.traj.sample(scenario.horizon + 1.0)
            for k in range(pause_ticks):
                for j in range(steps):
                    world.advance_pause_step()
                t_global_ticks += 1
                # the last pause tick is not logged; the next swing's first row
                # lands on the same timestamp and supersedes it
                if t_global_ticks % stride == 0 and k < pause_ticks - 1:
                    t = t_global_ticks * tick_dt
                    F_c = (
                        world.reaction()
                        if world.cable is not None
                        else _surrogate_force(scenario, world.x, scenario.horizon)
                    )
                    rec.row(t, world.x, held, 0.0, None, F_c, 0.0, world.adaptive)
            t = t_global_ticks * tick_dt
            rec.event(t, EV_PAUSE_END)
            world.apply_swap(grab)
            rec.event(t, EV_SWAP)
    except SingularityError:
        rec.event(t_global_ticks * tick_dt, EV_SINGULARITY)
        success = False

    log = rec.finalize(scenario, success)
    log.metrics = compute_metrics(log, success=success)
    return log


def _surrogate_force(scenario: Scenario, x: np.ndarray, t_local: float) -> float:
    F_d = _applied_disturbance(scenario, t_local)
    return spring_damper_force(x[2], x[5], scenario.true_spring) + F_d


def _applied_disturbance(scenario: Scenario, t_local: float) -> float:
    if scenario.plant != "spring-damper" or scenario.disturbance is None:
        return 0.0
    return scenario.disturbance.force(t_local)


def run_swing(scenario: Scenario) -> EpisodeLog:
    """Simulate one swing over [0, horizon] and apply grab_check at the end."""
    if scenario.swings != 1:
        scenario = replace(scenario, swings=1)
    return _run_episode(scenario)


def run_continuous(scenario: Scenario) -> EpisodeLog:
    """Sequential swings with pauses and gripper swaps; estimates persist."""
    return _run_episode(scenario)


def per_swing_metrics(log: EpisodeLog) -> list[Metrics]:
    """Metrics over each release..grab window of a continuous log."""
    releases = [t for t, ev in log.events if ev == EV_RELEASE]
    grabs = sorted(
        t for t, ev in log.events if ev in (EV_GRAB, EV_GRAB_FAILURE)
    )
    out = []
    for i, t0 in enumerate(releases):
        t1 = grabs[i] if i < len(grabs) else log.t[-1]
        sel = (log.t >= t0 - 1e-12) & (log.t <= t1 + 1e-12)
        sub = EpisodeLog(log.rows[sel], [])
        out.append(compute_metrics(sub, success=True))
    return out


def horizontal_progress(log: EpisodeLog, scenario: Scenario) -> float:
    """Net pivot advance over a continuous run, in meters (swap chord sum)."""
    # the pivot travels one tip-chord per successful swap; reconstruct from the
    # logged configuration at each swap event
    progress = 0.0
    for t_ev, ev in log.events:
        if ev != EV_SWAP:
            continue
        idx = int(np.argmin(np.abs(log.t - t_ev)))
        row = log.rows[idx]
        th1, th2 = row[1], row[2]
        # chord between grippers just before relabeling (tip was about to become
        # the pivot); swap happens after the pause, angles frozen since the grab
        chord = abs(
            scenario.robot.l1 * math.sin(th1)
            + scenario.robot.l2 * math.sin(th1 + th2)
        )
        progress += chord
    return progress


@dataclass
class MonteCarloRun:
    index: int
    theta1: float
    theta2: float
    metrics: dict[str, Metrics]


@dataclass
class MonteCarloResult:
    runs: list[MonteCarloRun]
    aggregate: dict[str, dict[str, float]]
    logs: dict[tuple[int, str], EpisodeLog] | None = None

    def success_count(self, controller: str) -> int:
        return sum(1 for r in self.runs if r.metrics[controller].success)


def _draw_initial(base: Scenario, ranges, run_index: int, seed: int) -> tuple[float, float]:
    # counter-based generator keyed by (seed, run index): run k's draw does not
    # depend on how many runs surround it
    rng = np.random.Generator(np.random.Philox(key=(seed << 64) | run_index))
    th1 = rng.uniform(*ranges[0])
    th2 = rng.uniform(*ranges[1])
    return float(th1), float(th2)


_MC_BASE: Scenario | None = None
_MC_EQUILIBRIUM: CableState | None = None


def _mc_scenario(base: Scenario, th1: float, th2: float, controller: str) -> Scenario:
    ic = RobotState(
        [th1, th2, base.initial_state.q[2]], np.zeros(3)
    )
    return replace(base, controller=controller, initial_state=ic)


def _mc_run_pair(args):
    k, th1, th2 = args
    metrics = {}
    logs = {}
    for controller in CONTROLLER_KINDS:
        log = run_swing(_mc_scenario(_MC_BASE, th1, th2, controller))
        metrics[controller] = log.metrics
        logs[controller] = log
    return k, metrics, logs


def monte_carlo(
    base: Scenario,
    ranges=DEFAULT_MC_RANGES,
    n: int = 20,
    seed: int | None = None,
    keep_logs: bool = False,
) -> MonteCarloResult:
    """n runs from uniformly drawn initial angles; both controllers per draw."""
    if n < 1:
        raise ValueError("need at least one run")
    for lo, hi in ranges:
        if hi < lo:
            raise ValueError("invalid range")
    seed = base.seed if seed is None else seed
    draws = [_draw_initial(base, ranges, k, seed) for k in range(n)]

    global _MC_BASE
    _MC_BASE = base
    jobs = [(k, th1, th2) for k, (th1, th2) in enumerate(draws)]
    threads = int(os.environ.get("BRACHIATION_THREADS", "1") or "1")
    results = []
    if threads > 1:
        import multiprocessing as mp

        with mp.get_context("fork").Pool(processes=threads) as pool:
            results = pool.map(_mc_run_pair, jobs)
    else:
        results = [_mc_run_pair(job) for job in jobs]
    results.sort(key=lambda r: r[0])

    runs = []
    all_logs: dict[tuple[int, str], EpisodeLog] = {}
    for (k, metrics, logs), (th1, th2) in zip(results, draws):
        runs.append(MonteCarloRun(index=k, theta1=th1, theta2=th2, metrics=metrics))
        if keep_logs:
            for controller, log in logs.items():
                all_logs[(k, controller)] = log

    aggregate = {}
    for controller in CONTROLLER_KINDS:
        ms = [r.metrics[controller] for r in runs]
        aggregate[controller] = {
            "rms_u": float(np.mean([m.rms_u for m in ms])),
            "rmse_y": float(np.mean([m.rmse_y for m in ms])),
            "rmse_ydot": float(np.mean([m.rmse_ydot for m in ms])),
            "successes": float(sum(m.success for m in ms)),
        }
    return MonteCarloResult(
        runs=runs, aggregate=aggregate, logs=all_logs if keep_logs else None
    )
