"""Command-line front end: configure scenarios, run the experiments, emit CSVs.

Exit codes: 0 success, 1 configuration error (message names the offending
key), 2 grab failure, 3 singularity abort.  When a swing run covers both
controllers, the exit code reflects the adaptive-robust one; the baseline's
grab failure is an expected experimental outcome, not a tool error.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .cable import CableParams
from .control import ControllerGains
from .dynamics import RobotState, SpringDamperParams
from .engine import (
    CONTROLLER_KINDS,
    PLANT_KINDS,
    DisturbanceSpec,
    Scenario,
    _pick_attach_index,
    horizontal_progress,
    monte_carlo,
    per_swing_metrics,
    run_continuous,
    run_swing,
)
from .episode import EV_GRAB_FAILURE, EV_RELEASE, EV_SINGULARITY, EpisodeLog
from .trajectory import quintic_profile

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_GRAB = 2
EXIT_SINGULAR = 3

DEG = math.pi / 180.0


class ConfigError(Exception):
    """Raised for any configuration problem; message names the offending key."""


# section -> key -> (python type, unit, description).  This table is the single
# source of truth for validation and for the --help key listing.
CONFIG_SCHEMA: dict[str, dict[str, tuple[type, str, str]]] = {
    "run": {
        "plant": (str, "-", "spring-damper | full-cable"),
        "controller": (str, "-", "adaptive-robust | feedback-linearization | both"),
        "out": (str, "-", "output directory for CSV artifacts"),
        "seed": (int, "-", "base seed for deterministic reruns"),
        "horizon": (float, "s", "single-swing duration"),
        "dt": (float, "s", "integrator step"),
        "control_rate": (float, "Hz", "zero-order-hold controller rate"),
        "log_rate": (float, "Hz", "CSV sampling rate (divides control_rate)"),
    },
    "initial_state": {
        "theta1": (float, "deg", "pivot-arm angle from straight down"),
        "theta2": (float, "deg", "relative angle at the powered center joint"),
        "z_g": (float, "m", "pivot gripper height"),
        "dtheta1": (float, "deg/s", "theta1 rate"),
        "dtheta2": (float, "deg/s", "theta2 rate"),
        "dz_g": (float, "m/s", "pivot vertical speed"),
    },
    "trajectory": {
        "y_start": (float, "deg", "desired output angle at t=0"),
        "y_end": (float, "deg", "desired output angle at t=horizon"),
    },
    "gains": {
        "lam": (float, "1/s", "sliding-surface bandwidth"),
        "gamma": (list, "-", "three adaptation gains [k_s, b_s, k_s*z_s]"),
        "phi": (float, "rad/s", "boundary-layer half width"),
        "k_d0": (float, "-", "robust-gain adaptation rate, in (0, 1)"),
        "torque_limit": (float, "N*m", "actuator clip"),
    },
    "baseline": {
        "kp": (float, "1/s^2", "baseline PD proportional gain"),
        "kd": (float, "1/s", "baseline PD derivative gain"),
    },
    "spring": {
        "k_s": (float, "N/m", "true surrogate stiffness"),
        "b_s": (float, "N*s/m", "true surrogate damping"),
        "z_s": (float, "m", "true surrogate rest height"),
    },
    "guess": {
        "k_s": (float, "N/m", "controller's initial stiffness estimate"),
        "b_s": (float, "N*s/m", "controller's initial damping estimate"),
        "z_s": (float, "m", "controller's initial rest-height estimate"),
    },
    "disturbance": {
        "amplitude": (float, "N", "sinusoidal force residual amplitude"),
        "frequency": (float, "Hz", "sinusoidal force residual frequency"),
    },
    "cable": {
        "length": (float, "m", "span between supports"),
        "linear_mass": (float, "kg/m", "cable mass per length"),
        "segment_stiffness": (float, "N/m", "axial stiffness per segment"),
        "segment_damping": (float, "N*s/m", "axial damping per segment"),
        "n_segments": (int, "-", "lumped-mass discretization (>= 8)"),
        "support_height": (float, "m", "height of both end supports"),
        "stiffness_is_total": (bool, "-", "read stiffness as total EA/L instead"),
        "attach_index": (int, "-", "starting cable node for the pivot gripper"),
    },
    "grab": {
        "capture_radius": (float, "m", "max tip-to-cable distance for a catch"),
        "speed_limit": (float, "m/s", "max tip speed for a catch"),
    },
    "continuous": {
        "swings": (int, "-", "number of consecutive swings"),
        "pause": (float, "s", "brake pause between swings"),
    },
    "monte_carlo": {
        "n": (int, "-", "number of initial-condition draws"),
        "theta1_range": (list, "deg", "uniform range for theta1(0)"),
        "theta2_range": (list, "deg", "uniform range for theta2(0)"),
        "keep_logs": (bool, "-", "write the per-episode CSVs"),
    },
}


def _schema_help() -> str:
    lines = ["config keys (TOML sections; CLI flags override):"]
    for section, keys in CONFIG_SCHEMA.items():
        lines.append(f"  [{section}]")
        for key, (_, unit, desc) in keys.items():
            unit_s = f" [{unit}]" if unit != "-" else ""
            lines.append(f"    {key}{unit_s}: {desc}")
    return "\n".join(lines)


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(p, "rb") as fh:
            doc = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error in {path}: {exc}") from exc
    validate_config(doc)
    return doc


def validate_config(doc: dict) -> None:
    for section, content in doc.items():
        if section not in CONFIG_SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        if not isinstance(content, dict):
            raise ConfigError(f"section [{section}] must be a table")
        for key, value in content.items():
            if key not in CONFIG_SCHEMA[section]:
                raise ConfigError(f"unknown config key {section}.{key}")
            want, _, _ = CONFIG_SCHEMA[section][key]
            if want is float and isinstance(value, (int, float)) and not isinstance(value, bool):
                continue
            if want is int and isinstance(value, int) and not isinstance(value, bool):
                continue
            if want is bool and isinstance(value, bool):
                continue
            if want is str and isinstance(value, str):
                continue
            if want is list and isinstance(value, list):
                continue
            raise ConfigError(
                f"config key {section}.{key} must be {want.__name__}, "
                f"got {type(value).__name__}"
            )


def _get(doc: dict, section: str, key: str, default):
    return doc.get(section, {}).get(key, default)


def _parse_ic(text: str) -> RobotState:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 6:
        raise ConfigError(
            "--ic needs six comma-separated values: "
            "theta1,theta2,z_g,dtheta1,dtheta2,dz_g (deg, deg, m, deg/s, deg/s, m/s)"
        )
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"--ic contains a non-numeric entry: {text!r}") from exc
    return RobotState(
        [vals[0] * DEG, vals[1] * DEG, vals[2]],
        [vals[3] * DEG, vals[4] * DEG, vals[5]],
    )


def _parse_disturbance(text: str) -> DisturbanceSpec | None:
    if text.lower() in ("none", "off", ""):
        return None
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ConfigError('--disturbance needs "amplitude,frequency" (N, Hz)')
    try:
        amp, freq = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ConfigError(f"--disturbance contains a non-numeric entry: {text!r}") from exc
    if amp == 0.0:
        return None
    return DisturbanceSpec(amp, freq)


def build_scenario(doc: dict, args, controller: str) -> Scenario:
    """Merge config document and CLI overrides into an engine Scenario."""
    plant = args.plant or _get(doc, "run", "plant", "spring-damper")
    horizon = float(_get(doc, "run", "horizon", 1.1))

    if args.ic is not None:
        initial = _parse_ic(args.ic)
    else:
        ic_doc = doc.get("initial_state", {})
        initial = RobotState(
            [
                float(ic_doc.get("theta1", -35.0)) * DEG,
                float(ic_doc.get("theta2", -110.0)) * DEG,
                float(ic_doc.get("z_g", 1.84)),
            ],
            [
                float(ic_doc.get("dtheta1", 0.0)) * DEG,
                float(ic_doc.get("dtheta2", 0.0)) * DEG,
                float(ic_doc.get("dz_g", 0.0)),
            ],
        )

    gains_doc = doc.get("gains", {})
    gamma = gains_doc.get("gamma", [100.0, 10.0, 100.0])
    if not (isinstance(gamma, list) and len(gamma) == 3):
        raise ConfigError("config key gains.gamma must be a list of three numbers")
    torque_limit = (
        args.torque_limit
        if args.torque_limit is not None
        else float(gains_doc.get("torque_limit", 10.0))
    )
    try:
        gains = ControllerGains(
            lam=float(gains_doc.get("lam", 8.0)),
            gamma=tuple(float(g) for g in gamma),
            phi=float(gains_doc.get("phi", 0.4)),
            k_d0=float(gains_doc.get("k_d0", 0.5)),
            torque_limit=torque_limit,
        )
    except ValueError as exc:
        raise ConfigError(f"config section [gains]: {exc}") from exc

    if args.disturbance is not None:
        disturbance = _parse_disturbance(args.disturbance)
    elif "disturbance" in doc:
        disturbance = DisturbanceSpec(
            float(_get(doc, "disturbance", "amplitude", 10.0)),
            float(_get(doc, "disturbance", "frequency", 5.0)),
        )
    else:
        disturbance = None

    traj = None
    if "trajectory" in doc:
        traj = quintic_profile(
            float(_get(doc, "trajectory", "y_start", -97.0)) * DEG,
            float(_get(doc, "trajectory", "y_end", 94.0)) * DEG,
            horizon,
        )

    cable_doc = doc.get("cable", {})
    support_h = float(cable_doc.get("support_height", 2.0))
    length = float(cable_doc.get("length", 8.0))
    try:
        cable = CableParams(
            length=length,
            linear_mass=float(cable_doc.get("linear_mass", 0.25)),
            segment_stiffness=float(cable_doc.get("segment_stiffness", 785400.0)),
            segment_damping=float(cable_doc.get("segment_damping", 4.0)),
            n_segments=int(cable_doc.get("n_segments", 32)),
            support_left=(0.0, support_h),
            support_right=(length, support_h),
            stiffness_is_total=bool(cable_doc.get("stiffness_is_total", False)),
        )
    except ValueError as exc:
        raise ConfigError(f"config section [cable]: {exc}") from exc

    spring_doc = doc.get("spring", {})
    guess_doc = doc.get("guess", {})
    try:
        scenario = Scenario(
            plant=plant,
            controller=controller,
            initial_state=initial,
            gains=gains,
            true_spring=SpringDamperParams(
                float(spring_doc.get("k_s", 680.0)),
                float(spring_doc.get("b_s", 20.0)),
                float(spring_doc.get("z_s", 1.9)),
            ),
            initial_guess=SpringDamperParams(
                float(guess_doc.get("k_s", 400.0)),
                float(guess_doc.get("b_s", 12.0)),
                float(guess_doc.get("z_s", 1.6)),
            ),
            disturbance=disturbance,
            trajectory=traj,
            horizon=horizon,
            swings=args.swings or int(_get(doc, "continuous", "swings", 1)),
            pause=float(_get(doc, "continuous", "pause", 1.0)),
            dt=float(_get(doc, "run", "dt", 1e-4)),
            control_rate=float(_get(doc, "run", "control_rate", 1000.0)),
            log_rate=args.log_rate or float(_get(doc, "run", "log_rate", 1000.0)),
            seed=args.seed if args.seed is not None else int(_get(doc, "run", "seed", 0)),
            cable=cable,
            attach_index=cable_doc.get("attach_index"),
            capture_radius=float(_get(doc, "grab", "capture_radius", 0.10)),
            grab_speed_limit=float(_get(doc, "grab", "speed_limit", 3.0)),
            baseline_kp=float(_get(doc, "baseline", "kp", 20.0)),
            baseline_kd=float(_get(doc, "baseline", "kd", 5.0)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return scenario


def _requested_controllers(doc: dict, args) -> list[str]:
    choice = args.controller or _get(doc, "run", "controller", "both")
    if choice == "both":
        return list(CONTROLLER_KINDS)
    if choice not in CONTROLLER_KINDS:
        raise ConfigError(
            f"run.controller must be one of {CONTROLLER_KINDS + ('both',)}, got {choice!r}"
        )
    return [choice]


def _out_dir(doc: dict, args, default: str) -> Path:
    return Path(args.out or _get(doc, "run", "out", default))


def _classify(log: EpisodeLog) -> int:
    events = {ev for _, ev in log.events}
    if EV_SINGULARITY in events:
        return EXIT_SINGULAR
    if EV_GRAB_FAILURE in events:
        return EXIT_GRAB
    return EXIT_OK


def _station_header(scenario: Scenario) -> str:
    """One-line record of the invented experiment choices."""
    if scenario.plant == "full-cable":
        attach = (
            scenario.attach_index
            if scenario.attach_index is not None
            else _pick_attach_index(scenario.cable, scenario.swings)
        )
        station = attach * scenario.cable.length / scenario.cable.n_segments
        return (
            f"# plant=full-cable support_height={scenario.cable.support_left[1]:.2f} m "
            f"attach_node={attach} station={station:.2f} m "
            f"capture_radius={scenario.capture_radius:.2f} m "
            f"speed_limit={scenario.grab_speed_limit:.1f} m/s"
        )
    sd = scenario.true_spring
    return (
        f"# plant=spring-damper k_s={sd.k_s:g} b_s={sd.b_s:g} z_s={sd.z_s:g} "
        f"capture_radius={scenario.capture_radius:.2f} m "
        f"speed_limit={scenario.grab_speed_limit:.1f} m/s"
    )


def _metrics_line(tag: str, log: EpisodeLog) -> str:
    m = log.metrics
    grab = "grab=ok" if m.success else "grab=FAILED"
    return (
        f"{tag}: rmse_y={m.rmse_y:.2f} deg rmse_ydot={m.rmse_ydot:.2f} deg/s "
        f"rms_u={m.rms_u:.2f} N*m final_y_error={m.final_y_error:.2f} deg {grab}"
    )


def _slug(controller: str) -> str:
    return controller.replace("-", "_")


def cmd_swing(args) -> int:
    doc = load_config(args.config)
    controllers = _requested_controllers(doc, args)
    scenarios = {c: build_scenario(doc, args, c) for c in controllers}

    out = _out_dir(doc, args, "runs/swing")
    out.mkdir(parents=True, exist_ok=True)

    lines = [_station_header(next(iter(scenarios.values())))]
    logs = {}
    for controller, scenario in scenarios.items():
        log = run_swing(scenario)
        logs[controller] = log
        stem = out / f"swing_{_slug(controller)}"
        log.to_csv(stem.with_suffix(".csv"))
        log.events_to_csv(out / f"swing_{_slug(controller)}_events.csv")
        lines.append(_metrics_line(controller, log))

    summary = "\n".join(lines) + "\n"
    (out / "summary.txt").write_text(summary, encoding="utf-8")
    sys.stdout.write(summary)

    deciding = "adaptive-robust" if "adaptive-robust" in logs else controllers[0]
    return _classify(logs[deciding])


def cmd_monte_carlo(args) -> int:
    doc = load_config(args.config)
    scenario = build_scenario(doc, args, "adaptive-robust")
    mc_doc = doc.get("monte_carlo", {})
    n = args.runs or int(mc_doc.get("n", 20))
    keep_logs = bool(mc_doc.get("keep_logs", True))

    def _range(key, default):
        pair = mc_doc.get(key, default)
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ConfigError(f"config key monte_carlo.{key} must be [lo, hi] in degrees")
        return float(pair[0]) * DEG, float(pair[1]) * DEG

    ranges = (
        _range("theta1_range", [-60.0, -30.0]),
        _range("theta2_range", [-120.0, -60.0]),
    )

    out = _out_dir(doc, args, "runs/monte_carlo")
    out.mkdir(parents=True, exist_ok=True)

    result = monte_carlo(scenario, ranges=ranges, n=n, seed=scenario.seed, keep_logs=keep_logs)

    if keep_logs:
        episodes = out / "episodes"
        episodes.mkdir(exist_ok=True)
        for (k, controller), log in sorted(result.logs.items()):
            stem = episodes / f"run_{k:03d}_{_slug(controller)}"
            log.to_csv(stem.with_suffix(".csv"))
            log.events_to_csv(episodes / f"run_{k:03d}_{_slug(controller)}_events.csv")

    write_runs_csv(out / "runs.csv", result)
    write_aggregate_csv(out / "aggregate.csv", result)

    lines = [
        _station_header(scenario),
        f"# n={n} seed={scenario.seed} "
        f"theta1 in [{ranges[0][0] / DEG:.0f}, {ranges[0][1] / DEG:.0f}] deg, "
        f"theta2 in [{ranges[1][0] / DEG:.0f}, {ranges[1][1] / DEG:.0f}] deg",
        f"{'metric':<14}{'adaptive-robust':>18}{'feedback-linearization':>24}",
    ]
    agg = result.aggregate
    for metric, unit in (
        ("rmse_y", "deg"),
        ("rmse_ydot", "deg/s"),
        ("rms_u", "N*m"),
    ):
        lines.append(
            f"{metric:<14}{agg['adaptive-robust'][metric]:>14.2f} {unit:<3}"
            f"{agg['feedback-linearization'][metric]:>20.2f} {unit}"
        )
    lines.append(
        f"{'successes':<14}{result.success_count('adaptive-robust'):>14d}/{n}"
        f"{result.success_count('feedback-linearization'):>19d}/{n}"
    )
    summary = "\n".join(lines) + "\n"
    (out / "summary.txt").write_text(summary, encoding="utf-8")
    sys.stdout.write(summary)
    return EXIT_OK


def cmd_continuous(args) -> int:
    doc = load_config(args.config)
    controllers = _requested_controllers(doc, args)
    if len(controllers) != 1:
        raise ConfigError(
            "continuous runs take a single controller; set run.controller or --controller"
        )
    scenario = build_scenario(doc, args, controllers[0])
    if scenario.swings < 1:
        raise ConfigError("config key continuous.swings must be >= 1")

    out = _out_dir(doc, args, "runs/continuous")
    out.mkdir(parents=True, exist_ok=True)

    log = run_continuous(scenario)
    stem = out / f"continuous_{_slug(controllers[0])}"
    log.to_csv(stem.with_suffix(".csv"))
    log.events_to_csv(out / f"continuous_{_slug(controllers[0])}_events.csv")

    swing_rows = per_swing_metrics(log)
    lines = [
        _station_header(scenario),
        f"{'swing':<7}{'rmse_y [deg]':>14}{'rms_u [N*m]':>14}{'final err [deg]':>17}",
    ]
    for i, m in enumerate(swing_rows):
        lines.append(f"{i:<7d}{m.rmse_y:>14.2f}{m.rms_u:>14.2f}{m.final_y_error:>17.2f}")
    progress = horizontal_progress(log, scenario)
    lines.append(f"progress={progress:.2f} m over {len(swing_rows)} swing(s)")

    code = _classify(log)
    if code == EXIT_GRAB:
        failed_at = min(t for t, ev in log.events if ev == EV_GRAB_FAILURE)
        # every swing opens with a release event, so the count up to the
        # failure time identifies the failing swing
        failing_swing = (
            sum(1 for t, ev in log.events if ev == EV_RELEASE and t < failed_at) - 1
        )
        lines.append(f"grab FAILED on swing {failing_swing}")

    summary = "\n".join(lines) + "\n"
    (out / "summary.txt").write_text(summary, encoding="utf-8")
    sys.stdout.write(summary)
    return code


def cmd_validate(args) -> int:
    from . import validate as _validate

    results = _validate.run_all(fast=args.fast)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        sys.stdout.write(f"{status} {r.name}: {r.detail} ({r.elapsed:.1f} s)\n")
        ok &= r.passed
    return EXIT_OK if ok else EXIT_CONFIG


def write_runs_csv(path: Path, result) -> None:
    """Per-run metrics table; angles in degrees, torques in N*m."""
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            ["run", "controller", "theta1_deg", "theta2_deg",
             "rmse_y", "rmse_ydot", "rms_u", "final_y_error", "success"]
        )
        for run in result.runs:
            for controller, m in run.metrics.items():
                w.writerow(
                    [run.index, controller,
                     repr(run.theta1 / DEG), repr(run.theta2 / DEG),
                     repr(m.rmse_y), repr(m.rmse_ydot), repr(m.rms_u),
                     repr(m.final_y_error), int(m.success)]
                )


def read_runs_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        expected = ["run", "controller", "theta1_deg", "theta2_deg",
                    "rmse_y", "rmse_ydot", "rms_u", "final_y_error", "success"]
        if reader.fieldnames != expected:
            raise ValueError(f"unexpected runs.csv header: {reader.fieldnames}")
        rows = []
        for row in reader:
            rows.append(
                {
                    "run": int(row["run"]),
                    "controller": row["controller"],
                    "theta1_deg": float(row["theta1_deg"]),
                    "theta2_deg": float(row["theta2_deg"]),
                    "rmse_y": float(row["rmse_y"]),
                    "rmse_ydot": float(row["rmse_ydot"]),
                    "rms_u": float(row["rms_u"]),
                    "final_y_error": float(row["final_y_error"]),
                    "success": bool(int(row["success"])),
                }
            )
        return rows


def write_aggregate_csv(path: Path, result) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["controller", "rmse_y", "rmse_ydot", "rms_u", "successes"])
        for controller in CONTROLLER_KINDS:
            agg = result.aggregate[controller]
            w.writerow(
                [controller, repr(agg["rmse_y"]), repr(agg["rmse_ydot"]),
                 repr(agg["rms_u"]), int(agg["successes"])]
            )


def read_aggregate_csv(path) -> dict[str, dict[str, float]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        expected = ["controller", "rmse_y", "rmse_ydot", "rms_u", "successes"]
        if reader.fieldnames != expected:
            raise ValueError(f"unexpected aggregate.csv header: {reader.fieldnames}")
        out = {}
        for row in reader:
            out[row["controller"]] = {
                "rmse_y": float(row["rmse_y"]),
                "rmse_ydot": float(row["rmse_ydot"]),
                "rms_u": float(row["rms_u"]),
                "successes": float(row["successes"]),
            }
        return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brachiation-lab",
        description="Deterministic swing/grab simulation for a two-link cable-borne robot.",
        epilog=_schema_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="TOML experiment file (see key listing below)")
        p.add_argument("--out", help="output directory (overrides run.out)")
        p.add_argument("--seed", type=int, help="seed override [-]")
        p.add_argument("--plant", choices=PLANT_KINDS, help="plant override")
        p.add_argument(
            "--controller",
            choices=CONTROLLER_KINDS + ("both",),
            help="controller override",
        )
        p.add_argument(
            "--ic",
            help='initial state "theta1,theta2,z_g,dtheta1,dtheta2,dz_g" '
            "(deg, deg, m, deg/s, deg/s, m/s)",
        )
        p.add_argument(
            "--disturbance",
            help='force residual "amplitude,frequency" (N, Hz); "none" disables',
        )
        p.add_argument("--swings", type=int, help="number of swings [-]")
        p.add_argument("--torque-limit", type=float, help="actuator clip [N*m]")
        p.add_argument("--log-rate", type=float, help="CSV sample rate [Hz]")

    p_swing = sub.add_parser("swing", help="single swing, one or both controllers")
    common(p_swing)
    p_swing.set_defaults(func=cmd_swing)

    p_mc = sub.add_parser("monte-carlo", help="initial-condition study, both controllers")
    common(p_mc)
    p_mc.add_argument("-n", "--runs", type=int, help="number of draws [-]")
    p_mc.set_defaults(func=cmd_monte_carlo)

    p_cont = sub.add_parser("continuous", help="consecutive swings with pauses")
    common(p_cont)
    p_cont.set_defaults(func=cmd_continuous)

    p_val = sub.add_parser("validate", help="run the oracle/invariant self-checks")
    p_val.add_argument("--fast", action="store_true", help="reduced sample counts")
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
