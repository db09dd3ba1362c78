"""Desired output trajectories: generated quintic profiles or file-loaded references.

The controller consumes only (y_d, yd_dot, yd_ddot); the default reference is a
zero-boundary quintic through the nominal swing endpoints, and externally
optimized references can be imported from CSV (`t,y_d,yd_dot,yd_ddot`).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

from scipy.interpolate import CubicHermiteSpline

# Nominal swing in output coordinates: y = theta1 + theta2/2 at the release and
# catch configurations, with the published 1.1 s horizon.
DEFAULT_Y0 = math.radians(-97.0)
DEFAULT_YF = math.radians(94.0)
DEFAULT_HORIZON = 1.1

TRAJECTORY_HEADER = ["t", "y_d", "yd_dot", "yd_ddot"]


class TrajectoryFormatError(ValueError):
    """Malformed trajectory file (bad header, bad row, or non-monotone time)."""


@dataclass(frozen=True)
class OutputTarget:
    y_d: float
    yd_dot: float
    yd_ddot: float


@dataclass(frozen=True)
class OutputTrajectory:
    """Immutable reference trajectory over [0, horizon]; sampler pure and shareable."""

    horizon: float
    provenance: str  # "generated" | "loaded"
    _sampler: Callable[[float], OutputTarget] = field(repr=False)

    def sample(self, t: float) -> OutputTarget:
        """Clamp t below 0 to the start; hold the final pose (zero rates) beyond T."""
        if t >= self.horizon:
            tgt = self._sampler(self.horizon)
            return OutputTarget(tgt.y_d, 0.0, 0.0)
        return self._sampler(max(t, 0.0))


def sample(traj: OutputTrajectory, t: float) -> OutputTarget:
    return traj.sample(t)


def quintic_profile(y0: float, yf: float, T: float) -> OutputTrajectory:
    """Unique quintic with y(0)=y0, y(T)=yf and zero end velocity/acceleration."""
    if T <= 0.0:
        raise ValueError("horizon must be positive")
    dy = yf - y0

    def sampler(t: float) -> OutputTarget:
        s = t / T
        if s >= 1.0:
            return OutputTarget(yf, 0.0, 0.0)
        y = y0 + dy * s**3 * (10.0 - 15.0 * s + 6.0 * s**2)
        yd = dy * 30.0 * s**2 * (1.0 - 2.0 * s + s**2) / T
        ydd = dy * 60.0 * s * (1.0 - 3.0 * s + 2.0 * s**2) / T**2
        return OutputTarget(y, yd, ydd)

    return OutputTrajectory(horizon=T, provenance="generated", _sampler=sampler)


def default_swing_profile(T: float = DEFAULT_HORIZON) -> OutputTrajectory:
    return quintic_profile(DEFAULT_Y0, DEFAULT_YF, T)


def load_trajectory(path) -> OutputTrajectory:
    """Piecewise-cubic (Hermite) reference from a `t,y_d,yd_dot,yd_ddot` CSV."""
    ts, ys, yds, ydds = [], [], [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != TRAJECTORY_HEADER:
            raise TrajectoryFormatError(
                f"{path}: expected header {','.join(TRAJECTORY_HEADER)!r}, got {header!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                t, y, yd, ydd = (float(v) for v in row)
            except ValueError as exc:
                raise TrajectoryFormatError(f"{path}:{lineno}: non-numeric row {row!r}") from exc
            if ts and t <= ts[-1]:
                raise TrajectoryFormatError(
                    f"{path}:{lineno}: time must be strictly increasing "
                    f"({t} after {ts[-1]})"
                )
            ts.append(t)
            ys.append(y)
            yds.append(yd)
            ydds.append(ydd)
    if len(ts) < 2:
        raise TrajectoryFormatError(f"{path}: need at least two rows")

    y_spline = CubicHermiteSpline(ts, ys, yds)
    yd_spline = CubicHermiteSpline(ts, yds, ydds)
    ydd_fn = yd_spline.derivative()
    t0, t1 = ts[0], ts[-1]

    def sampler(t: float) -> OutputTarget:
        tc = min(max(t, t0), t1)
        return OutputTarget(float(y_spline(tc)), float(yd_spline(tc)), float(ydd_fn(tc)))

    return OutputTrajectory(horizon=t1, provenance="loaded", _sampler=sampler)


def save_trajectory(traj: OutputTrajectory, path, rate_hz: float = 1000.0) -> None:
    """Sample a trajectory to the CSV schema (UTF-8, LF) at a fixed rate."""
    n = round(traj.horizon * rate_hz)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRAJECTORY_HEADER)
        for k in range(n + 1):
            t = min(k / rate_hz, traj.horizon)
            tgt = traj.sample(t)
            writer.writerow(
                ["%.12g" % t, "%.12g" % tgt.y_d, "%.12g" % tgt.yd_dot, "%.12g" % tgt.yd_ddot]
            )
