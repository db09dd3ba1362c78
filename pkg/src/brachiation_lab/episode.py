"""Episode logs, summary metrics, and their deterministic CSV forms.

Floats are written with shortest round-trip repr, UTF-8, LF line endings, so a
rerun with the same scenario and seed produces byte-identical files.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

LOG_COLUMNS = [
    "t", "theta1", "theta2", "z_g", "dtheta1", "dtheta2", "dz_g",
    "y", "ydot", "y_d", "yd_dot", "u", "u_raw", "s", "s_delta", "k_d",
    "p_hat_ks", "p_hat_bs", "p_hat_kszs", "F_c", "F_d", "V",
]
EVENT_COLUMNS = ["t", "event"]

# Event vocabulary used by the engine.
EV_RELEASE = "release"
EV_GRAB = "grab"
EV_GRAB_FAILURE = "grab_failure"
EV_SWAP = "swap"
EV_PAUSE_START = "pause_start"
EV_PAUSE_END = "pause_end"
EV_SATURATION = "saturation"
EV_SINGULARITY = "singularity_abort"


@dataclass(frozen=True)
class Metrics:
    rmse_y: float        # deg
    rmse_ydot: float     # deg/s
    rms_u: float         # N*m
    final_y_error: float  # deg
    success: bool


def _fmt(x: float) -> str:
    if math.isnan(x):
        return ""
    return repr(float(x))


@dataclass
class EpisodeLog:
    """Fixed-rate rows (LOG_COLUMNS order) + event markers + summary metrics."""

    rows: np.ndarray
    events: list[tuple[float, str]]
    metrics: Metrics | None = None

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float)
        if self.rows.ndim != 2 or self.rows.shape[1] != len(LOG_COLUMNS):
            raise ValueError(f"rows must be (n, {len(LOG_COLUMNS)})")

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, LOG_COLUMNS.index(name)]

    @property
    def t(self) -> np.ndarray:
        return self.rows[:, 0]

    def pause_mask(self) -> np.ndarray:
        """True for rows inside a pause window (excluded from metrics)."""
        mask = np.zeros(len(self.rows), dtype=bool)
        start = None
        for t, ev in self.events:
            if ev == EV_PAUSE_START:
                start = t
            elif ev == EV_PAUSE_END and start is not None:
                # the row logged exactly at pause end is the first sample of the
                # next swing (post-handoff coordinates), so keep it out
                mask |= (self.t > start) & (self.t < t)
                start = None
        if start is not None:  # pause ran to the end of the log
            mask |= self.t > start
        return mask

    def to_csv(self, path) -> None:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(LOG_COLUMNS)
            for row in self.rows:
                writer.writerow([_fmt(v) for v in row])

    def events_to_csv(self, path) -> None:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(EVENT_COLUMNS)
            for t, ev in self.events:
                writer.writerow([_fmt(t), ev])

    @classmethod
    def from_csv(cls, path, events_path=None) -> "EpisodeLog":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != LOG_COLUMNS:
                raise ValueError(f"{path}: unexpected log header {header!r}")
            rows = [
                [float(v) if v else math.nan for v in row] for row in reader if row
            ]
        events: list[tuple[float, str]] = []
        if events_path is not None:
            with open(events_path, newline="", encoding="utf-8") as fh:
                reader = csv.reader(fh)
                header = next(reader, None)
                if header != EVENT_COLUMNS:
                    raise ValueError(f"{events_path}: unexpected events header {header!r}")
                events = [(float(t), ev) for t, ev in reader]
        return cls(np.array(rows, dtype=float).reshape(-1, len(LOG_COLUMNS)), events)


def compute_metrics(log: EpisodeLog, success: bool | None = None) -> Metrics:
    """Tracking RMSEs in degrees, torque RMS, final error; pauses excluded.

    success defaults to "a grab event exists and no failure/abort events do",
    which matches how the engine stamps logs.
    """
    if len(log.rows) == 0:
        raise ValueError("empty episode log")
    keep = ~log.pause_mask()
    if not keep.any():
        raise ValueError("log contains only pause rows")
    err_y = log.column("y_d")[keep] - log.column("y")[keep]
    err_yd = log.column("yd_dot")[keep] - log.column("ydot")[keep]
    u = log.column("u")[keep]
    deg = 180.0 / math.pi
    if success is None:
        names = [ev for _, ev in log.events]
        success = (
            EV_GRAB in names
            and EV_GRAB_FAILURE not in names
            and EV_SINGULARITY not in names
        )
    return Metrics(
        rmse_y=deg * float(np.sqrt(np.mean(err_y**2))),
        rmse_ydot=deg * float(np.sqrt(np.mean(err_yd**2))),
        rms_u=float(np.sqrt(np.mean(u**2))),
        final_y_error=deg * float(abs(err_y[-1])),
        success=bool(success),
    )
