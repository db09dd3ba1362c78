/**
 * Figure kinds over episode/aggregate CSVs.  Every renderer is a pure
 * function from parsed logs to an SVG string; file handling lives in the CLI.
 */
import {
  EpisodeLog,
  EventMark,
  column,
} from "./csv.js";
import {
  HEIGHT,
  MARGIN,
  PALETTE,
  Series,
  axesPanel,
  document,
  legend,
} from "./svg.js";

export const FIGURE_KINDS = [
  "motion",
  "tracking",
  "boundary",
  "estimates",
  "torque",
  "phase",
  "monte-carlo-overlay",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface Styling {
  /** boundary-layer half width drawn on boundary figures */
  phi: number;
  /** link length used to reconstruct arm poses on motion figures */
  linkLength: number;
}

export const DEFAULT_STYLE: Styling = { phi: 0.4, linkLength: 0.71 };

const DEG = 180 / Math.PI;

export interface LabeledLog {
  label: string;
  log: EpisodeLog;
}

export function renderTracking(logs: LabeledLog[], style = DEFAULT_STYLE): string {
  const first = logs[0].log;
  const t = column(first, "t");
  const series: Series[] = [
    {
      xs: t,
      ys: column(first, "y_d").map((v) => v * DEG),
      color: "#000",
      dashed: true,
      className: "desired-overlay",
    },
  ];
  logs.forEach((l, i) => {
    series.push({
      xs: column(l.log, "t"),
      ys: column(l.log, "y").map((v) => v * DEG),
      color: PALETTE[i % PALETTE.length],
    });
  });
  const body =
    axesPanel(series, {
      title: "Output tracking",
      xLabel: "t [s]",
      yLabel: "y [deg]",
    }) +
    "\n" +
    legend(
      [
        { label: "desired", color: "#000", dashed: true },
        ...logs.map((l, i) => ({ label: l.label, color: PALETTE[i % PALETTE.length] })),
      ],
    );
  return document(body);
}

export function renderBoundary(log: EpisodeLog, style = DEFAULT_STYLE): string {
  const t = column(log, "t");
  const top = axesPanel(
    [{ xs: t, ys: column(log, "s"), color: PALETTE[0] }],
    {
      title: "Sliding variable and boundary layer",
      xLabel: "",
      yLabel: "s [rad/s]",
      hLines: [
        { y: style.phi, className: "boundary-line" },
        { y: -style.phi, className: "boundary-line" },
      ],
      height: HEIGHT / 2 + 20,
    },
  );
  const bottom = axesPanel(
    [{ xs: t, ys: column(log, "k_d"), color: PALETTE[3] }],
    {
      title: "Robust gain",
      xLabel: "t [s]",
      yLabel: "k_d",
      yOffset: HEIGHT / 2 + 20,
      height: HEIGHT / 2 - 20,
    },
  );
  return document(top + "\n" + bottom, HEIGHT);
}

export function renderEstimates(log: EpisodeLog, style = DEFAULT_STYLE): string {
  const t = column(log, "t");
  const panels: [string, string, string][] = [
    ["p_hat_ks", "k_s [N/m]", "Stiffness estimate"],
    ["p_hat_bs", "b_s [N s/m]", "Damping estimate"],
    ["p_hat_kszs", "k_s z_s [N]", "Rest-height product estimate"],
  ];
  const h = 220;
  const body = panels
    .map(([col, label, title], i) =>
      axesPanel(
        [{ xs: t, ys: column(log, col as any), color: PALETTE[i] }],
        {
          title,
          xLabel: i === 2 ? "t [s]" : "",
          yLabel: label,
          height: h,
          yOffset: i * h,
        },
      ),
    )
    .join("\n");
  return document(body, 3 * h);
}

export function renderTorque(logs: LabeledLog[], style = DEFAULT_STYLE): string {
  const series: Series[] = logs.map((l, i) => ({
    xs: column(l.log, "t"),
    ys: column(l.log, "u"),
    color: PALETTE[i % PALETTE.length],
  }));
  const body =
    axesPanel(series, {
      title: "Joint torque",
      xLabel: "t [s]",
      yLabel: "u [N m]",
    }) +
    "\n" +
    legend(logs.map((l, i) => ({ label: l.label, color: PALETTE[i % PALETTE.length] })));
  return document(body);
}

export function renderPhase(log: EpisodeLog, style = DEFAULT_STYLE): string {
  const body = axesPanel(
    [
      {
        xs: column(log, "y_d").map((v) => v * DEG),
        ys: column(log, "yd_dot").map((v) => v * DEG),
        color: "#d62728",
        dashed: true,
        className: "desired-overlay",
      },
      {
        xs: column(log, "y").map((v) => v * DEG),
        ys: column(log, "ydot").map((v) => v * DEG),
        color: PALETTE[0],
      },
    ],
    {
      title: "Phase portrait",
      xLabel: "y [deg]",
      yLabel: "dy/dt [deg/s]",
    },
  );
  return document(body);
}

export function renderMotion(log: EpisodeLog, style = DEFAULT_STYLE): string {
  const t = column(log, "t");
  const th1 = column(log, "theta1");
  const th2 = column(log, "theta2");
  const z = column(log, "z_g");
  const l = style.linkLength;

  const series: Series[] = [];
  const tipX: number[] = [];
  const tipZ: number[] = [];
  for (let i = 0; i < t.length; i++) {
    const jx = l * Math.sin(th1[i]);
    const jz = z[i] - l * Math.cos(th1[i]);
    tipX.push(jx + l * Math.sin(th1[i] + th2[i]));
    tipZ.push(jz - l * Math.cos(th1[i] + th2[i]));
  }
  // ghosted arm poses, one per ~10% of the horizon
  const stride = Math.max(1, Math.floor((t.length - 1) / 10));
  for (let i = 0; i < t.length; i += stride) {
    const jx = l * Math.sin(th1[i]);
    const jz = z[i] - l * Math.cos(th1[i]);
    series.push({
      xs: [0, jx, tipX[i]],
      ys: [z[i], jz, tipZ[i]],
      color: "#555",
      opacity: 0.15 + (0.85 * i) / t.length,
      width: 2,
    });
  }
  series.push({ xs: tipX, ys: tipZ, color: PALETTE[0], width: 1.2 });
  const body = axesPanel(series, {
    title: "Arm motion (pivot frame)",
    xLabel: "x [m]",
    yLabel: "z [m]",
  });
  return document(body);
}

export function renderMonteCarloOverlay(logs: LabeledLog[], style = DEFAULT_STYLE): string {
  if (logs.length === 0) throw new Error("monte-carlo-overlay needs at least one log");
  const series: Series[] = logs.map((l) => ({
    xs: column(l.log, "t"),
    ys: column(l.log, "y").map((v) => v * DEG),
    color: PALETTE[0],
    width: 0.9,
    opacity: 0.45,
  }));
  series.push({
    xs: column(logs[0].log, "t"),
    ys: column(logs[0].log, "y_d").map((v) => v * DEG),
    color: "#000",
    dashed: true,
    className: "desired-overlay",
    width: 2,
  });
  const body = axesPanel(series, {
    title: `Output trajectories, ${logs.length} runs`,
    xLabel: "t [s]",
    yLabel: "y [deg]",
  });
  return document(body);
}

/** release->grab windows of a continuous log, one tracking panel per swing. */
export function renderContinuousTracking(
  log: EpisodeLog,
  events: EventMark[],
  style = DEFAULT_STYLE,
): string {
  const releases = events.filter((e) => e.event === "release").map((e) => e.t);
  const ends = events
    .filter((e) => e.event === "grab" || e.event === "grab_failure")
    .map((e) => e.t)
    .sort((a, b) => a - b);
  const t = column(log, "t");
  const y = column(log, "y");
  const yd = column(log, "y_d");

  const h = 200;
  const panels: string[] = [];
  releases.forEach((t0, k) => {
    const t1 = k < ends.length ? ends[k] : t[t.length - 1];
    const xs: number[] = [];
    const ys: number[] = [];
    const yds: number[] = [];
    for (let i = 0; i < t.length; i++) {
      if (t[i] >= t0 - 1e-12 && t[i] <= t1 + 1e-12) {
        xs.push(t[i]);
        ys.push(y[i] * DEG);
        yds.push(yd[i] * DEG);
      }
    }
    panels.push(
      axesPanel(
        [
          { xs, ys: yds, color: "#000", dashed: true, className: "desired-overlay" },
          { xs, ys, color: PALETTE[0] },
        ],
        {
          title: `Swing ${k}`,
          xLabel: k === releases.length - 1 ? "t [s]" : "",
          yLabel: "y [deg]",
          height: h,
          yOffset: k * h,
        },
      ),
    );
  });
  return document(panels.join("\n"), Math.max(1, releases.length) * h);
}
