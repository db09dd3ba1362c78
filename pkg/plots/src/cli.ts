#!/usr/bin/env node
/**
 * plots — SVG figure generation over simulator CSV output.
 *
 *   plots render-all <run-dir> [--phi <x>]
 *   plots render --kind <kind> --in <csv> [--in <csv> ...] [--events <csv>]
 *                --out <file> [--phi <x>]
 *
 * render-all inspects the directory layout to decide what it is looking at:
 * a single-swing run (swing_*.csv), a batch run (aggregate.csv + episodes/),
 * or a continuous run (continuous_*.csv).  Exit 0 on success, 1 on bad
 * input (missing files, malformed CSV, unknown kind).
 */
import * as fs from "node:fs";
import * as path from "node:path";
import { pathToFileURL } from "node:url";

import { EpisodeLog, EventMark, SchemaError, parseEpisodeCsv, parseEventsCsv } from "./csv.js";
import {
  DEFAULT_STYLE,
  FIGURE_KINDS,
  FigureKind,
  LabeledLog,
  Styling,
  renderBoundary,
  renderContinuousTracking,
  renderEstimates,
  renderMonteCarloOverlay,
  renderMotion,
  renderPhase,
  renderTorque,
  renderTracking,
} from "./figures.js";

const USAGE = `usage:
  plots render-all <run-dir> [--phi <x>]
  plots render --kind <kind> --in <csv> [--in <csv> ...] [--events <csv>] --out <file> [--phi <x>]

kinds: ${FIGURE_KINDS.join(", ")}`;

interface ParsedArgs {
  command: string;
  positional: string[];
  kind?: string;
  inputs: string[];
  events?: string;
  out?: string;
  phi?: number;
}

export function parseArgs(argv: string[]): ParsedArgs {
  if (argv.length === 0) throw new CliError(USAGE);
  const parsed: ParsedArgs = { command: argv[0], positional: [], inputs: [] };
  let i = 1;
  const need = (flag: string): string => {
    i += 1;
    if (i >= argv.length) throw new CliError(`${flag} expects a value`);
    return argv[i];
  };
  for (; i < argv.length; i++) {
    const a = argv[i];
    if (a === "--kind") parsed.kind = need(a);
    else if (a === "--in") parsed.inputs.push(need(a));
    else if (a === "--events") parsed.events = need(a);
    else if (a === "--out") parsed.out = need(a);
    else if (a === "--phi") {
      const v = Number(need(a));
      if (!Number.isFinite(v)) throw new CliError("--phi expects a number");
      parsed.phi = v;
    } else if (a === "--help" || a === "-h") throw new CliError(USAGE);
    else if (a.startsWith("--")) throw new CliError(`unknown flag ${a}\n${USAGE}`);
    else parsed.positional.push(a);
  }
  return parsed;
}

export class CliError extends Error {}

function rethrowWithFile<T>(file: string, parse: (text: string) => T): T {
  try {
    return parse(fs.readFileSync(file, "utf-8"));
  } catch (err) {
    if (err instanceof SchemaError) throw new CliError(`${file}: ${err.message}`);
    throw err;
  }
}

function readEpisode(file: string): EpisodeLog {
  if (!fs.existsSync(file)) throw new CliError(`missing input file: ${file}`);
  return rethrowWithFile(file, parseEpisodeCsv);
}

function readEvents(file: string): EventMark[] {
  if (!fs.existsSync(file)) throw new CliError(`missing events file: ${file}`);
  return rethrowWithFile(file, parseEventsCsv);
}

function labelFor(file: string): string {
  const base = path.basename(file, ".csv");
  if (base.includes("feedback_linearization")) return "feedback linearization";
  if (base.includes("adaptive_robust")) return "adaptive robust";
  return base;
}

export function renderKind(
  kind: FigureKind,
  inputs: string[],
  eventsFile: string | undefined,
  style: Styling,
): string {
  if (inputs.length === 0) throw new CliError("render needs at least one --in");
  const labeled: LabeledLog[] = inputs.map((f) => ({ label: labelFor(f), log: readEpisode(f) }));
  switch (kind) {
    case "motion":
      return renderMotion(labeled[0].log, style);
    case "tracking":
      return renderTracking(labeled, style);
    case "boundary":
      return renderBoundary(labeled[0].log, style);
    case "estimates":
      return renderEstimates(labeled[0].log, style);
    case "torque":
      return renderTorque(labeled, style);
    case "phase":
      return renderPhase(labeled[0].log, style);
    case "monte-carlo-overlay":
      return renderMonteCarloOverlay(labeled, style);
    default: {
      const never: never = kind;
      throw new CliError(`unknown kind ${never}`);
    }
  }
}

function writeOut(file: string, svg: string): void {
  fs.mkdirSync(path.dirname(path.resolve(file)), { recursive: true });
  fs.writeFileSync(file, svg, "utf-8");
}

/** episode CSVs in a directory, *_events.csv excluded, sorted by name */
function episodeFiles(dir: string, prefix: string): string[] {
  if (!fs.existsSync(dir)) return [];
  return fs
    .readdirSync(dir)
    .filter((f) => f.startsWith(prefix) && f.endsWith(".csv") && !f.endsWith("_events.csv"))
    .sort()
    .map((f) => path.join(dir, f));
}

function preferAdaptive(files: string[]): string {
  return files.find((f) => f.includes("adaptive_robust")) ?? files[0];
}

export function renderAll(dir: string, style: Styling): string[] {
  if (!fs.existsSync(dir)) throw new CliError(`no such directory: ${dir}`);

  const swings = episodeFiles(dir, "swing_");
  const continuous = episodeFiles(dir, "continuous_");
  const episodesDir = path.join(dir, "episodes");
  const isBatch = fs.existsSync(path.join(dir, "aggregate.csv")) && fs.existsSync(episodesDir);

  const written: string[] = [];
  const emit = (name: string, svg: string) => {
    const file = path.join(dir, name);
    writeOut(file, svg);
    written.push(file);
  };

  if (isBatch) {
    const adaptive = episodeFiles(episodesDir, "run_").filter((f) =>
      f.includes("adaptive_robust"),
    );
    const baseline = episodeFiles(episodesDir, "run_").filter((f) =>
      f.includes("feedback_linearization"),
    );
    if (adaptive.length === 0 && baseline.length === 0) {
      throw new CliError(`no episode CSVs under ${episodesDir} (was the run made with keep_logs?)`);
    }
    if (adaptive.length > 0) {
      emit(
        "overlay.svg",
        renderMonteCarloOverlay(
          adaptive.map((f) => ({ label: labelFor(f), log: readEpisode(f) })),
          style,
        ),
      );
      emit("phase_adaptive_robust.svg", renderPhase(readEpisode(adaptive[0]), style));
    }
    if (baseline.length > 0) {
      emit("phase_feedback_linearization.svg", renderPhase(readEpisode(baseline[0]), style));
    }
    return written;
  }

  if (continuous.length > 0) {
    const file = preferAdaptive(continuous);
    const log = readEpisode(file);
    const events = readEvents(file.replace(/\.csv$/, "_events.csv"));
    emit("continuous_tracking.svg", renderContinuousTracking(log, events, style));
    emit("continuous_torque.svg", renderTorque([{ label: labelFor(file), log }], style));
    emit("continuous_motion.svg", renderMotion(log, style));
    return written;
  }

  if (swings.length > 0) {
    const labeled = swings.map((f) => ({ label: labelFor(f), log: readEpisode(f) }));
    const lead = labeled.find((l) => l.label === "adaptive robust") ?? labeled[0];
    emit("motion.svg", renderMotion(lead.log, style));
    emit("tracking.svg", renderTracking(labeled, style));
    emit("boundary.svg", renderBoundary(lead.log, style));
    emit("estimates.svg", renderEstimates(lead.log, style));
    emit("torque.svg", renderTorque(labeled, style));
    return written;
  }

  throw new CliError(
    `${dir} does not look like a run directory: expected swing_*.csv, ` +
      `continuous_*.csv, or aggregate.csv with an episodes/ subdirectory`,
  );
}

export function main(argv: string[]): number {
  let args: ParsedArgs;
  try {
    args = parseArgs(argv);
    const style: Styling = { ...DEFAULT_STYLE };
    if (args.phi !== undefined) style.phi = args.phi;

    if (args.command === "render-all") {
      if (args.positional.length !== 1) throw new CliError(USAGE);
      const written = renderAll(args.positional[0], style);
      for (const f of written) process.stdout.write(`wrote ${f}\n`);
      return 0;
    }
    if (args.command === "render") {
      if (!args.kind || !args.out) throw new CliError(USAGE);
      if (!(FIGURE_KINDS as readonly string[]).includes(args.kind)) {
        throw new CliError(`unknown kind ${args.kind}; expected one of ${FIGURE_KINDS.join(", ")}`);
      }
      let svg: string;
      if (args.kind === "tracking" && args.events) {
        // tracking with an events file means a continuous log: stitch per swing
        const log = readEpisode(args.inputs[0]);
        svg = renderContinuousTracking(log, readEvents(args.events), style);
      } else {
        svg = renderKind(args.kind as FigureKind, args.inputs, args.events, style);
      }
      writeOut(args.out, svg);
      process.stdout.write(`wrote ${args.out}\n`);
      return 0;
    }
    throw new CliError(`unknown command ${args.command}\n${USAGE}`);
  } catch (err) {
    if (err instanceof CliError || err instanceof SchemaError) {
      process.stderr.write(`${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
