/**
 * Hand-rolled readers for the simulator's CSV artifacts.  Schemas are checked
 * strictly: a wrong or reordered header is an error naming the column, and a
 * non-numeric cell (other than an empty one, which the writer uses for NaN)
 * rejects the file.
 */

export const EPISODE_COLUMNS = [
  "t", "theta1", "theta2", "z_g", "dtheta1", "dtheta2", "dz_g",
  "y", "ydot", "y_d", "yd_dot", "u", "u_raw", "s", "s_delta", "k_d",
  "p_hat_ks", "p_hat_bs", "p_hat_kszs", "F_c", "F_d", "V",
] as const;

export type EpisodeColumn = (typeof EPISODE_COLUMNS)[number];

export interface EpisodeLog {
  columns: Map<EpisodeColumn, number[]>;
  length: number;
}

export interface EventMark {
  t: number;
  event: string;
}

export class SchemaError extends Error {}

function splitLines(text: string): string[] {
  const lines = text.split("\n");
  while (lines.length > 0 && lines[lines.length - 1].trim() === "") lines.pop();
  return lines;
}

function checkHeader(got: string[], want: readonly string[], what: string): void {
  for (let i = 0; i < Math.max(got.length, want.length); i++) {
    if (i >= want.length) throw new SchemaError(`${what}: unexpected column "${got[i]}"`);
    if (i >= got.length) throw new SchemaError(`${what}: missing column "${want[i]}"`);
    if (got[i] !== want[i]) {
      throw new SchemaError(
        `${what}: expected column "${want[i]}" at position ${i}, got "${got[i]}"`,
      );
    }
  }
}

function parseCell(cell: string, column: string, line: number): number {
  if (cell === "") return NaN; // writer emits empty cells for undefined values
  const v = Number(cell);
  if (Number.isNaN(v)) {
    throw new SchemaError(`line ${line}: non-numeric value "${cell}" in column "${column}"`);
  }
  return v;
}

export function parseEpisodeCsv(text: string): EpisodeLog {
  const lines = splitLines(text);
  if (lines.length === 0) throw new SchemaError("episode csv: empty file");
  checkHeader(lines[0].split(","), EPISODE_COLUMNS, "episode csv");
  const columns = new Map<EpisodeColumn, number[]>();
  for (const c of EPISODE_COLUMNS) columns.set(c, []);
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== EPISODE_COLUMNS.length) {
      throw new SchemaError(
        `line ${i + 1}: expected ${EPISODE_COLUMNS.length} cells, got ${cells.length}`,
      );
    }
    for (let j = 0; j < cells.length; j++) {
      columns.get(EPISODE_COLUMNS[j])!.push(parseCell(cells[j], EPISODE_COLUMNS[j], i + 1));
    }
  }
  if (lines.length === 1) throw new SchemaError("episode csv: no data rows");
  return { columns, length: lines.length - 1 };
}

export function column(log: EpisodeLog, name: EpisodeColumn): number[] {
  return log.columns.get(name)!;
}

export function parseEventsCsv(text: string): EventMark[] {
  const lines = splitLines(text);
  if (lines.length === 0) throw new SchemaError("events csv: empty file");
  checkHeader(lines[0].split(","), ["t", "event"], "events csv");
  const out: EventMark[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== 2) throw new SchemaError(`line ${i + 1}: expected 2 cells`);
    out.push({ t: parseCell(cells[0], "t", i + 1), event: cells[1] });
  }
  return out;
}

export interface AggregateRow {
  controller: string;
  rmse_y: number;
  rmse_ydot: number;
  rms_u: number;
  successes: number;
}

export function parseAggregateCsv(text: string): AggregateRow[] {
  const lines = splitLines(text);
  if (lines.length === 0) throw new SchemaError("aggregate csv: empty file");
  checkHeader(
    lines[0].split(","),
    ["controller", "rmse_y", "rmse_ydot", "rms_u", "successes"],
    "aggregate csv",
  );
  const out: AggregateRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const c = lines[i].split(",");
    if (c.length !== 5) throw new SchemaError(`line ${i + 1}: expected 5 cells`);
    out.push({
      controller: c[0],
      rmse_y: parseCell(c[1], "rmse_y", i + 1),
      rmse_ydot: parseCell(c[2], "rmse_ydot", i + 1),
      rms_u: parseCell(c[3], "rms_u", i + 1),
      successes: parseCell(c[4], "successes", i + 1),
    });
  }
  return out;
}
