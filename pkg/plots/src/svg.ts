/**
 * Minimal deterministic SVG builder: fixed canvas, linear axes, polylines.
 * Numbers are formatted with toPrecision(6) so identical inputs give
 * byte-identical files.
 */

export const WIDTH = 720;
export const HEIGHT = 420;
export const MARGIN = { left: 64, right: 16, top: 34, bottom: 44 };

export const PALETTE = ["#1f6fb4", "#d62728", "#2ca02c", "#ff7f0e", "#7f7f7f"];

const fmt = (v: number): string => {
  if (!Number.isFinite(v)) return "0";
  if (v === 0) return "0";
  return Number(v.toPrecision(6)).toString();
};

export interface Series {
  xs: number[];
  ys: number[];
  color?: string;
  dashed?: boolean;
  width?: number;
  opacity?: number;
  className?: string;
}

export interface AxesOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  /** extra horizontal rules, e.g. boundary-layer edges */
  hLines?: { y: number; color?: string; dashed?: boolean; className?: string }[];
  /** fix the y range instead of auto-scaling */
  yRange?: [number, number];
  height?: number;
  /** vertical offset when stacking several axes in one file */
  yOffset?: number;
}

function bounds(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === Infinity) return [0, 1];
  if (lo === hi) return [lo - 1, hi + 1];
  const pad = 0.05 * (hi - lo);
  return [lo - pad, hi + pad];
}

function ticks(lo: number, hi: number, n = 5): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const err = span / (n * step);
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = mult * step;
  const out: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12; v += s) out.push(v);
  return out;
}

/** One axes panel with its series, returned as an SVG fragment. */
export function axesPanel(series: Series[], opts: AxesOptions): string {
  const h = opts.height ?? HEIGHT;
  const y0 = opts.yOffset ?? 0;
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = h - MARGIN.top - MARGIN.bottom;

  const allX = series.flatMap((s) => s.xs);
  const allY = series.flatMap((s) => s.ys);
  const [xLo, xHi] = bounds(allX);
  let [yLo, yHi] = opts.yRange ?? bounds(allY);
  for (const hl of opts.hLines ?? []) {
    if (hl.y < yLo) yLo = hl.y - 0.05 * (yHi - yLo);
    if (hl.y > yHi) yHi = hl.y + 0.05 * (yHi - yLo);
  }

  const X = (v: number) => MARGIN.left + ((v - xLo) / (xHi - xLo)) * plotW;
  const Y = (v: number) => y0 + MARGIN.top + (1 - (v - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<rect x="${MARGIN.left}" y="${y0 + MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${WIDTH / 2}" y="${y0 + MARGIN.top - 12}" text-anchor="middle" font-size="15" font-family="sans-serif">${opts.title}</text>`,
  );

  for (const tx of ticks(xLo, xHi)) {
    const px = X(tx);
    parts.push(
      `<line x1="${fmt(px)}" y1="${fmt(y0 + MARGIN.top + plotH)}" x2="${fmt(px)}" y2="${fmt(y0 + MARGIN.top + plotH + 5)}" stroke="#333"/>`,
      `<text x="${fmt(px)}" y="${fmt(y0 + MARGIN.top + plotH + 18)}" text-anchor="middle" font-size="11" font-family="sans-serif">${fmt(tx)}</text>`,
    );
  }
  for (const ty of ticks(yLo, yHi)) {
    const py = Y(ty);
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${fmt(py)}" x2="${MARGIN.left}" y2="${fmt(py)}" stroke="#333"/>`,
      `<text x="${MARGIN.left - 8}" y="${fmt(py + 4)}" text-anchor="end" font-size="11" font-family="sans-serif">${fmt(ty)}</text>`,
    );
  }
  parts.push(
    `<text x="${WIDTH / 2}" y="${y0 + h - 8}" text-anchor="middle" font-size="12" font-family="sans-serif">${opts.xLabel}</text>`,
    `<text x="16" y="${y0 + MARGIN.top + plotH / 2}" text-anchor="middle" font-size="12" font-family="sans-serif" transform="rotate(-90 16 ${y0 + MARGIN.top + plotH / 2})">${opts.yLabel}</text>`,
  );

  for (const hl of opts.hLines ?? []) {
    const py = Y(hl.y);
    const cls = hl.className ? ` class="${hl.className}"` : "";
    const dash = hl.dashed === false ? "" : ` stroke-dasharray="7 5"`;
    parts.push(
      `<line${cls} x1="${MARGIN.left}" y1="${fmt(py)}" x2="${MARGIN.left + plotW}" y2="${fmt(py)}" stroke="${hl.color ?? "#000"}"${dash} stroke-width="1.2"/>`,
    );
  }

  for (const s of series) {
    const pts: string[] = [];
    for (let i = 0; i < s.xs.length; i++) {
      if (!Number.isFinite(s.xs[i]) || !Number.isFinite(s.ys[i])) continue;
      pts.push(`${fmt(X(s.xs[i]))},${fmt(Y(s.ys[i]))}`);
    }
    const cls = s.className ? ` class="${s.className}"` : "";
    const dash = s.dashed ? ` stroke-dasharray="7 5"` : "";
    const op = s.opacity !== undefined ? ` stroke-opacity="${fmt(s.opacity)}"` : "";
    parts.push(
      `<polyline${cls} fill="none" stroke="${s.color ?? PALETTE[0]}" stroke-width="${s.width ?? 1.6}"${dash}${op} points="${pts.join(" ")}"/>`,
    );
  }
  return parts.join("\n");
}

export function document(body: string, totalHeight = HEIGHT): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${totalHeight}" viewBox="0 0 ${WIDTH} ${totalHeight}">`,
    `<rect width="${WIDTH}" height="${totalHeight}" fill="#ffffff"/>`,
    body,
    `</svg>`,
    ``,
  ].join("\n");
}

export function legend(entries: { label: string; color: string; dashed?: boolean }[], yOffset = 0): string {
  const parts: string[] = [];
  let x = MARGIN.left + 10;
  const y = yOffset + MARGIN.top + 14;
  for (const e of entries) {
    const dash = e.dashed ? ` stroke-dasharray="7 5"` : "";
    parts.push(
      `<line x1="${x}" y1="${y}" x2="${x + 26}" y2="${y}" stroke="${e.color}" stroke-width="2"${dash}/>`,
      `<text x="${x + 31}" y="${y + 4}" font-size="11" font-family="sans-serif">${e.label}</text>`,
    );
    x += 36 + 7 * e.label.length;
  }
  return parts.join("\n");
}
