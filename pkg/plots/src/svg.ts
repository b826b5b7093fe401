/**
 * Minimal deterministic SVG assembly: fixed canvas, linear or log10 axes,
 * polylines, markers, and text. No randomness, no timestamps; identical
 * inputs produce identical bytes.
 */

export const WIDTH = 640;
export const HEIGHT = 440;
export const MARGIN = { left: 70, right: 160, top: 30, bottom: 55 };

export type AxisKind = "linear" | "log";

export interface Scale {
  toPx(value: number): number;
  ticks: number[];
  kind: AxisKind;
}

const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

function px(v: number): string {
  return v.toFixed(2);
}

function linearTicks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count + 1) ?? 10 * step;
  const first = Math.ceil(lo / chosen) * chosen;
  const ticks: number[] = [];
  for (let t = first; t <= hi + 1e-12 * span; t += chosen) ticks.push(t);
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, e) <= hi * (1 + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks;
}

export function makeScale(values: number[], kind: AxisKind, axis: "x" | "y"): Scale {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (kind === "log") {
    if (lo <= 0) throw new Error("log axis requires positive values");
    const [llo, lhi] = [Math.log10(lo), Math.log10(hi)];
    const pad = (lhi - llo || 1) * 0.05;
    const plo = llo - pad;
    const phi = lhi + pad;
    const toPx = (v: number) => {
      const t = (Math.log10(v) - plo) / (phi - plo);
      return axis === "x" ? MARGIN.left + t * PLOT_W : MARGIN.top + (1 - t) * PLOT_H;
    };
    return { toPx, ticks: logTicks(lo, hi), kind };
  }
  const pad = (hi - lo || Math.abs(hi) || 1) * 0.06;
  lo -= pad;
  hi += pad;
  const toPx = (v: number) => {
    const t = (v - lo) / (hi - lo);
    return axis === "x" ? MARGIN.left + t * PLOT_W : MARGIN.top + (1 - t) * PLOT_H;
  };
  return { toPx, ticks: linearTicks(lo, hi), kind };
}

function tickLabel(v: number, kind: AxisKind): string {
  if (kind === "log") {
    const e = Math.round(Math.log10(v));
    return `1e${e}`;
  }
  const label = Number(v.toPrecision(4));
  return String(label);
}

export function axes(xs: Scale, ys: Scale, xLabel: string, yLabel: string): string {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`);
  for (const t of xs.ticks) {
    const p = xs.toPx(t);
    parts.push(`<line x1="${px(p)}" y1="${y0}" x2="${px(p)}" y2="${y0 + 5}" stroke="black"/>`);
    parts.push(
      `<text x="${px(p)}" y="${y0 + 20}" font-size="11" text-anchor="middle">${tickLabel(t, xs.kind)}</text>`,
    );
  }
  for (const t of ys.ticks) {
    const p = ys.toPx(t);
    parts.push(`<line x1="${x0 - 5}" y1="${px(p)}" x2="${x0}" y2="${px(p)}" stroke="black"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${px(p + 4)}" font-size="11" text-anchor="end">${tickLabel(t, ys.kind)}</text>`,
    );
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" font-size="13" text-anchor="middle">${xLabel}</text>`,
  );
  parts.push(
    `<text x="18" y="${(y0 + y1) / 2}" font-size="13" text-anchor="middle" transform="rotate(-90 18 ${(y0 + y1) / 2})">${yLabel}</text>`,
  );
  return parts.join("\n");
}

export function polyline(
  xvals: number[],
  yvals: number[],
  xs: Scale,
  ys: Scale,
  color: string,
): string {
  const pts = xvals.map((x, i) => `${px(xs.toPx(x))},${px(ys.toPx(yvals[i]))}`).join(" ");
  return `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.5"/>`;
}

export function markers(
  xvals: number[],
  yvals: number[],
  xs: Scale,
  ys: Scale,
  color: string,
): string {
  return xvals
    .map(
      (x, i) =>
        `<circle cx="${px(xs.toPx(x))}" cy="${px(ys.toPx(yvals[i]))}" r="3" fill="${color}"/>`,
    )
    .join("\n");
}

export function legend(entries: Array<[string, string]>): string {
  const x = WIDTH - MARGIN.right + 15;
  return entries
    .map(([label, color], i) => {
      const y = MARGIN.top + 15 + 20 * i;
      return (
        `<line x1="${x}" y1="${y}" x2="${x + 22}" y2="${y}" stroke="${color}" stroke-width="2"/>` +
        `<text x="${x + 28}" y="${y + 4}" font-size="12">${label}</text>`
      );
    })
    .join("\n");
}

export function annotation(text: string): string {
  return `<text x="${MARGIN.left + 12}" y="${MARGIN.top + 16}" font-size="13">${text}</text>`;
}

export function document(title: string, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="18" font-size="14" text-anchor="middle">${title}</text>`,
    body,
    `</svg>`,
    ``,
  ].join("\n");
}
