/**
 * Figure builders: each takes parsed CSV content and returns a complete
 * SVG document string. Numerical content shown on a figure (the sweep
 * slope) is recomputed from the CSV rows and cross-checked against the
 * sidecar written alongside the data, so the plot doubles as a
 * verification surface.
 */

import { Dataset, SchemaError, column, requireColumns } from "./csv.js";
import { logLogFit } from "./fit.js";
import {
  annotation,
  axes,
  document,
  legend,
  makeScale,
  markers,
  polyline,
} from "./svg.js";

export const SLOPE_SIDECAR_TOLERANCE = 1e-9;

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

export function renderFig2(data: Dataset): string {
  requireColumns(data, ["n", "N", "q", "r"]);
  const ns = column(data, "n");
  const cycles = column(data, "N");
  const rs = column(data, "r");
  const xs = makeScale(ns, "log", "x");
  const ys = makeScale(rs, "linear", "y");
  const groups = [...new Set(cycles)].sort((a, b) => a - b);
  const body: string[] = [axes(xs, ys, "rounds n", "expansion rate r")];
  const legendEntries: Array<[string, string]> = [];
  groups.forEach((cycleN, gi) => {
    const color = PALETTE[gi % PALETTE.length];
    const series = ns
      .map((n, i) => ({ n, r: rs[i], N: cycles[i] }))
      .filter((p) => p.N === cycleN)
      .sort((a, b) => a.n - b.n);
    body.push(polyline(series.map((p) => p.n), series.map((p) => p.r), xs, ys, color));
    body.push(markers(series.map((p) => p.n), series.map((p) => p.r), xs, ys, color));
    legendEntries.push([`N=${cycleN}`, color]);
  });
  body.push(legend(legendEntries));
  return document("Expansion rate vs rounds", body.join("\n"));
}

export function renderFig4(data: Dataset): string {
  requireColumns(data, ["N", "r"]);
  const cycles = column(data, "N");
  const rs = column(data, "r");
  const xs = makeScale(cycles, "linear", "x");
  const ys = makeScale(rs, "linear", "y");
  const order = cycles.map((_, i) => i).sort((a, b) => cycles[a] - cycles[b]);
  const sortedN = order.map((i) => cycles[i]);
  const sortedR = order.map((i) => rs[i]);
  const body = [
    axes(xs, ys, "measurements N", "expansion rate r"),
    polyline(sortedN, sortedR, xs, ys, PALETTE[0]),
    markers(sortedN, sortedR, xs, ys, PALETTE[0]),
  ];
  const convention = data.params["omega_convention"];
  if (convention) body.push(annotation(`convention: ${convention}`));
  return document("Expansion rate vs cycle size", body.join("\n"));
}

export interface SweepSidecar {
  slope: number;
  intercept: number;
  r_squared: number;
}

export function renderSweep(data: Dataset, sidecar: SweepSidecar): string {
  requireColumns(data, ["delta", "epsilon", "distance"]);
  const eps = column(data, "epsilon");
  const dist = column(data, "distance");
  const fit = logLogFit(eps, dist);
  const drift = Math.abs(fit.slope - sidecar.slope);
  if (drift > SLOPE_SIDECAR_TOLERANCE) {
    throw new SchemaError(
      `recomputed slope ${fit.slope} disagrees with sidecar ${sidecar.slope} (|diff|=${drift})`,
    );
  }
  const xs = makeScale(eps, "log", "x");
  const ys = makeScale(dist, "log", "y");
  const [emin, emax] = [Math.min(...eps), Math.max(...eps)];
  const lineY = (e: number) => Math.exp(fit.intercept + fit.slope * Math.log(e));
  const body = [
    axes(xs, ys, "inequality deficit", "security distance"),
    polyline([emin, emax], [lineY(emin), lineY(emax)], xs, ys, "#888888"),
    markers(eps, dist, xs, ys, PALETTE[0]),
    annotation(`slope = ${fit.slope.toFixed(6)} (R² = ${fit.rSquared.toFixed(6)})`),
  ];
  return document("Security distance scaling", body.join("\n"));
}

export type Kind = "fig2" | "fig4" | "sweep";

export function render(kind: Kind, data: Dataset, sidecar?: SweepSidecar): string {
  switch (kind) {
    case "fig2":
      return renderFig2(data);
    case "fig4":
      return renderFig4(data);
    case "sweep":
      if (!sidecar) throw new SchemaError("sweep rendering requires the JSON sidecar");
      return renderSweep(data, sidecar);
  }
}
