/**
 * Thin file-level wrapper: --kind fig2|fig4|sweep --in data.csv --out figure.svg
 *
 * The sweep kind also reads the fit sidecar (same path as the CSV with a
 * .json extension). Nothing is written unless rendering succeeds.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { parseCsv } from "./csv.js";
import { Kind, SweepSidecar, render } from "./render.js";

export function run(argv: string[]): number {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        in: { type: "string" },
        out: { type: "string" },
      },
    }));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  const kind = values.kind as Kind | undefined;
  if (!kind || !["fig2", "fig4", "sweep"].includes(kind) || !values.in || !values.out) {
    console.error("usage: render --kind fig2|fig4|sweep --in data.csv --out figure.svg");
    return 1;
  }
  try {
    const data = parseCsv(readFileSync(values.in, "utf-8"));
    let sidecar: SweepSidecar | undefined;
    if (kind === "sweep") {
      const sidecarPath = values.in.replace(/\.csv$/, "") + ".json";
      sidecar = JSON.parse(readFileSync(sidecarPath, "utf-8")) as SweepSidecar;
    }
    const svg = render(kind, data, sidecar);
    writeFileSync(values.out, svg, "utf-8");
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (import.meta.url === pathToFileURL(process.argv[1] ?? "").href) {
  process.exit(run(process.argv.slice(2)));
}
