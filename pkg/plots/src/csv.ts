/**
 * Reader for the simulator's CSV dialect: one `# key=value ...` comment
 * line, a header row, then unquoted comma-separated numeric rows.
 */

export interface Dataset {
  params: Record<string, string>;
  columns: string[];
  rows: number[][];
}

export class SchemaError extends Error {}

export function parseCsv(text: string): Dataset {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  const params: Record<string, string> = {};
  let idx = 0;
  while (idx < lines.length && lines[idx].startsWith("#")) {
    for (const token of lines[idx].slice(1).trim().split(/\s+/)) {
      const eq = token.indexOf("=");
      if (eq > 0) params[token.slice(0, eq)] = token.slice(eq + 1);
    }
    idx += 1;
  }
  if (idx >= lines.length) {
    throw new SchemaError("no header row found");
  }
  const columns = lines[idx].split(",").map((c) => c.trim());
  const rows: number[][] = [];
  for (const line of lines.slice(idx + 1)) {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `row has ${cells.length} cells, expected ${columns.length} (${columns.join(",")})`,
      );
    }
    const parsed = cells.map((c) => Number(c));
    if (parsed.some((v) => Number.isNaN(v))) {
      throw new SchemaError(`non-numeric cell in row: ${line}`);
    }
    rows.push(parsed);
  }
  if (rows.length === 0) {
    throw new SchemaError("dataset has no data rows");
  }
  return { params, columns, rows };
}

/** Check the header against an expected schema; report the mismatch precisely. */
export function requireColumns(data: Dataset, expected: string[]): void {
  if (
    data.columns.length !== expected.length ||
    expected.some((c, i) => data.columns[i] !== c)
  ) {
    throw new SchemaError(
      `expected columns [${expected.join(",")}], found [${data.columns.join(",")}]`,
    );
  }
}

export function column(data: Dataset, name: string): number[] {
  const i = data.columns.indexOf(name);
  if (i < 0) throw new SchemaError(`missing column ${name}`);
  return data.rows.map((r) => r[i]);
}
