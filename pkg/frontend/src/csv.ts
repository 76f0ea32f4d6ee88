/**
 * Reader for the run diagnostics CSV.
 *
 * The producer writes a fixed header
 * `t,R0,Z,E,R_dm1,dRdt_k,dZdt_k,ur_max,ke_bound,logmom` plus optional
 * `R_j_<j>` columns. Rows containing non-finite values are skipped and
 * counted so partial or still-running experiments render cleanly.
 */

export interface DiagnosticsSeries {
  columns: string[];
  /** column name -> values, aligned across kept rows */
  data: Map<string, number[]>;
  skippedRows: number;
}

export const BASE_COLUMNS = [
  "t",
  "R0",
  "Z",
  "E",
  "R_dm1",
  "dRdt_k",
  "dZdt_k",
  "ur_max",
  "ke_bound",
  "logmom",
];

export function parseDiagnostics(text: string): DiagnosticsSeries {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error("diagnostics CSV is empty");
  }
  const columns = lines[0].split(",");
  for (let i = 0; i < BASE_COLUMNS.length; i++) {
    if (columns[i] !== BASE_COLUMNS[i]) {
      throw new Error(
        `unexpected diagnostics header: column ${i} is ` +
          `'${columns[i]}', expected '${BASE_COLUMNS[i]}'`,
      );
    }
  }
  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  let skipped = 0;
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      skipped += 1;
      continue;
    }
    const vals = parts.map(Number);
    if (vals.some((v) => !Number.isFinite(v))) {
      skipped += 1;
      continue;
    }
    vals.forEach((v, i) => data.get(columns[i])!.push(v));
  }
  return { columns, data, skippedRows: skipped };
}

export interface Verdict {
  check_name: string;
  pass: boolean;
  measured: number;
  detail: string;
}

export function parseVerdicts(text: string): Verdict[] {
  const doc = JSON.parse(text);
  if (!Array.isArray(doc)) {
    throw new Error("verdicts file must contain a JSON array");
  }
  return doc as Verdict[];
}
