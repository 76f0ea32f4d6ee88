/**
 * Report generation: four SVG plots plus an index.html for a run directory
 * containing diagnostics.csv and verdicts.json.
 *
 * All computation beyond re-fitting the growth exponent happens in the
 * producer; this module only renders. Output is byte-deterministic for a
 * given input directory.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { parseDiagnostics, parseVerdicts, Verdict } from "./csv.js";
import { fitGrowthExponent, referenceExponents } from "./fit.js";
import { linePlot } from "./svg.js";

export interface ReportOptions {
  runDir: string;
  outDir?: string;
  /** suppress the reference-exponent guide lines */
  noBounds?: boolean;
}

export interface ReportResult {
  files: string[];
  warnings: string[];
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function writeAtomic(file: string, text: string): void {
  const tmp = file + ".tmp";
  fs.writeFileSync(tmp, text);
  fs.renameSync(tmp, file);
}

export function generateReport(opts: ReportOptions): ReportResult {
  const runDir = opts.runDir;
  const outDir = opts.outDir ?? path.join(runDir, "report");
  const warnings: string[] = [];

  const csvPath = path.join(runDir, "diagnostics.csv");
  const verdictPath = path.join(runDir, "verdicts.json");
  if (!fs.existsSync(csvPath)) {
    throw new Error(`run directory has no diagnostics.csv: ${runDir}`);
  }
  const series = parseDiagnostics(fs.readFileSync(csvPath, "utf-8"));
  if (series.skippedRows > 0) {
    warnings.push(`skipped ${series.skippedRows} malformed/non-finite rows`);
  }
  let verdicts: Verdict[] = [];
  if (fs.existsSync(verdictPath)) {
    verdicts = parseVerdicts(fs.readFileSync(verdictPath, "utf-8"));
  } else {
    warnings.push("verdicts.json not found; rendering plots only");
  }

  const t = series.data.get("t")!;
  const r = series.data.get("R_dm1")!;
  const z = series.data.get("Z")!;
  const e = series.data.get("E")!;
  const drdt = series.data.get("dRdt_k")!;
  if (t.length === 0) {
    warnings.push("no data rows; plots are empty placeholders");
  }

  const fit = fitGrowthExponent(t, r);
  const lowerRef = verdicts.find(
    (v) => v.check_name === "lower_bound_exponent_reference",
  );
  const refs = referenceExponents(lowerRef ? lowerRef.measured : null);

  const annotations: string[] = [];
  if (fit) {
    annotations.push(
      `fitted b = ${fit.b.toFixed(2)} +- ${fit.stderr.toFixed(2)} ` +
        `(t in [${fit.tA}, ${fit.tB}])`,
    );
  }
  const guides: { slope: number; intercept: number; label: string }[] = [];
  if (!opts.noBounds && refs.lower !== null && t.length > 0 && r[0] > 0) {
    const c = Math.log10(r[0]);
    annotations.push(
      `reference exponents: lower ${refs.lower.toFixed(3)} (asymptotic)` +
        (refs.upper !== null
          ? `, upper ${refs.upper}`
          : refs.upperLabel
            ? `, upper ${refs.upperLabel}`
            : ""),
    );
    guides.push({
      slope: refs.lower,
      intercept: c,
      label: `slope ${refs.lower.toFixed(3)}`,
    });
    if (refs.upper !== null) {
      guides.push({ slope: refs.upper, intercept: c, label: `slope ${refs.upper}` });
    }
  }

  // guide lines live in log10-log10 space, matching the plot transform
  const onePlusT = t.map((v) => 1 + v);
  const plots: { file: string; svg: string }[] = [
    {
      file: "R_growth.svg",
      svg: linePlot(onePlusT, r, {
        title: "Radial moment R(t) (log-log)",
        xLabel: "1 + t",
        yLabel: "R",
        logX: true,
        logY: true,
        guides,
        annotations,
      }),
    },
    {
      file: "Z_decay.svg",
      svg: linePlot(t, z, {
        title: "Vertical moment Z(t) (strictly decreasing)",
        xLabel: "t",
        yLabel: "Z",
      }),
    },
    {
      file: "E_conservation.svg",
      svg: linePlot(t, e, {
        title: "Interaction energy E(t)",
        xLabel: "t",
        yLabel: "E",
      }),
    },
    {
      file: "dRdt_kernel.svg",
      svg: linePlot(t, drdt, {
        title: "Kernel-form dR/dt (strictly positive)",
        xLabel: "t",
        yLabel: "dR/dt",
      }),
    },
  ];

  fs.mkdirSync(outDir, { recursive: true });
  const files: string[] = [];
  for (const p of plots) {
    const file = path.join(outDir, p.file);
    writeAtomic(file, p.svg);
    files.push(file);
  }

  const rows = verdicts
    .map(
      (v) =>
        `<tr class="${v.pass ? "pass" : "fail"}"><td>${esc(v.check_name)}</td>` +
        `<td>${v.pass ? "pass" : "FAIL"}</td>` +
        `<td>${v.measured}</td><td>${esc(v.detail)}</td></tr>`,
    )
    .join("\n");
  const warn = warnings.map((w) => `<p class="warn">warning: ${esc(w)}</p>`).join("\n");
  const fitLine = fit
    ? `<p>Late-window growth exponent: <strong>b = ${fit.b.toFixed(2)}</strong>` +
      ` &plusmn; ${fit.stderr.toFixed(2)} over t &isin; [${fit.tA}, ${fit.tB}]` +
      ` (${fit.nPoints} samples).</p>`
    : `<p>Growth exponent not fitted (needs at least 5 late samples).</p>`;
  const refLine =
    refs.lower !== null
      ? `<p>Reference exponents (asymptotic, not asserted): lower ` +
        `${refs.lower.toFixed(3)}` +
        (refs.upper !== null
          ? `, upper ${refs.upper}.`
          : refs.upperLabel
            ? `, upper bound ${esc(refs.upperLabel)}.`
            : `.`) +
        `</p>`
      : "";

  const html = `<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>Run report</title>
<style>
body { font-family: monospace; margin: 2em; max-width: 72em; }
table { border-collapse: collapse; }
td, th { border: 1px solid #999; padding: 4px 8px; }
tr.pass td:nth-child(2) { color: #171; }
tr.fail td:nth-child(2) { color: #b11; font-weight: bold; }
.warn { color: #960; }
img { border: 1px solid #ccc; margin: 4px; }
</style>
</head>
<body>
<h1>Run report</h1>
${warn}
${fitLine}
${refLine}
<h2>Plots</h2>
<img src="R_growth.svg" alt="R growth" width="640" height="420">
<img src="Z_decay.svg" alt="Z decay" width="640" height="420">
<img src="E_conservation.svg" alt="energy" width="640" height="420">
<img src="dRdt_kernel.svg" alt="dRdt" width="640" height="420">
<h2>Verdicts</h2>
<table>
<tr><th>check</th><th>status</th><th>measured</th><th>detail</th></tr>
${rows}
</table>
</body>
</html>
`;
  const indexFile = path.join(outDir, "index.html");
  writeAtomic(indexFile, html);
  files.push(indexFile);
  return { files, warnings };
}
