#!/usr/bin/env node
/**
 * report <run_dir> [--out DIR] [--no-bounds]
 *
 * Renders the SVG plots and index.html for a finished (or partial) run
 * directory. Exit code 0 on success, 2 on usage or I/O errors.
 */

import { generateReport } from "./report.js";

export function main(argv: string[]): number {
  const args = argv.slice();
  if (args[0] === "report") args.shift();
  let runDir: string | null = null;
  let outDir: string | undefined;
  let noBounds = false;
  for (let i = 0; i < args.length; i++) {
    const a = args[i];
    if (a === "--out") {
      outDir = args[++i];
      if (outDir === undefined) {
        console.error("error: --out requires a directory argument");
        return 2;
      }
    } else if (a === "--no-bounds") {
      noBounds = true;
    } else if (a.startsWith("-")) {
      console.error(`error: unknown flag ${a}`);
      return 2;
    } else if (runDir === null) {
      runDir = a;
    } else {
      console.error(`error: unexpected argument ${a}`);
      return 2;
    }
  }
  if (runDir === null) {
    console.error("usage: report <run_dir> [--out DIR] [--no-bounds]");
    return 2;
  }
  try {
    const result = generateReport({ runDir, outDir, noBounds });
    for (const w of result.warnings) console.error(`warning: ${w}`);
    for (const f of result.files) console.log(`wrote ${f}`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 2;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
