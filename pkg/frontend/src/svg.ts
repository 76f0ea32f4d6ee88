/**
 * Tiny deterministic SVG line plots.
 *
 * Hand-rolled instead of a charting dependency so repeated runs produce
 * byte-identical files: coordinates are formatted with a fixed precision
 * and nothing depends on time, locale, or library versions.
 */

export interface PlotOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logX?: boolean;
  logY?: boolean;
  /** extra straight guide lines in data space, drawn dashed */
  guides?: { slope: number; intercept: number; label: string }[];
  annotations?: string[];
}

const W = 640;
const H = 420;
const M = { left: 70, right: 20, top: 40, bottom: 50 };

function fmt(x: number): string {
  return x.toPrecision(6).replace(/\.?0+$/, "").replace(/\.?0+e/, "e");
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function linePlot(xs: number[], ys: number[], opts: PlotOptions): string {
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" ` +
      `viewBox="0 0 ${W} ${H}" font-family="monospace" font-size="12">`,
  );
  parts.push(`<rect width="${W}" height="${H}" fill="white"/>`);
  parts.push(
    `<text x="${W / 2}" y="20" text-anchor="middle" font-size="14">` +
      `${esc(opts.title)}</text>`,
  );

  const tx = (v: number) => (opts.logX ? Math.log10(v) : v);
  const ty = (v: number) => (opts.logY ? Math.log10(v) : v);
  const keep: number[] = [];
  for (let i = 0; i < xs.length; i++) {
    if (opts.logX && xs[i] <= 0) continue;
    if (opts.logY && ys[i] <= 0) continue;
    keep.push(i);
  }

  if (keep.length === 0) {
    parts.push(
      `<text x="${W / 2}" y="${H / 2}" text-anchor="middle" fill="#888">` +
        `no plottable data</text>`,
    );
    parts.push("</svg>");
    return parts.join("\n") + "\n";
  }

  let x0 = Infinity;
  let x1 = -Infinity;
  let y0 = Infinity;
  let y1 = -Infinity;
  for (const i of keep) {
    x0 = Math.min(x0, tx(xs[i]));
    x1 = Math.max(x1, tx(xs[i]));
    y0 = Math.min(y0, ty(ys[i]));
    y1 = Math.max(y1, ty(ys[i]));
  }
  if (x1 === x0) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 === y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const padY = 0.05 * (y1 - y0);
  y0 -= padY;
  y1 += padY;

  const px = (v: number) => M.left + ((v - x0) / (x1 - x0)) * (W - M.left - M.right);
  const py = (v: number) => H - M.bottom - ((v - y0) / (y1 - y0)) * (H - M.top - M.bottom);

  // frame and corner labels
  parts.push(
    `<rect x="${M.left}" y="${M.top}" width="${W - M.left - M.right}" ` +
      `height="${H - M.top - M.bottom}" fill="none" stroke="#333"/>`,
  );
  const back = (v: number, log: boolean | undefined) => (log ? Math.pow(10, v) : v);
  parts.push(
    `<text x="${M.left}" y="${H - M.bottom + 16}" text-anchor="middle">` +
      `${fmt(back(x0, opts.logX))}</text>`,
    `<text x="${W - M.right}" y="${H - M.bottom + 16}" text-anchor="end">` +
      `${fmt(back(x1, opts.logX))}</text>`,
    `<text x="${M.left - 6}" y="${H - M.bottom}" text-anchor="end">` +
      `${fmt(back(y0 + padY, opts.logY))}</text>`,
    `<text x="${M.left - 6}" y="${M.top + 10}" text-anchor="end">` +
      `${fmt(back(y1 - padY, opts.logY))}</text>`,
    `<text x="${(M.left + W - M.right) / 2}" y="${H - 12}" ` +
      `text-anchor="middle">${esc(opts.xLabel)}</text>`,
    `<text x="16" y="${(M.top + H - M.bottom) / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 16 ${(M.top + H - M.bottom) / 2})">` +
      `${esc(opts.yLabel)}</text>`,
  );

  for (const g of opts.guides ?? []) {
    const gy0 = g.intercept + g.slope * x0;
    const gy1 = g.intercept + g.slope * x1;
    parts.push(
      `<line x1="${fmt(px(x0))}" y1="${fmt(py(gy0))}" x2="${fmt(px(x1))}" ` +
        `y2="${fmt(py(gy1))}" stroke="#b55" stroke-dasharray="6 4"/>`,
      `<text x="${W - M.right - 4}" y="${fmt(py(gy1) - 4)}" ` +
        `text-anchor="end" fill="#b55">${esc(g.label)}</text>`,
    );
  }

  const pts = keep
    .map((i) => `${fmt(px(tx(xs[i])))},${fmt(py(ty(ys[i])))}`)
    .join(" ");
  parts.push(`<polyline points="${pts}" fill="none" stroke="#247" stroke-width="1.5"/>`);

  (opts.annotations ?? []).forEach((a, k) => {
    parts.push(
      `<text x="${M.left + 8}" y="${M.top + 16 + 16 * k}" fill="#333">` +
        `${esc(a)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
