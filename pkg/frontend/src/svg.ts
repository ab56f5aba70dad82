/**
 * Minimal hand-rolled SVG building blocks shared by the figure renderers.
 * Everything is a pure string transform so output stays byte-deterministic.
 */

export const FONT = "system-ui,-apple-system,sans-serif";

/** Round to a stable short decimal for coordinates. */
export function r(x: number): string {
  const s = x.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export type Scale = (v: number) => number;

export function makeLinearScale(d0: number, d1: number, p0: number, p1: number): Scale {
  const span = d1 - d0;
  return (v) => (span === 0 ? (p0 + p1) / 2 : p0 + ((v - d0) / span) * (p1 - p0));
}

export function makeLog10Scale(d0: number, d1: number, p0: number, p1: number): Scale {
  const lin = makeLinearScale(Math.log10(d0), Math.log10(d1), p0, p1);
  return (v) => lin(Math.log10(v));
}

/** Round tick steps of 1/2/5 covering [0, top]; always includes 0. */
export function niceTicks(top: number, want = 5): number[] {
  if (!(top > 0)) return [0, 1];
  const rawStep = top / want;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const mult of [1, 2, 5, 10]) {
    step = mult * mag;
    if (step >= rawStep) break;
  }
  const ticks: number[] = [];
  for (let i = 0; ; i += 1) {
    const v = i * step;
    ticks.push(v);
    if (v >= top - step * 1e-9) break;
  }
  return ticks;
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 10000) return v.toExponential(0).replace("+", "");
  if (abs >= 10) return String(Math.round(v));
  return String(Number(v.toPrecision(3)));
}

export interface Frame {
  x0: number;  // plot area, pixel coordinates
  y0: number;
  x1: number;
  y1: number;
}

export function renderYAxis(out: string[], frame: Frame, ticks: number[],
                            sy: Scale, label: string): void {
  for (const t of ticks) {
    const y = r(sy(t));
    out.push(`<line x1="${r(frame.x0)}" y1="${y}" x2="${r(frame.x1)}" y2="${y}" stroke="#e5e7eb" stroke-width="1"/>`);
    out.push(`<text x="${r(frame.x0 - 6)}" y="${y}" text-anchor="end" dominant-baseline="middle" fill="#555" font-size="11">${formatTick(t)}</text>`);
  }
  const midY = (frame.y0 + frame.y1) / 2;
  out.push(`<text x="14" y="${r(midY)}" text-anchor="middle" fill="#333" font-size="12" transform="rotate(-90,14,${r(midY)})">${escapeText(label)}</text>`);
}

export function renderXAxis(out: string[], frame: Frame,
                            ticks: { v: number; label: string }[],
                            sx: Scale, label: string, height: number): void {
  for (const t of ticks) {
    const x = r(sx(t.v));
    out.push(`<line x1="${x}" y1="${r(frame.y1)}" x2="${x}" y2="${r(frame.y1 + 4)}" stroke="#555" stroke-width="1"/>`);
    out.push(`<text x="${x}" y="${r(frame.y1 + 16)}" text-anchor="middle" fill="#555" font-size="11">${escapeText(t.label)}</text>`);
  }
  out.push(`<text x="${r((frame.x0 + frame.x1) / 2)}" y="${r(height - 6)}" text-anchor="middle" fill="#333" font-size="12">${escapeText(label)}</text>`);
}

export function renderFrameBorder(out: string[], frame: Frame): void {
  out.push(`<rect x="${r(frame.x0)}" y="${r(frame.y0)}" width="${r(frame.x1 - frame.x0)}" height="${r(frame.y1 - frame.y0)}" fill="none" stroke="#9ca3af" stroke-width="1"/>`);
}

export function polylinePoints(xs: number[], ys: number[]): string {
  return xs.map((x, i) => `${r(x)},${r(ys[i]!)}`).join(" ");
}
