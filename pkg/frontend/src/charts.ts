/**
 * The three figure kinds, each a pure function from a parsed summary to an
 * SVG string.  Seed spread shows up as a translucent min-max band around the
 * per-policy mean line; a run grid with one seed just collapses the band.
 */

import { RunRecord, SeedBand, Summary, seedBands } from "./data.js";
import {
  FONT, Frame, Scale, escapeText, formatTick, makeLinearScale,
  makeLog10Scale, niceTicks, polylinePoints, r, renderFrameBorder,
  renderXAxis, renderYAxis,
} from "./svg.js";

export const KINDS = ["sumrate-vs-k", "pf-utility-vs-k", "v-tradeoff"] as const;
export type Kind = (typeof KINDS)[number];

const POLICY_ORDER = ["lyapunov", "unicast-opp", "tdma-cc"];
const POLICY_COLOR: Record<string, string> = {
  "lyapunov": "#2563eb",
  "unicast-opp": "#f59e0b",
  "tdma-cc": "#10b981",
};
const POLICY_LABEL: Record<string, string> = {
  "lyapunov": "online controller",
  "unicast-opp": "opportunistic unicast",
  "tdma-cc": "TDMA coded caching",
};

const W = 640;
const H = 420;
const MARGIN = { top: 40, right: 20, bottom: 48, left: 64 };

// ── shared pieces ──────────────────────────────────────────────────────────

function open(out: string[], width: number, height: number, title: string): void {
  out.push(`<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" font-family="${FONT}" font-size="12">`);
  out.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  out.push(`<text x="${r(width / 2)}" y="20" text-anchor="middle" fill="#333" font-size="14" font-weight="600">${escapeText(title)}</text>`);
}

function policyColor(policy: string, index: number): string {
  return POLICY_COLOR[policy] ?? ["#6b7280", "#db2777", "#7c3aed"][index % 3]!;
}

function drawBands(out: string[], bands: SeedBand[], sx: Scale, sy: Scale,
                   color: string): void {
  if (bands.some((b) => b.max > b.min)) {
    const upper = bands.map((b) => `${r(sx(b.x))},${r(sy(b.max))}`);
    const lower = [...bands].reverse().map((b) => `${r(sx(b.x))},${r(sy(b.min))}`);
    out.push(`<polygon fill="${color}" fill-opacity="0.15" stroke="none" points="${[...upper, ...lower].join(" ")}"/>`);
  }
  out.push(`<polyline fill="none" stroke="${color}" stroke-width="2" points="${polylinePoints(bands.map((b) => sx(b.x)), bands.map((b) => sy(b.mean)))}"/>`);
  for (const b of bands) {
    out.push(`<circle cx="${r(sx(b.x))}" cy="${r(sy(b.mean))}" r="3" fill="${color}"/>`);
  }
}

function drawLegend(out: string[], frame: Frame,
                    entries: { label: string; color: string }[]): void {
  const rowH = 16;
  const boxW = 170;
  const x = frame.x1 - boxW - 8;
  const y = frame.y0 + 8;
  out.push(`<rect x="${r(x)}" y="${r(y)}" width="${boxW}" height="${entries.length * rowH + 8}" rx="3" fill="white" stroke="#e5e7eb"/>`);
  entries.forEach((e, i) => {
    const cy = y + 12 + i * rowH;
    out.push(`<line x1="${r(x + 8)}" y1="${r(cy)}" x2="${r(x + 26)}" y2="${r(cy)}" stroke="${e.color}" stroke-width="2"/>`);
    out.push(`<text x="${r(x + 32)}" y="${r(cy)}" dominant-baseline="middle" fill="#333" font-size="11">${escapeText(e.label)}</text>`);
  });
}

function orderedPolicies(runs: RunRecord[]): string[] {
  const present = [...new Set(runs.map((run) => run.policy))];
  return present.sort((a, b) => {
    const ia = POLICY_ORDER.indexOf(a);
    const ib = POLICY_ORDER.indexOf(b);
    return (ia < 0 ? 99 : ia) - (ib < 0 ? 99 : ib) || a.localeCompare(b);
  });
}

// ── metric vs number of users, one line per policy ─────────────────────────

function metricVsUsers(summary: Summary, alpha: number, title: string,
                       yLabel: string, yOf: (r: RunRecord) => number): string {
  const runs = summary.results.filter((run) => run.fairness_alpha === alpha);
  if (runs.length === 0) {
    throw new Error(`no runs with fairness_alpha=${alpha} in the summary`);
  }
  const frame: Frame = { x0: MARGIN.left, y0: MARGIN.top,
                         x1: W - MARGIN.right, y1: H - MARGIN.bottom };
  const users = [...new Set(runs.map((run) => run.num_users))].sort((a, b) => a - b);
  const policies = orderedPolicies(runs);
  const perPolicy = policies.map((policy) => seedBands(
    runs.filter((run) => run.policy === policy), (run) => run.num_users, yOf));

  const yTop = Math.max(...perPolicy.flat().map((b) => b.max)) * 1.08;
  const yTicks = niceTicks(yTop);
  const xPad = users.length > 1 ? 0 : 1;
  const sx = makeLinearScale(users[0]! - xPad, users[users.length - 1]! + xPad,
                             frame.x0 + 24, frame.x1 - 24);
  const sy = makeLinearScale(0, yTicks[yTicks.length - 1]!, frame.y1, frame.y0);

  const out: string[] = [];
  open(out, W, H, title);
  renderYAxis(out, frame, yTicks, sy, yLabel);
  renderXAxis(out, frame, users.map((k) => ({ v: k, label: String(k) })), sx,
              "number of users", H);
  policies.forEach((policy, i) => {
    drawBands(out, perPolicy[i]!, sx, sy, policyColor(policy, i));
  });
  renderFrameBorder(out, frame);
  drawLegend(out, frame, policies.map((policy, i) => ({
    label: POLICY_LABEL[policy] ?? policy, color: policyColor(policy, i),
  })));
  out.push("</svg>");
  return out.join("\n") + "\n";
}

export function renderSumRateVsUsers(summary: Summary): string {
  return metricVsUsers(summary, 0.0,
                       "Sum delivery rate vs network size (alpha = 0)",
                       "sum delivered rate (files/slot)",
                       (run) => run.sum_delivered_rate);
}

export function renderUtilityVsUsers(summary: Summary): string {
  return metricVsUsers(summary, 1.0,
                       "Proportional-fair utility vs network size (alpha = 1)",
                       "sum utility of delivered rates",
                       (run) => run.sum_utility);
}

// ── utility / backlog against the penalty weight V ─────────────────────────

export function renderVTradeoff(summary: Summary): string {
  const runs = summary.results.filter((run) => run.policy === "lyapunov");
  if (runs.length === 0) throw new Error("no lyapunov runs in the summary");
  const vs = [...new Set(runs.map((run) => run.v))].sort((a, b) => a - b);
  if (vs.length < 2) {
    throw new Error(`v-tradeoff needs at least two values of v, got {${vs.join(", ")}}`);
  }

  const width = 760;
  const height = 380;
  const gap = 58;
  const panelW = (width - MARGIN.left - MARGIN.right - gap - 40) / 2;
  const frames: Frame[] = [0, 1].map((i) => ({
    x0: MARGIN.left + i * (panelW + gap + 40),
    y0: MARGIN.top,
    x1: MARGIN.left + i * (panelW + gap + 40) + panelW,
    y1: height - MARGIN.bottom,
  }));

  const utility = seedBands(runs, (run) => run.v, (run) => run.sum_utility);
  const backlog = seedBands(runs, (run) => run.v, (run) => run.mean_queue_total);

  const out: string[] = [];
  open(out, width, height, "Utility against backlog as the penalty weight V grows");
  const vTicks = vs.map((v) => ({ v, label: formatTick(v) }));

  const panels: { frame: Frame; bands: SeedBand[]; label: string }[] = [
    { frame: frames[0]!, bands: utility, label: "sum utility of delivered rates" },
    { frame: frames[1]!, bands: backlog, label: "mean total backlog (files)" },
  ];
  for (const panel of panels) {
    const sx = makeLog10Scale(vs[0]!, vs[vs.length - 1]!,
                              panel.frame.x0 + 18, panel.frame.x1 - 18);
    const yTicks = niceTicks(Math.max(...panel.bands.map((b) => b.max)) * 1.08);
    const sy = makeLinearScale(0, yTicks[yTicks.length - 1]!,
                               panel.frame.y1, panel.frame.y0);
    for (const t of yTicks) {
      const y = r(sy(t));
      out.push(`<line x1="${r(panel.frame.x0)}" y1="${y}" x2="${r(panel.frame.x1)}" y2="${y}" stroke="#e5e7eb" stroke-width="1"/>`);
      out.push(`<text x="${r(panel.frame.x0 - 6)}" y="${y}" text-anchor="end" dominant-baseline="middle" fill="#555" font-size="11">${formatTick(t)}</text>`);
    }
    out.push(`<text x="${r((panel.frame.x0 + panel.frame.x1) / 2)}" y="${r(panel.frame.y0 - 8)}" text-anchor="middle" fill="#333" font-size="12">${escapeText(panel.label)}</text>`);
    renderXAxis(out, panel.frame, vTicks, sx, "penalty weight V (log scale)",
                height);
    drawBands(out, panel.bands, sx, sy, POLICY_COLOR["lyapunov"]!);
    renderFrameBorder(out, panel.frame);
  }
  out.push("</svg>");
  return out.join("\n") + "\n";
}

export function render(kind: Kind, summary: Summary): string {
  switch (kind) {
    case "sumrate-vs-k": return renderSumRateVsUsers(summary);
    case "pf-utility-vs-k": return renderUtilityVsUsers(summary);
    case "v-tradeoff": return renderVTradeoff(summary);
  }
}
