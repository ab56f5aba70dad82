#!/usr/bin/env node
/**
 * Render one figure from a simulator summary.
 *
 * Usage:  faircache-plots --summary out/summary.json --kind sumrate-vs-k --out fig.svg
 *
 * Kinds:  sumrate-vs-k      sum delivered rate vs K, alpha = 0 runs
 *         pf-utility-vs-k   sum utility vs K, alpha = 1 runs
 *         v-tradeoff        admitted utility and backlog vs the weight V
 */

import { readFileSync, writeFileSync } from "node:fs";
import { KINDS, Kind, render } from "./charts.js";
import { parseSummary } from "./data.js";

const USAGE =
  "usage: faircache-plots --summary <summary.json> --kind <kind> --out <file.svg>\n" +
  `kinds: ${KINDS.join(", ")}`;

function parseArgs(argv: string[]): { summary: string; kind: Kind; out: string } {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const name = argv[i];
    const value = argv[i + 1];
    if (name === undefined || !name.startsWith("--") || value === undefined) {
      throw new Error(USAGE);
    }
    flags.set(name.slice(2), value);
  }
  const summary = flags.get("summary");
  const kind = flags.get("kind");
  const out = flags.get("out");
  const known = new Set(["summary", "kind", "out"]);
  const unknown = [...flags.keys()].filter((k) => !known.has(k));
  if (!summary || !kind || !out || unknown.length > 0) throw new Error(USAGE);
  if (!(KINDS as readonly string[]).includes(kind)) {
    throw new Error(`unknown kind ${JSON.stringify(kind)}\n${USAGE}`);
  }
  return { summary, kind: kind as Kind, out };
}

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n`);
    return 2;
  }
  try {
    const summary = parseSummary(readFileSync(args.summary, "utf8"));
    writeFileSync(args.out, render(args.kind, summary));
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }
  process.stdout.write(`wrote ${args.out}\n`);
  return 0;
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
