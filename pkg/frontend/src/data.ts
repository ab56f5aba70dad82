/**
 * Typed access to the simulator's summary.json output.
 *
 * The file is the simulator CLI's only contract with this package: a config
 * echo plus one result record per run.  parseSummary validates just the
 * fields the figures consume and fails loudly on anything else.
 */

export interface RunRecord {
  policy: string;
  num_users: number;
  v: number;
  fairness_alpha: number;
  seed: number;
  sum_delivered_rate: number;
  sum_utility: number;
  mean_queue_total: number;
}

export interface Summary {
  results: RunRecord[];
}

const NUMERIC_FIELDS = [
  "num_users", "v", "fairness_alpha", "seed",
  "sum_delivered_rate", "sum_utility", "mean_queue_total",
] as const;

function fail(where: string, what: string): never {
  throw new Error(`summary.json: ${where}: ${what}`);
}

export function parseSummary(text: string): Summary {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    fail("top level", `not JSON (${(err as Error).message})`);
  }
  const doc = raw as Record<string, unknown>;
  if (typeof doc !== "object" || doc === null || !Array.isArray(doc.results)) {
    fail("top level", "expected an object with a results array");
  }

  const results: RunRecord[] = [];
  (doc.results as unknown[]).forEach((entry, i) => {
    const rec = entry as Record<string, unknown>;
    if (typeof rec.policy !== "string") fail(`results[${i}].policy`, "expected a string");
    for (const field of NUMERIC_FIELDS) {
      if (typeof rec[field] !== "number" || !Number.isFinite(rec[field])) {
        fail(`results[${i}].${field}`, "expected a finite number");
      }
    }
    results.push({
      policy: rec.policy,
      num_users: rec.num_users as number,
      v: rec.v as number,
      fairness_alpha: rec.fairness_alpha as number,
      seed: rec.seed as number,
      sum_delivered_rate: rec.sum_delivered_rate as number,
      sum_utility: rec.sum_utility as number,
      mean_queue_total: rec.mean_queue_total as number,
    });
  });
  if (results.length === 0) fail("results", "empty");
  return { results };
}

export interface SeedBand {
  x: number;
  mean: number;
  min: number;
  max: number;
}

/** Collapse the seed axis: one (mean, min, max) band per distinct x. */
export function seedBands(runs: RunRecord[], xOf: (r: RunRecord) => number,
                          yOf: (r: RunRecord) => number): SeedBand[] {
  const byX = new Map<number, number[]>();
  for (const run of runs) {
    const x = xOf(run);
    const ys = byX.get(x);
    if (ys) ys.push(yOf(run));
    else byX.set(x, [yOf(run)]);
  }
  return [...byX.entries()]
    .sort((a, b) => a[0] - b[0])
    .map(([x, ys]) => ({
      x,
      mean: ys.reduce((s, y) => s + y, 0) / ys.length,
      min: Math.min(...ys),
      max: Math.max(...ys),
    }));
}
