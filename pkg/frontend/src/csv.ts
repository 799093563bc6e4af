import { readFileSync } from 'node:fs';
import { join } from 'node:path';

/** One subcarrier-averaged SE record from the simulator's results.csv. */
export interface ResultRow {
  drop: number;
  realization: number;
  ue: number;
  combiner: string;
  ablation: string;
  seAvg: number;
}

const REQUIRED = ['drop', 'realization', 'ue', 'combiner', 'ablation', 'se_avg'];

/**
 * Parse results.csv text. Fields never contain commas or quotes, so a plain
 * split is exact. Rows without an se_avg value (per-subcarrier expansion
 * rows, failed solves) are skipped.
 */
export function parseResults(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error('empty results file');
  }
  const header = lines[0].split(',');
  const index = new Map(header.map((name, i) => [name, i]));
  for (const name of REQUIRED) {
    if (!index.has(name)) {
      throw new Error(`results.csv is missing the '${name}' column`);
    }
  }
  const rows: ResultRow[] = [];
  for (const line of lines.slice(1)) {
    const fields = line.split(',');
    const seAvg = fields[index.get('se_avg')!];
    if (seAvg === '' || seAvg === undefined) continue;
    rows.push({
      drop: Number(fields[index.get('drop')!]),
      realization: Number(fields[index.get('realization')!]),
      ue: Number(fields[index.get('ue')!]),
      combiner: fields[index.get('combiner')!],
      ablation: fields[index.get('ablation')!],
      seAvg: Number(seAvg),
    });
  }
  return rows;
}

export function readResults(dir: string): ResultRow[] {
  return parseResults(readFileSync(join(dir, 'results.csv'), 'utf8'));
}

export type GroupKey = 'combiner' | 'ablation';

/** Group SE samples by combiner or ablation tag, preserving first-seen order. */
export function groupValues(rows: ResultRow[], key: GroupKey): Map<string, number[]> {
  const groups = new Map<string, number[]>();
  for (const row of rows) {
    const tag = key === 'combiner' ? row.combiner : row.ablation;
    const bucket = groups.get(tag);
    if (bucket) {
      bucket.push(row.seAvg);
    } else {
      groups.set(tag, [row.seAvg]);
    }
  }
  return groups;
}
