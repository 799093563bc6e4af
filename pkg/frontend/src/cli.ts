#!/usr/bin/env node
import { parseArgs } from 'node:util';

import { plotCdf } from './plot.js';

const USAGE = 'usage: plot-cdf --in DIR --group-by combiner|ablation --out FILE.svg';

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        in: { type: 'string' },
        'group-by': { type: 'string' },
        out: { type: 'string' },
        width: { type: 'string' },
        height: { type: 'string' },
      },
    });
  } catch (err) {
    console.error((err as Error).message);
    console.error(USAGE);
    return 2;
  }
  const { in: inDir, 'group-by': groupBy, out } = parsed.values;
  if (!inDir || !groupBy || !out) {
    console.error(USAGE);
    return 2;
  }
  if (groupBy !== 'combiner' && groupBy !== 'ablation') {
    console.error(`invalid --group-by '${groupBy}' (expected combiner or ablation)`);
    return 2;
  }
  try {
    const curves = plotCdf({
      inDir,
      groupBy,
      outFile: out,
      width: parsed.values.width ? Number(parsed.values.width) : undefined,
      height: parsed.values.height ? Number(parsed.values.height) : undefined,
    });
    console.error(`wrote ${out} with ${curves.length} curves: ${curves.map((c) => c.label).join(', ')}`);
    return 0;
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
}

process.exit(main(process.argv.slice(2)));
