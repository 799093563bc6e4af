import { writeFileSync } from 'node:fs';

import { groupValues, readResults, type GroupKey } from './csv.js';
import { ecdf } from './ecdf.js';
import { renderCdfChart, type Curve } from './svg.js';

export interface PlotSpec {
  inDir: string;
  groupBy: GroupKey;
  outFile: string;
  width?: number;
  height?: number;
}

/** Build one ECDF curve per group from a results directory. */
export function buildCurves(inDir: string, groupBy: GroupKey): Curve[] {
  const rows = readResults(inDir);
  const groups = groupValues(rows, groupBy);
  const curves: Curve[] = [];
  for (const [label, values] of groups) {
    if (values.length === 0) {
      throw new Error(`group '${label}' has no SE samples`);
    }
    curves.push({ label, points: ecdf(values) });
  }
  if (curves.length === 0) {
    throw new Error(`no '${groupBy}' groups found in ${inDir}`);
  }
  return curves;
}

/** Render the grouped CDF figure and write it as SVG. Returns the curves. */
export function plotCdf(spec: PlotSpec): Curve[] {
  const curves = buildCurves(spec.inDir, spec.groupBy);
  const svg = renderCdfChart(curves, { width: spec.width, height: spec.height });
  writeFileSync(spec.outFile, svg);
  return curves;
}
