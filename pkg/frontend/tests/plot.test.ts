import { mkdtempSync, readFileSync, statSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import { describe, expect, it } from 'vitest';

import { median } from '../src/ecdf.js';
import { buildCurves, plotCdf } from '../src/plot.js';

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), 'fixtures');
const FIG1 = join(FIXTURES, 'fig1');
const FIG2 = join(FIXTURES, 'fig2');

function assertMonotoneEndingAtOne(points: { x: number; p: number }[]) {
  for (let i = 1; i < points.length; i += 1) {
    expect(points[i].x).toBeGreaterThanOrEqual(points[i - 1].x);
    expect(points[i].p).toBeGreaterThanOrEqual(points[i - 1].p);
  }
  expect(points[points.length - 1].p).toBe(1.0);
}

describe('combiner-comparison figure', () => {
  it('yields three monotone CDF curves ending at probability 1', () => {
    const curves = buildCurves(FIG1, 'combiner');
    expect(curves).toHaveLength(3);
    expect(new Set(curves.map((c) => c.label))).toEqual(
      new Set(['aware', 'unaware', 'perfect']),
    );
    for (const curve of curves) {
      assertMonotoneEndingAtOne(curve.points);
    }
  });

  it('writes an SVG with one path per curve without touching the inputs', () => {
    const csvPath = join(FIG1, 'results.csv');
    const before = readFileSync(csvPath, 'utf8');
    const mtime = statSync(csvPath).mtimeMs;
    const out = join(mkdtempSync(join(tmpdir(), 'cdf-')), 'fig1.svg');
    const curves = plotCdf({ inDir: FIG1, groupBy: 'combiner', outFile: out });
    const svg = readFileSync(out, 'utf8');
    expect(svg.startsWith('<svg')).toBe(true);
    expect(svg.match(/<path /g)).toHaveLength(curves.length);
    for (const curve of curves) {
      expect(svg).toContain(`>${curve.label}</text>`);
    }
    expect(readFileSync(csvPath, 'utf8')).toBe(before);
    expect(statSync(csvPath).mtimeMs).toBe(mtime);
  });
});

describe('ablation figure', () => {
  it('yields five curves with the no-adc curve rightmost at the median', () => {
    const curves = buildCurves(FIG2, 'ablation');
    expect(curves).toHaveLength(5);
    const medians = new Map(
      curves.map((c) => [c.label, median(c.points.map((pt) => pt.x))]),
    );
    const noAdc = medians.get('no-adc')!;
    for (const [label, value] of medians) {
      if (label !== 'no-adc') {
        expect(noAdc).toBeGreaterThan(value);
      }
    }
    for (const curve of curves) {
      assertMonotoneEndingAtOne(curve.points);
    }
  });

  it('renders the five-curve SVG', () => {
    const out = join(mkdtempSync(join(tmpdir(), 'cdf-')), 'fig2.svg');
    plotCdf({ inDir: FIG2, groupBy: 'ablation', outFile: out });
    const svg = readFileSync(out, 'utf8');
    expect(svg.match(/<path /g)).toHaveLength(5);
    expect(svg).toContain('no-adc');
  });
});

describe('error handling', () => {
  it('fails cleanly on a missing directory', () => {
    expect(() => buildCurves(join(FIXTURES, 'missing'), 'combiner')).toThrow();
  });
});
