import type { CdfPoint } from './ecdf.js';

export interface Curve {
  label: string;
  points: CdfPoint[];
}

export interface ChartOptions {
  width?: number;
  height?: number;
  xLabel?: string;
  yLabel?: string;
}

const COLORS = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b'];
const MARGIN = { top: 16, right: 16, bottom: 46, left: 56 };

function niceTicks(min: number, max: number, count = 6): number[] {
  const span = max - min || 1;
  const rawStep = span / count;
  const mag = 10 ** Math.floor(Math.log10(rawStep));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= count) ?? mag * 10;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let t = start; t <= max + 1e-12; t += step) {
    ticks.push(Number(t.toFixed(12)));
  }
  return ticks;
}

function escapeXml(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

/** Render empirical CDF curves into a standalone SVG document. */
export function renderCdfChart(curves: Curve[], options: ChartOptions = {}): string {
  if (curves.length === 0) {
    throw new Error('no curves to plot');
  }
  const width = options.width ?? 640;
  const height = options.height ?? 420;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const xs = curves.flatMap((c) => c.points.map((pt) => pt.x));
  const xMin = Math.min(0, ...xs);
  const xMax = Math.max(...xs) || 1;
  const toX = (x: number) => MARGIN.left + ((x - xMin) / (xMax - xMin || 1)) * plotW;
  const toY = (p: number) => MARGIN.top + (1 - p) * plotH;

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);

  for (const p of [0, 0.2, 0.4, 0.6, 0.8, 1]) {
    const y = toY(p);
    parts.push(`<line x1="${MARGIN.left}" y1="${y}" x2="${width - MARGIN.right}" y2="${y}" stroke="#ddd" stroke-width="1"/>`);
    parts.push(`<text x="${MARGIN.left - 8}" y="${y + 4}" text-anchor="end" font-size="11" fill="#333">${p.toFixed(1)}</text>`);
  }
  for (const t of niceTicks(xMin, xMax)) {
    const x = toX(t);
    parts.push(`<line x1="${x}" y1="${toY(0)}" x2="${x}" y2="${toY(0) + 5}" stroke="#333" stroke-width="1"/>`);
    parts.push(`<text x="${x}" y="${toY(0) + 18}" text-anchor="middle" font-size="11" fill="#333">${t}</text>`);
  }
  parts.push(`<line x1="${MARGIN.left}" y1="${toY(0)}" x2="${width - MARGIN.right}" y2="${toY(0)}" stroke="#333" stroke-width="1"/>`);
  parts.push(`<line x1="${MARGIN.left}" y1="${toY(0)}" x2="${MARGIN.left}" y2="${MARGIN.top}" stroke="#333" stroke-width="1"/>`);

  curves.forEach((curve, i) => {
    const color = COLORS[i % COLORS.length];
    // step curve: rise at each sample, starting from the axis
    const first = curve.points[0];
    let d = `M ${toX(first.x).toFixed(2)} ${toY(0).toFixed(2)}`;
    let prevP = 0;
    for (const pt of curve.points) {
      d += ` L ${toX(pt.x).toFixed(2)} ${toY(prevP).toFixed(2)}`;
      d += ` L ${toX(pt.x).toFixed(2)} ${toY(pt.p).toFixed(2)}`;
      prevP = pt.p;
    }
    parts.push(`<path d="${d}" fill="none" stroke="${color}" stroke-width="1.8"/>`);
    const legendY = MARGIN.top + 16 + i * 18;
    const legendX = MARGIN.left + 12;
    parts.push(`<line x1="${legendX}" y1="${legendY - 4}" x2="${legendX + 22}" y2="${legendY - 4}" stroke="${color}" stroke-width="2.5"/>`);
    parts.push(`<text x="${legendX + 28}" y="${legendY}" font-size="12" fill="#111">${escapeXml(curve.label)}</text>`);
  });

  const xLabel = escapeXml(options.xLabel ?? 'spectral efficiency [bit/symbol]');
  const yLabel = escapeXml(options.yLabel ?? 'CDF');
  parts.push(`<text x="${MARGIN.left + plotW / 2}" y="${height - 10}" text-anchor="middle" font-size="13" fill="#111">${xLabel}</text>`);
  parts.push(`<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" fill="#111" transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${yLabel}</text>`);
  parts.push('</svg>');
  return parts.join('\n');
}
