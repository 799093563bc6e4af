/** A point on an empirical CDF curve. */
export interface CdfPoint {
  x: number;
  p: number;
}

/**
 * Empirical CDF of a sample: sorted values with F(x_i) = (i + 1) / n, so the
 * curve is monotone nondecreasing and reaches exactly 1 at the maximum.
 */
export function ecdf(values: number[]): CdfPoint[] {
  if (values.length === 0) {
    throw new Error('ecdf needs at least one sample');
  }
  const sorted = [...values].sort((a, b) => a - b);
  return sorted.map((x, i) => ({ x, p: (i + 1) / sorted.length }));
}

export function median(values: number[]): number {
  if (values.length === 0) {
    throw new Error('median needs at least one sample');
  }
  const sorted = [...values].sort((a, b) => a - b);
  const mid = Math.floor(sorted.length / 2);
  return sorted.length % 2 === 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
}
