import { describe, expect, it } from 'vitest';

import { ecdf, median } from '../src/ecdf.js';

describe('ecdf', () => {
  it('sorts samples and ends at probability 1', () => {
    const points = ecdf([2.5, 1.0, 4.0, 3.0]);
    expect(points.map((pt) => pt.x)).toEqual([1.0, 2.5, 3.0, 4.0]);
    expect(points[points.length - 1].p).toBe(1.0);
  });

  it('is monotone nondecreasing and bounded in (0, 1]', () => {
    const points = ecdf([5, -1, 2, 2, 0.5, 9, 3]);
    for (let i = 1; i < points.length; i += 1) {
      expect(points[i].x).toBeGreaterThanOrEqual(points[i - 1].x);
      expect(points[i].p).toBeGreaterThan(points[i - 1].p);
    }
    expect(points[0].p).toBeGreaterThan(0);
    expect(points[points.length - 1].p).toBeLessThanOrEqual(1);
  });

  it('handles a single sample as a step at that value', () => {
    expect(ecdf([7.5])).toEqual([{ x: 7.5, p: 1.0 }]);
  });

  it('rejects empty input', () => {
    expect(() => ecdf([])).toThrow();
  });
});

describe('median', () => {
  it('matches odd and even cases', () => {
    expect(median([3, 1, 2])).toBe(2);
    expect(median([4, 1, 2, 3])).toBe(2.5);
  });
});
