import { describe, expect, it } from 'vitest';

import { groupValues, parseResults } from '../src/csv.js';

const SAMPLE = [
  'drop,realization,ue,combiner,ablation,se_avg',
  '0,0,0,aware,none,1.25',
  '0,0,1,aware,none,0.75',
  '0,0,0,perfect,none,3.5',
  '0,1,0,aware,no-adc,2.0',
].join('\n');

describe('parseResults', () => {
  it('parses rows with numeric fields', () => {
    const rows = parseResults(SAMPLE);
    expect(rows).toHaveLength(4);
    expect(rows[0]).toEqual({
      drop: 0, realization: 0, ue: 0, combiner: 'aware', ablation: 'none', seAvg: 1.25,
    });
  });

  it('skips per-subcarrier expansion rows without se_avg', () => {
    const text = [
      'drop,realization,ue,combiner,ablation,se_avg,m,se_m',
      '0,0,0,aware,none,1.5,,',
      '0,0,0,aware,none,,0,1.4',
      '0,0,0,aware,none,,1,1.6',
    ].join('\n');
    const rows = parseResults(text);
    expect(rows).toHaveLength(1);
    expect(rows[0].seAvg).toBe(1.5);
  });

  it('reports missing columns', () => {
    expect(() => parseResults('drop,ue\n0,1')).toThrow(/missing the 'realization'/);
  });

  it('rejects empty files', () => {
    expect(() => parseResults('')).toThrow(/empty/);
  });
});

describe('groupValues', () => {
  it('groups by combiner and by ablation', () => {
    const rows = parseResults(SAMPLE);
    const byCombiner = groupValues(rows, 'combiner');
    expect([...byCombiner.keys()].sort()).toEqual(['aware', 'perfect']);
    expect(byCombiner.get('aware')).toEqual([1.25, 0.75, 2.0]);
    const byAblation = groupValues(rows, 'ablation');
    expect(byAblation.get('no-adc')).toEqual([2.0]);
  });
});
