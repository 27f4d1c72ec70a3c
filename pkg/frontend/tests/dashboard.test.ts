// @vitest-environment jsdom
import { describe, expect, it } from 'vitest';

import type { MachineReport } from '../src/api';
import { buildDashboardModel, renderDashboard } from '../src/dashboard';

const REPORT: MachineReport = {
  project_id: 'demo',
  counting_side: 'source',
  generated_at: '2024-05-17T09:30:00Z',
  partial: true,
  profiles: [
    {
      engine_id: 'deepl',
      counting_side: 'source',
      total_epp: 5,
      total_segments: 3,
      total_words: 11,
      unannotated_units: 1,
      matrix: { TRM: { minor: 1 } },
      segment_counts: { unchanged: 2, good_enough: 0, must_fix: 1 },
      segment_percents: { unchanged: 66.7, good_enough: 0.0, must_fix: 33.3 },
      word_counts: { unchanged: 7, good_enough: 0, must_fix: 4 },
      word_percents: { unchanged: 63.6, good_enough: 0.0, must_fix: 36.4 },
      epptu_histogram: { '0': 2, '5': 1 },
    },
    {
      engine_id: 'google',
      counting_side: 'source',
      total_epp: 0,
      total_segments: 0,
      total_words: 0,
      unannotated_units: 0,
      matrix: {},
      segment_counts: { unchanged: 0, good_enough: 0, must_fix: 0 },
      segment_percents: null,
      word_counts: { unchanged: 0, good_enough: 0, must_fix: 0 },
      word_percents: null,
      epptu_histogram: {},
    },
  ],
  deltas: [
    {
      engine_a: 'deepl',
      engine_b: 'google',
      epp_delta: 5,
      segment_category_deltas: { unchanged: 2, good_enough: 0, must_fix: 1 },
      word_category_deltas: { unchanged: 7, good_enough: 0, must_fix: 4 },
    },
  ],
};

describe('buildDashboardModel', () => {
  it('lifts every figure straight from the report', () => {
    const model = buildDashboardModel(REPORT);
    expect(model.projectId).toBe(REPORT.project_id);
    expect(model.partial).toBe(true);

    const deepl = model.engines[0]!;
    const profile = REPORT.profiles[0]!;
    expect(deepl.totalEpp).toBe(profile.total_epp);
    expect(deepl.totalSegments).toBe(profile.total_segments);
    expect(deepl.totalWords).toBe(profile.total_words);
    expect(deepl.unannotatedUnits).toBe(profile.unannotated_units);
    expect(deepl.rows.map((r) => r.segments)).toEqual([2, 0, 1]);
    expect(deepl.rows.map((r) => r.segmentPercent)).toEqual([66.7, 0.0, 33.3]);
    expect(deepl.rows.map((r) => r.words)).toEqual([7, 0, 4]);
    expect(deepl.rows.map((r) => r.wordPercent)).toEqual([63.6, 0.0, 36.4]);

    const empty = model.engines[1]!;
    expect(empty.rows.every((r) => r.segmentPercent === null)).toBe(true);

    expect(model.deltas).toEqual([{ engineA: 'deepl', engineB: 'google', eppDelta: 5 }]);
  });
});

describe('renderDashboard', () => {
  it('shows one card per engine with both levels and n/a for empty shares', () => {
    const container = document.createElement('div');
    renderDashboard(container, buildDashboardModel(REPORT));

    const cards = container.querySelectorAll('.engine-card');
    expect(cards).toHaveLength(2);
    expect(cards[0]?.querySelector('h3')?.textContent).toContain('deepl — EPP 5');
    expect(cards[0]?.querySelector('h3')?.textContent).toContain('1 unannotated');

    const firstRows = cards[0]!.querySelectorAll('tr');
    // header + three category rows
    expect(firstRows).toHaveLength(4);
    expect(firstRows[3]?.textContent).toContain('must fix');
    expect(firstRows[3]?.textContent).toContain('33.3%');
    expect(firstRows[3]?.textContent).toContain('36.4%');

    expect(cards[1]?.textContent).toContain('n/a');
    expect(container.querySelector('.partial-note')).not.toBeNull();
    expect(container.querySelector('.deltas')?.textContent).toContain(
      'deepl minus google: EPP +5',
    );
  });

  it('re-renders idempotently after a refresh', () => {
    const container = document.createElement('div');
    const model = buildDashboardModel(REPORT);
    renderDashboard(container, model);
    const once = container.innerHTML;
    renderDashboard(container, model);
    expect(container.innerHTML).toBe(once);
  });
});
