/**
 * Progress dashboard: per-engine category counts and shares at segment
 * and word level, rebuilt from the server report after every save.
 *
 * The model is lifted field-for-field from the machine report; nothing
 * is recomputed client-side, so the dashboard can never drift from what
 * the server would print.
 */

import type { ApiClient, CategoryCells, MachineReport } from './api.js';

export interface DashboardRow {
  category: 'unchanged' | 'good_enough' | 'must_fix';
  segments: number;
  segmentPercent: number | null;
  words: number;
  wordPercent: number | null;
}

export interface EngineCard {
  engineId: string;
  totalEpp: number;
  totalSegments: number;
  totalWords: number;
  unannotatedUnits: number;
  rows: DashboardRow[];
}

export interface DeltaLine {
  engineA: string;
  engineB: string;
  eppDelta: number;
}

export interface DashboardModel {
  projectId: string;
  countingSide: string;
  generatedAt: string;
  partial: boolean;
  engines: EngineCard[];
  deltas: DeltaLine[];
}

const CATEGORIES = ['unchanged', 'good_enough', 'must_fix'] as const;

function cell<T>(cells: CategoryCells<T> | null, category: (typeof CATEGORIES)[number]): T | null {
  return cells === null ? null : cells[category];
}

export function buildDashboardModel(report: MachineReport): DashboardModel {
  return {
    projectId: report.project_id,
    countingSide: report.counting_side,
    generatedAt: report.generated_at,
    partial: report.partial,
    engines: report.profiles.map((profile) => ({
      engineId: profile.engine_id,
      totalEpp: profile.total_epp,
      totalSegments: profile.total_segments,
      totalWords: profile.total_words,
      unannotatedUnits: profile.unannotated_units,
      rows: CATEGORIES.map((category) => ({
        category,
        segments: profile.segment_counts[category],
        segmentPercent: cell(profile.segment_percents, category),
        words: profile.word_counts[category],
        wordPercent: cell(profile.word_percents, category),
      })),
    })),
    deltas: report.deltas.map((delta) => ({
      engineA: delta.engine_a,
      engineB: delta.engine_b,
      eppDelta: delta.epp_delta,
    })),
  };
}

function formatPercent(value: number | null): string {
  return value === null ? 'n/a' : `${value.toFixed(1)}%`;
}

export function renderDashboard(container: HTMLElement, model: DashboardModel): void {
  container.textContent = '';
  const heading = document.createElement('h2');
  heading.textContent = `Progress: ${model.projectId} (${model.countingSide} words)`;
  container.appendChild(heading);

  if (model.partial) {
    const note = document.createElement('p');
    note.className = 'partial-note';
    note.textContent = 'Units without annotations are counted as unchanged.';
    container.appendChild(note);
  }

  for (const engine of model.engines) {
    const card = document.createElement('section');
    card.className = 'engine-card';
    card.dataset.engine = engine.engineId;

    const title = document.createElement('h3');
    title.textContent =
      `${engine.engineId} — EPP ${engine.totalEpp}, ` +
      `${engine.totalSegments} segments, ${engine.totalWords} words` +
      (engine.unannotatedUnits ? `, ${engine.unannotatedUnits} unannotated` : '');
    card.appendChild(title);

    const table = document.createElement('table');
    const head = table.insertRow();
    for (const label of ['category', 'segments', 'seg%', 'words', 'word%']) {
      const th = document.createElement('th');
      th.textContent = label;
      head.appendChild(th);
    }
    for (const row of engine.rows) {
      const tr = table.insertRow();
      tr.className = row.category;
      const cells = [
        row.category.replace('_', ' '),
        String(row.segments),
        formatPercent(row.segmentPercent),
        String(row.words),
        formatPercent(row.wordPercent),
      ];
      for (const value of cells) {
        tr.insertCell().textContent = value;
      }
    }
    card.appendChild(table);
    container.appendChild(card);
  }

  if (model.deltas.length) {
    const deltas = document.createElement('ul');
    deltas.className = 'deltas';
    for (const delta of model.deltas) {
      const item = document.createElement('li');
      const sign = delta.eppDelta > 0 ? '+' : '';
      item.textContent = `${delta.engineA} minus ${delta.engineB}: EPP ${sign}${delta.eppDelta}`;
      deltas.appendChild(item);
    }
    container.appendChild(deltas);
  }
}

export async function refreshDashboard(
  client: ApiClient,
  projectId: string,
  container: HTMLElement,
): Promise<DashboardModel> {
  const report = await client.fetchReport(projectId);
  const model = buildDashboardModel(report);
  renderDashboard(container, model);
  return model;
}
