/**
 * Contract test against the real annotation service, not a mock: spawns
 * the Python process on a throwaway project and drives it over HTTP the
 * same way the browser bundle does.
 */

import { spawn, execFile, type ChildProcess } from 'node:child_process';
import { mkdtemp, writeFile } from 'node:fs/promises';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { promisify } from 'node:util';

import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient, ConflictError } from '../src/api';
import { buildDashboardModel } from '../src/dashboard';
import { badgeText } from '../src/scoring';

const run = promisify(execFile);

const PORT = 8941;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
let client: ApiClient;

async function waitForHealth(): Promise<void> {
  for (let attempt = 0; attempt < 50; attempt++) {
    try {
      const response = await fetch(`${BASE}/healthz`);
      if (response.ok) return;
    } catch {
      // server not accepting yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error('annotation service never came up');
}

beforeAll(async () => {
  const dir = await mkdtemp(join(tmpdir(), 'workbench-contract-'));
  const tsv = [
    'id\tsource\tdeepl\tgoogle',
    'u1\tthe quick brown fox\tfast brown fox\tthe quick brown fox',
    'u2\tjumps over the lazy dog\tjumps over lazy dog\tleaps over the lazy dog',
    'u3\tsense of style\tstyle feel\tsense of style',
    '',
  ].join('\n');
  await writeFile(join(dir, 'corpus.tsv'), tsv);
  await run('python3', [
    '-m', 'hopeval', 'import',
    '--tsv', join(dir, 'corpus.tsv'),
    '--source-col', '1', '--id-col', '0',
    '--engine', 'deepl=2', '--engine', 'google=3',
    '--out', join(dir, 'demo.hope'),
    '--project-id', 'demo', '--name', 'Contract demo',
  ]);

  server = spawn('python3', [
    '-m', 'hopeval', 'serve',
    '--projects-dir', dir,
    '--listen', `127.0.0.1:${PORT}`,
  ], { stdio: 'ignore' });
  client = new ApiClient(BASE);
  await waitForHealth();
});

afterAll(() => {
  server?.kill();
});

describe('service contract', () => {
  it('lists the imported project', async () => {
    const projects = await client.listProjects();
    expect(projects).toHaveLength(1);
    expect(projects[0]).toMatchObject({
      project_id: 'demo',
      engines: ['deepl', 'google'],
      units: 3,
      revision: 0,
    });
  });

  it('pages through units with a cursor', async () => {
    const first = await client.fetchUnitPage('demo', undefined, 1);
    expect(first.units.map((u) => u.id)).toEqual(['u1']);
    expect(first.next_cursor).not.toBeNull();
    const second = await client.fetchUnitPage('demo', first.next_cursor!, 1);
    expect(second.units.map((u) => u.id)).toEqual(['u2']);

    const everything = await client.fetchAllUnits('demo');
    expect(everything.units.map((u) => u.id)).toEqual(['u1', 'u2', 'u3']);
  });

  it('confirms a terminology-minor plus mistranslation-major save as EPPTU 5, must fix', async () => {
    const result = await client.saveAnnotations(
      'demo', 'u1', 'deepl',
      [
        { error_type: 'TRM', severity: 'minor', note: null, span: null, annotator_id: null },
        { error_type: 'MIS', severity: 'major', note: null, span: null, annotator_id: null },
      ],
      0,
    );
    expect(result).toEqual({ new_revision: 1, epptu: 5, category: 'must_fix' });
    // exactly what the badge next to the form will display
    expect(badgeText(result.epptu, result.category)).toBe('EPPTU 5 — must fix');
  });

  it('rejects a save against a stale revision with both revisions attached', async () => {
    const attempt = client.saveAnnotations('demo', 'u2', 'deepl', [], 0);
    await expect(attempt).rejects.toBeInstanceOf(ConflictError);
    await attempt.catch((error: ConflictError) => {
      expect(error.currentRevision).toBe(1);
      expect(error.expectedRevision).toBe(0);
    });
  });

  it('reads its own write back in the unit summaries', async () => {
    const { revision, units } = await client.fetchAllUnits('demo');
    expect(revision).toBe(1);
    const u1 = units.find((u) => u.id === 'u1')!;
    const state = u1.engines['deepl']!;
    expect(state.annotated).toBe(true);
    expect(state.epptu).toBe(5);
    expect(state.category).toBe('must_fix');
    expect(state.annotations.map((a) => a.error_type)).toEqual(['TRM', 'MIS']);
  });

  it('builds the dashboard field-for-field from the machine report', async () => {
    const report = await client.fetchReport('demo');
    const raw = (await (await fetch(`${BASE}/projects/demo/report?format=machine`)).json()) as typeof report;
    expect(report).toEqual(raw);

    const model = buildDashboardModel(report);
    expect(model.projectId).toBe(raw.project_id);
    expect(model.countingSide).toBe(raw.counting_side);
    expect(model.generatedAt).toBe(raw.generated_at);
    expect(model.partial).toBe(raw.partial);
    expect(model.engines).toHaveLength(raw.profiles.length);
    for (const [index, profile] of raw.profiles.entries()) {
      const card = model.engines[index]!;
      expect(card.engineId).toBe(profile.engine_id);
      expect(card.totalEpp).toBe(profile.total_epp);
      expect(card.totalSegments).toBe(profile.total_segments);
      expect(card.totalWords).toBe(profile.total_words);
      expect(card.unannotatedUnits).toBe(profile.unannotated_units);
      for (const row of card.rows) {
        expect(row.segments).toBe(profile.segment_counts[row.category]);
        expect(row.segmentPercent).toBe(
          profile.segment_percents === null ? null : profile.segment_percents[row.category],
        );
        expect(row.words).toBe(profile.word_counts[row.category]);
        expect(row.wordPercent).toBe(
          profile.word_percents === null ? null : profile.word_percents[row.category],
        );
      }
    }
    for (const [index, delta] of raw.deltas.entries()) {
      expect(model.deltas[index]).toEqual({
        engineA: delta.engine_a,
        engineB: delta.engine_b,
        eppDelta: delta.epp_delta,
      });
    }

    // annotated unit scored 5 on deepl: the dashboard must show one must_fix
    const deepl = model.engines.find((e) => e.engineId === 'deepl')!;
    expect(deepl.totalEpp).toBe(5);
    expect(deepl.rows.find((r) => r.category === 'must_fix')?.segments).toBe(1);
    expect(model.partial).toBe(true);
  });

  it('accepts the next save only at the advanced revision', async () => {
    const result = await client.saveAnnotations(
      'demo', 'u2', 'google',
      [{ error_type: 'STL', severity: 'medium', note: null, span: null, annotator_id: null }],
      1,
    );
    expect(result.new_revision).toBe(2);
    expect(result.category).toBe('good_enough');
  });
});
