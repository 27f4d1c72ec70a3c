import { afterEach, describe, expect, it, vi } from 'vitest';

import {
  ApiClient,
  ApiError,
  ConflictError,
  RejectedError,
} from '../src/api';

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe('fetchAllUnits', () => {
  it('walks the cursor chain until no next_cursor comes back', async () => {
    const pages = [
      { project_id: 'p', revision: 4, units: [{ id: 'u1' }], next_cursor: '1' },
      { project_id: 'p', revision: 4, units: [{ id: 'u2' }], next_cursor: '2' },
      { project_id: 'p', revision: 4, units: [{ id: 'u3' }], next_cursor: null },
    ];
    const calls: string[] = [];
    vi.stubGlobal('fetch', async (url: string) => {
      calls.push(url);
      return jsonResponse(pages.shift());
    });

    const result = await new ApiClient().fetchAllUnits('p');
    expect(result.revision).toBe(4);
    expect(result.units.map((u) => u.id)).toEqual(['u1', 'u2', 'u3']);
    expect(calls).toEqual([
      '/projects/p/units',
      '/projects/p/units?cursor=1',
      '/projects/p/units?cursor=2',
    ]);
  });
});

describe('saveAnnotations', () => {
  it('sends the revision header and the bare JSON array', async () => {
    let seen: { url: string; init: RequestInit } | null = null;
    vi.stubGlobal('fetch', async (url: string, init: RequestInit) => {
      seen = { url, init };
      return jsonResponse({ new_revision: 1, epptu: 5, category: 'must_fix' });
    });

    const result = await new ApiClient('http://x').saveAnnotations(
      'p',
      'u 1',
      'deepl',
      [{ error_type: 'TRM', severity: 'minor', note: null, span: null, annotator_id: null }],
      0,
    );
    expect(result).toEqual({ new_revision: 1, epptu: 5, category: 'must_fix' });
    const { url, init } = seen!;
    expect(url).toBe('http://x/projects/p/units/u%201/engines/deepl/annotations');
    expect(init.method).toBe('PUT');
    expect((init.headers as Record<string, string>)['X-Expected-Revision']).toBe('0');
    expect(JSON.parse(init.body as string)).toHaveLength(1);
  });

  it('raises ConflictError carrying both revisions on 409', async () => {
    vi.stubGlobal('fetch', async () =>
      jsonResponse(
        {
          error: {
            code: 'revision-conflict',
            message: 'stale',
            current_revision: 6,
            expected_revision: 2,
          },
        },
        409,
      ),
    );
    const attempt = new ApiClient().saveAnnotations('p', 'u', 'e', [], 2);
    await expect(attempt).rejects.toBeInstanceOf(ConflictError);
    await attempt.catch((error: ConflictError) => {
      expect(error.currentRevision).toBe(6);
      expect(error.expectedRevision).toBe(2);
    });
  });

  it('raises RejectedError with the violation list on 422', async () => {
    vi.stubGlobal('fetch', async () =>
      jsonResponse(
        {
          error: {
            code: 'validation',
            message: 'annotation body rejected',
            violations: [{ code: 'span-bounds', message: 'span ends past the text' }],
          },
        },
        422,
      ),
    );
    const attempt = new ApiClient().saveAnnotations('p', 'u', 'e', [], 0);
    await expect(attempt).rejects.toBeInstanceOf(RejectedError);
    await attempt.catch((error: RejectedError) => {
      expect(error.violations[0]?.code).toBe('span-bounds');
    });
  });

  it('raises ApiError for anything else', async () => {
    vi.stubGlobal('fetch', async () =>
      jsonResponse({ error: { code: 'not-found', message: 'no such unit' } }, 404),
    );
    await expect(new ApiClient().saveAnnotations('p', 'u', 'e', [], 0)).rejects.toSatisfy(
      (error: unknown) => error instanceof ApiError && error.status === 404,
    );
  });
});

describe('fetchReport', () => {
  it('requests the machine format and optional engine list', async () => {
    const calls: string[] = [];
    vi.stubGlobal('fetch', async (url: string) => {
      calls.push(url);
      return jsonResponse({ profiles: [], deltas: [] });
    });
    const client = new ApiClient();
    await client.fetchReport('p');
    await client.fetchReport('p', ['a', 'b']);
    expect(calls[0]).toBe('/projects/p/report?format=machine');
    expect(calls[1]).toBe('/projects/p/report?format=machine&engines=a%2Cb');
  });
});
