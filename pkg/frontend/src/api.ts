/**
 * Typed fetch client for the annotation service.
 *
 * Thin by design: shapes mirror the wire format one to one, errors map
 * to typed exceptions the views can branch on. No caching, no retries.
 */

import type { CategoryCode, ErrorTypeCode, SeverityCode } from './scoring.js';

export interface ProjectSummary {
  project_id: string;
  name: string;
  source_lang: string;
  target_lang: string;
  engines: string[];
  units: number;
  revision: number;
}

export interface AnnotationPayload {
  error_type: ErrorTypeCode;
  severity: SeverityCode;
  note: string | null;
  span: [number, number] | null;
  annotator_id: string | null;
}

export interface UnitEngineState {
  epptu: number;
  category: CategoryCode;
  annotated: boolean;
  annotations: AnnotationPayload[];
}

export interface UnitSummary {
  id: string;
  source: string;
  targets: Record<string, string>;
  post_edited: Record<string, string>;
  engines: Record<string, UnitEngineState>;
}

export interface UnitPage {
  project_id: string;
  revision: number;
  units: UnitSummary[];
  next_cursor: string | null;
}

export interface SaveResult {
  new_revision: number;
  epptu: number;
  category: CategoryCode;
}

export interface CategoryCells<T> {
  unchanged: T;
  good_enough: T;
  must_fix: T;
}

export interface ReportProfile {
  engine_id: string;
  counting_side: string;
  total_epp: number;
  total_segments: number;
  total_words: number;
  unannotated_units: number;
  matrix: Record<string, Record<string, number>>;
  segment_counts: CategoryCells<number>;
  segment_percents: CategoryCells<number> | null;
  word_counts: CategoryCells<number>;
  word_percents: CategoryCells<number> | null;
  epptu_histogram: Record<string, number>;
}

export interface ReportDelta {
  engine_a: string;
  engine_b: string;
  epp_delta: number;
  segment_category_deltas: CategoryCells<number>;
  word_category_deltas: CategoryCells<number>;
}

export interface MachineReport {
  project_id: string;
  counting_side: string;
  generated_at: string;
  partial: boolean;
  profiles: ReportProfile[];
  deltas: ReportDelta[];
}

interface ErrorBody {
  error?: {
    code?: string;
    message?: string;
    current_revision?: number;
    expected_revision?: number;
    violations?: { code: string; message: string }[];
  };
}

/** Another save landed first; reload the unit before retrying. */
export class ConflictError extends Error {
  constructor(
    public readonly currentRevision: number,
    public readonly expectedRevision: number,
  ) {
    super(`saved revision is ${currentRevision}, you loaded ${expectedRevision}`);
  }
}

/** The server refused the annotation payload; nothing was saved. */
export class RejectedError extends Error {
  constructor(public readonly violations: { code: string; message: string }[]) {
    super(violations.map((v) => v.message).join('; ') || 'annotations rejected');
  }
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function errorBody(response: Response): Promise<ErrorBody> {
  try {
    return (await response.json()) as ErrorBody;
  } catch {
    return {};
  }
}

async function failFrom(response: Response): Promise<never> {
  const body = await errorBody(response);
  if (response.status === 409 && body.error) {
    throw new ConflictError(
      body.error.current_revision ?? -1,
      body.error.expected_revision ?? -1,
    );
  }
  if (response.status === 422 && body.error) {
    throw new RejectedError(body.error.violations ?? []);
  }
  throw new ApiError(response.status, body.error?.message ?? response.statusText);
}

export class ApiClient {
  constructor(private readonly baseUrl: string = '') {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) {
      await failFrom(response);
    }
    return (await response.json()) as T;
  }

  async listProjects(): Promise<ProjectSummary[]> {
    const body = await this.getJson<{ projects: ProjectSummary[] }>('/projects');
    return body.projects;
  }

  async fetchUnitPage(projectId: string, cursor?: string, pageSize?: number): Promise<UnitPage> {
    const params = new URLSearchParams();
    if (cursor !== undefined) params.set('cursor', cursor);
    if (pageSize !== undefined) params.set('page_size', String(pageSize));
    const query = params.toString();
    const path = `/projects/${encodeURIComponent(projectId)}/units${query ? '?' + query : ''}`;
    return this.getJson<UnitPage>(path);
  }

  /** Walks the cursor chain until the server stops handing one out. */
  async fetchAllUnits(projectId: string): Promise<{ revision: number; units: UnitSummary[] }> {
    const units: UnitSummary[] = [];
    let revision = 0;
    let cursor: string | undefined;
    do {
      const page = await this.fetchUnitPage(projectId, cursor);
      revision = page.revision;
      units.push(...page.units);
      cursor = page.next_cursor ?? undefined;
    } while (cursor !== undefined);
    return { revision, units };
  }

  async saveAnnotations(
    projectId: string,
    unitId: string,
    engineId: string,
    annotations: AnnotationPayload[],
    expectedRevision: number,
  ): Promise<SaveResult> {
    const path =
      `/projects/${encodeURIComponent(projectId)}` +
      `/units/${encodeURIComponent(unitId)}` +
      `/engines/${encodeURIComponent(engineId)}/annotations`;
    const response = await fetch(this.baseUrl + path, {
      method: 'PUT',
      headers: {
        'Content-Type': 'application/json',
        'X-Expected-Revision': String(expectedRevision),
      },
      body: JSON.stringify(annotations),
    });
    if (!response.ok) {
      await failFrom(response);
    }
    return (await response.json()) as SaveResult;
  }

  async fetchReport(projectId: string, engines?: string[]): Promise<MachineReport> {
    const params = new URLSearchParams({ format: 'machine' });
    if (engines && engines.length) params.set('engines', engines.join(','));
    const path = `/projects/${encodeURIComponent(projectId)}/report?${params.toString()}`;
    return this.getJson<MachineReport>(path);
  }
}
