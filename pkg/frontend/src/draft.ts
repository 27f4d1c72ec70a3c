/**
 * Draft state for one (unit, engine) pair.
 *
 * Slots live client-side until an explicit save; there is no autosave of
 * half-classified errors. The revision captured at load rides along so the
 * save can detect that someone else wrote in between.
 */

import type { AnnotationPayload } from './api.js';
import type { ErrorTypeCode, SeverityCode } from './scoring.js';
import { categoryFor, epptuPreview } from './scoring.js';

export interface DraftSlot {
  errorType: ErrorTypeCode;
  severity: SeverityCode;
  note: string | null;
  span: [number, number] | null;
}

export interface Draft {
  unitId: string;
  engineId: string;
  slots: DraftSlot[];
  baseRevision: number;
  dirty: boolean;
}

// Above this many errors the segment is almost certainly a rewrite, not
// an annotation target; warn but never block.
export const SOFT_SLOT_LIMIT = 3;

export function createDraft(
  unitId: string,
  engineId: string,
  baseRevision: number,
  existing: readonly AnnotationPayload[] = [],
): Draft {
  return {
    unitId,
    engineId,
    slots: existing.map((a) => ({
      errorType: a.error_type,
      severity: a.severity,
      note: a.note,
      span: a.span,
    })),
    baseRevision,
    dirty: false,
  };
}

export interface AddResult {
  draft: Draft;
  overLimit: boolean;
}

export function addSlot(draft: Draft, slot: DraftSlot): AddResult {
  const slots = [...draft.slots, slot];
  return {
    draft: { ...draft, slots, dirty: true },
    overLimit: slots.length > SOFT_SLOT_LIMIT,
  };
}

export function removeSlot(draft: Draft, index: number): Draft {
  if (index < 0 || index >= draft.slots.length) return draft;
  const slots = draft.slots.filter((_, i) => i !== index);
  return { ...draft, slots, dirty: true };
}

export function updateSlot(draft: Draft, index: number, patch: Partial<DraftSlot>): Draft {
  const current = draft.slots[index];
  if (current === undefined) return draft;
  const slots = [...draft.slots];
  slots[index] = { ...current, ...patch };
  return { ...draft, slots, dirty: true };
}

export function draftPreview(draft: Draft): { epptu: number; category: ReturnType<typeof categoryFor> } {
  const epptu = epptuPreview(draft.slots);
  return { epptu, category: categoryFor(epptu) };
}

/** Wire shape for a save; optional fields are sent explicitly as null. */
export function toPayload(draft: Draft): AnnotationPayload[] {
  return draft.slots.map((slot) => ({
    error_type: slot.errorType,
    severity: slot.severity,
    note: slot.note,
    span: slot.span,
    annotator_id: null,
  }));
}

/** After the user chose to reload on a conflict: keep slots, adopt revision. */
export function rebase(draft: Draft, revision: number): Draft {
  return { ...draft, baseRevision: revision };
}

export function markSaved(draft: Draft, revision: number): Draft {
  return { ...draft, baseRevision: revision, dirty: false };
}
