/**
 * Client-side mirror of the server's scoring rules.
 *
 * Everything here is preview-only: the number shown while the evaluator
 * is still editing. Persisted values always come back from the server on
 * save and replace the preview (see annotate.ts).
 */

export type ErrorTypeCode =
  | 'IMP'
  | 'RAM'
  | 'TRM'
  | 'UGR'
  | 'MIS'
  | 'STL'
  | 'PRF'
  | 'PRN';

export type SeverityCode = 'minor' | 'medium' | 'major' | 'severe' | 'critical';

export type CategoryCode = 'unchanged' | 'good_enough' | 'must_fix';

export interface ErrorTypeInfo {
  code: ErrorTypeCode;
  label: string;
  definition: string;
}

// The closed set of error types, in display order. Codes and definitions
// must match the server; the contract test cross-checks the scoring.
export const ERROR_TYPES: readonly ErrorTypeInfo[] = [
  { code: 'IMP', label: 'Impact', definition: 'Overly literal wording that blunts the effect the text should have on its audience.' },
  { code: 'RAM', label: 'Required adaptation missing', definition: 'A source defect or target-market requirement that had to be corrected or adapted, but was not.' },
  { code: 'TRM', label: 'Terminology', definition: 'Wrong, inconsistent, or non-domain term where the subject field fixes the expected one.' },
  { code: 'UGR', label: 'Ungrammatical', definition: 'Grammar fault in the target text: agreement, case, word form, or syntax.' },
  { code: 'MIS', label: 'Mistranslation', definition: 'The meaning of the source does not make it into the target.' },
  { code: 'STL', label: 'Style', definition: 'Awkward, clumsy, or off-register wording that is not otherwise incorrect.' },
  { code: 'PRF', label: 'Proofreading', definition: 'Mechanical slip: typo, punctuation, spacing, casing, or number formatting.' },
  { code: 'PRN', label: 'Proper name', definition: 'Person, product, organization, or place name rendered incorrectly.' },
];

export const SEVERITIES: readonly { code: SeverityCode; weight: number }[] = [
  { code: 'minor', weight: 1 },
  { code: 'medium', weight: 2 },
  { code: 'major', weight: 4 },
  { code: 'severe', weight: 8 },
  { code: 'critical', weight: 16 },
];

const WEIGHT_BY_SEVERITY = new Map(SEVERITIES.map((s) => [s.code, s.weight]));

export function severityWeight(code: SeverityCode): number {
  const weight = WEIGHT_BY_SEVERITY.get(code);
  if (weight === undefined) {
    throw new Error(`unknown severity: ${code}`);
  }
  return weight;
}

/** Penalty preview for a set of drafted errors: plain sum of weights. */
export function epptuPreview(slots: readonly { severity: SeverityCode }[]): number {
  return slots.reduce((sum, slot) => sum + severityWeight(slot.severity), 0);
}

export function categoryFor(epptu: number): CategoryCode {
  if (epptu < 0 || !Number.isInteger(epptu)) {
    throw new Error(`penalty must be a non-negative integer, got ${epptu}`);
  }
  if (epptu === 0) return 'unchanged';
  if (epptu <= 4) return 'good_enough';
  return 'must_fix';
}

export function categoryLabel(category: CategoryCode): string {
  return category.replace('_', ' ');
}

/** Badge string shown next to the form, e.g. "EPPTU 5 — must fix". */
export function badgeText(epptu: number, category: CategoryCode): string {
  return `EPPTU ${epptu} — ${categoryLabel(category)}`;
}
