/**
 * Annotation form for one unit at a time: source and MT output side by
 * side, up to N typed errors with severities, a live penalty badge, and
 * explicit save with conflict handling.
 *
 * The badge is computed locally only while editing and is visibly marked
 * as a preview; after a save the server-returned value replaces it.
 */

import {
  ApiClient,
  ConflictError,
  RejectedError,
  type UnitSummary,
} from './api.js';
import {
  addSlot,
  createDraft,
  draftPreview,
  markSaved,
  rebase,
  removeSlot,
  toPayload,
  updateSlot,
  type Draft,
  type DraftSlot,
} from './draft.js';
import {
  ERROR_TYPES,
  SEVERITIES,
  badgeText,
  type ErrorTypeCode,
  type SeverityCode,
} from './scoring.js';

export interface AnnotateViewOptions {
  client: ApiClient;
  projectId: string;
  container: HTMLElement;
  onSaved?: () => void;
}

export interface AnnotateView {
  load(): Promise<void>;
  nextUnit(): void;
  previousUnit(): void;
  jumpTo(index: number): void;
  cycleEngine(step: number): void;
  beginSlot(errorType: ErrorTypeCode): void;
  commitSlot(severity: SeverityCode): boolean;
  cancelSlot(): void;
  removeLastSlot(): void;
  save(): Promise<void>;
  reloadAfterConflict(): Promise<void>;
  readonly element: HTMLElement;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function createAnnotateView(options: AnnotateViewOptions): AnnotateView {
  const { client, projectId, container, onSaved } = options;

  let units: UnitSummary[] = [];
  let revision = 0;
  let unitIndex = 0;
  let engineIds: string[] = [];
  let engineId = '';
  let showOtherEngines = false;
  let pendingType: ErrorTypeCode | null = null;
  let conflict: ConflictError | null = null;
  let status = '';
  // unsaved drafts survive navigation; keyed by unit and engine
  const drafts = new Map<string, Draft>();

  const root = el('div', 'annotate');
  container.appendChild(root);

  function draftKey(unitId: string, engine: string): string {
    return unitId + '\u0000' + engine;
  }

  function currentUnit(): UnitSummary | undefined {
    return units[unitIndex];
  }

  function currentDraft(): Draft | undefined {
    const unit = currentUnit();
    if (!unit || !engineId) return undefined;
    const key = draftKey(unit.id, engineId);
    let draft = drafts.get(key);
    if (!draft) {
      const state = unit.engines[engineId];
      draft = createDraft(unit.id, engineId, revision, state ? state.annotations : []);
      drafts.set(key, draft);
    }
    return draft;
  }

  function setDraft(draft: Draft): void {
    drafts.set(draftKey(draft.unitId, draft.engineId), draft);
  }

  function render(): void {
    root.textContent = '';
    const unit = currentUnit();
    if (!unit) {
      root.appendChild(el('p', 'empty', 'No units in this project.'));
      return;
    }
    const draft = currentDraft();
    if (!draft) return;

    const header = el('div', 'unit-header');
    header.appendChild(
      el('span', 'unit-position', `Unit ${unitIndex + 1} / ${units.length}`),
    );
    header.appendChild(el('span', 'unit-id', unit.id));
    const engineBar = el('span', 'engine-bar');
    for (const id of engineIds) {
      const button = el('button', id === engineId ? 'engine active' : 'engine', id);
      button.dataset.engine = id;
      button.addEventListener('click', () => {
        engineId = id;
        pendingType = null;
        render();
      });
      engineBar.appendChild(button);
    }
    header.appendChild(engineBar);
    root.appendChild(header);

    const panes = el('div', 'panes');
    const sourcePane = el('div', 'pane source');
    sourcePane.appendChild(el('h3', undefined, 'Source'));
    sourcePane.appendChild(el('p', 'text', unit.source));
    panes.appendChild(sourcePane);

    const targetPane = el('div', 'pane target');
    targetPane.appendChild(el('h3', undefined, `Output (${engineId})`));
    targetPane.appendChild(el('p', 'text', unit.targets[engineId] ?? ''));
    panes.appendChild(targetPane);

    const postEdit = unit.post_edited[engineId];
    if (postEdit !== undefined) {
      const pePane = el('div', 'pane post-edit');
      pePane.appendChild(el('h3', undefined, 'Post-edit'));
      pePane.appendChild(el('p', 'text', postEdit));
      panes.appendChild(pePane);
    }
    root.appendChild(panes);

    // outputs of the engines not under review stay hidden by default so
    // they cannot anchor the judgement; a toggle reveals them on demand
    const toggleRow = el('div', 'other-engines-row');
    const toggle = el('button', 'toggle-others');
    toggle.textContent = showOtherEngines ? 'Hide other engines' : 'Show other engines';
    toggle.addEventListener('click', () => {
      showOtherEngines = !showOtherEngines;
      render();
    });
    toggleRow.appendChild(toggle);
    root.appendChild(toggleRow);
    if (showOtherEngines) {
      const others = el('div', 'other-engines');
      for (const id of engineIds) {
        if (id === engineId) continue;
        const row = el('p', 'other-engine-text', `${id}: ${unit.targets[id] ?? ''}`);
        others.appendChild(row);
      }
      root.appendChild(others);
    }

    root.appendChild(renderSlots(draft));
    root.appendChild(renderBadge(draft, unit));
    root.appendChild(renderControls(draft));
    if (conflict) root.appendChild(renderConflict());
    if (status) root.appendChild(el('p', 'status', status));
  }

  function renderSlots(draft: Draft): HTMLElement {
    const list = el('div', 'slots');
    draft.slots.forEach((slot, index) => {
      list.appendChild(renderSlot(draft, slot, index));
    });

    if (draft.slots.length > 3) {
      list.appendChild(
        el(
          'p',
          'soft-warning',
          'More than 3 errors on one segment; consider marking it for rewrite instead of itemizing further.',
        ),
      );
    }

    const adder = el('div', 'slot-adder');
    const addButton = el('button', 'add-slot', 'Add error');
    addButton.addEventListener('click', () => {
      const first = ERROR_TYPES[0];
      if (first) beginSlotInternal(first.code);
    });
    adder.appendChild(addButton);
    if (pendingType) {
      adder.appendChild(
        el('span', 'pending-type', `${pendingType}: pick a severity`),
      );
      for (const severity of SEVERITIES) {
        const pick = el('button', 'severity-pick', `${severity.code} (${severity.weight})`);
        pick.addEventListener('click', () => commitSlotInternal(severity.code));
        adder.appendChild(pick);
      }
    }
    list.appendChild(adder);
    return list;
  }

  function renderSlot(draft: Draft, slot: DraftSlot, index: number): HTMLElement {
    const row = el('div', 'slot');

    const typeSelect = el('select', 'slot-type');
    for (const info of ERROR_TYPES) {
      const option = el('option', undefined, `${info.code} ${info.label}`);
      option.value = info.code;
      option.title = info.definition;
      if (info.code === slot.errorType) option.selected = true;
      typeSelect.appendChild(option);
    }
    typeSelect.title =
      ERROR_TYPES.find((t) => t.code === slot.errorType)?.definition ?? '';
    typeSelect.addEventListener('change', () => {
      setDraft(updateSlot(draft, index, { errorType: typeSelect.value as ErrorTypeCode }));
      render();
    });
    row.appendChild(typeSelect);

    const severitySelect = el('select', 'slot-severity');
    for (const severity of SEVERITIES) {
      const option = el('option', undefined, `${severity.code} (${severity.weight})`);
      option.value = severity.code;
      if (severity.code === slot.severity) option.selected = true;
      severitySelect.appendChild(option);
    }
    severitySelect.addEventListener('change', () => {
      setDraft(updateSlot(draft, index, { severity: severitySelect.value as SeverityCode }));
      render();
    });
    row.appendChild(severitySelect);

    const note = el('input', 'slot-note');
    note.type = 'text';
    note.placeholder = 'note';
    note.value = slot.note ?? '';
    note.addEventListener('change', () => {
      setDraft(updateSlot(draft, index, { note: note.value || null }));
    });
    row.appendChild(note);

    const remove = el('button', 'slot-remove', 'x');
    remove.title = 'remove this error';
    remove.addEventListener('click', () => {
      setDraft(removeSlot(draft, index));
      render();
    });
    row.appendChild(remove);
    return row;
  }

  function renderBadge(draft: Draft, unit: UnitSummary): HTMLElement {
    const wrap = el('div', 'badge-row');
    const saved = unit.engines[engineId];
    if (draft.dirty || !saved || !saved.annotated) {
      const { epptu, category } = draftPreview(draft);
      const badge = el('span', `badge preview ${category}`, badgeText(epptu, category));
      wrap.appendChild(badge);
      wrap.appendChild(el('span', 'badge-origin', draft.dirty ? 'preview, unsaved' : 'preview'));
    } else {
      const badge = el('span', `badge saved ${saved.category}`, badgeText(saved.epptu, saved.category));
      wrap.appendChild(badge);
      wrap.appendChild(el('span', 'badge-origin', 'saved'));
    }
    return wrap;
  }

  function renderControls(draft: Draft): HTMLElement {
    const controls = el('div', 'controls');
    const saveButton = el('button', 'save', draft.dirty ? 'Save' : 'Saved');
    saveButton.disabled = !draft.dirty;
    saveButton.addEventListener('click', () => {
      void save();
    });
    controls.appendChild(saveButton);

    const prev = el('button', 'prev', 'Prev');
    prev.addEventListener('click', () => previousUnit());
    const next = el('button', 'next', 'Next');
    next.addEventListener('click', () => nextUnit());
    controls.appendChild(prev);
    controls.appendChild(next);

    controls.appendChild(
      el(
        'span',
        'key-help',
        'keys: 1-8 error type, a/s/d/f/g severity, arrows move, [ ] engine, x undo, Enter save',
      ),
    );
    return controls;
  }

  function renderConflict(): HTMLElement {
    const box = el('div', 'conflict');
    box.appendChild(
      el(
        'p',
        'conflict-message',
        `Someone else saved this project (now at revision ${conflict?.currentRevision}). ` +
          'Your draft is kept; reload to annotate on top of the latest state.',
      ),
    );
    const reload = el('button', 'reload', 'Reload unit');
    reload.addEventListener('click', () => {
      void reloadAfterConflict();
    });
    box.appendChild(reload);
    return box;
  }

  function beginSlotInternal(errorType: ErrorTypeCode): void {
    pendingType = errorType;
    render();
  }

  function commitSlotInternal(severity: SeverityCode): boolean {
    const draft = currentDraft();
    if (!draft || !pendingType) return false;
    const { draft: updated } = addSlot(draft, {
      errorType: pendingType,
      severity,
      note: null,
      span: null,
    });
    setDraft(updated);
    pendingType = null;
    render();
    return true;
  }

  async function save(): Promise<void> {
    const draft = currentDraft();
    const unit = currentUnit();
    if (!draft || !unit) return;
    status = '';
    try {
      const result = await client.saveAnnotations(
        projectId,
        draft.unitId,
        draft.engineId,
        toPayload(draft),
        draft.baseRevision,
      );
      revision = result.new_revision;
      setDraft(markSaved(draft, result.new_revision));
      const state = unit.engines[draft.engineId];
      if (state) {
        state.epptu = result.epptu;
        state.category = result.category;
        state.annotated = true;
        state.annotations = toPayload(draft);
      }
      conflict = null;
      status = `saved at revision ${result.new_revision}`;
      if (onSaved) onSaved();
    } catch (error) {
      if (error instanceof ConflictError) {
        conflict = error;
      } else if (error instanceof RejectedError) {
        status = `rejected: ${error.message}`;
      } else {
        status = `save failed: ${(error as Error).message}`;
      }
    }
    render();
  }

  async function reloadAfterConflict(): Promise<void> {
    const unit = currentUnit();
    if (!unit) return;
    const keep = currentDraft();
    const fresh = await client.fetchAllUnits(projectId);
    const position = fresh.units.findIndex((u) => u.id === unit.id);
    units = fresh.units;
    revision = fresh.revision;
    if (position >= 0) unitIndex = position;
    if (keep) setDraft(rebase(keep, fresh.revision));
    conflict = null;
    status = `reloaded at revision ${fresh.revision}; draft kept`;
    render();
  }

  async function load(): Promise<void> {
    const page = await client.fetchAllUnits(projectId);
    units = page.units;
    revision = page.revision;
    const first = units[0];
    engineIds = first ? Object.keys(first.engines) : [];
    engineId = engineIds[0] ?? '';
    unitIndex = 0;
    render();
  }

  function clampIndex(index: number): number {
    if (units.length === 0) return 0;
    return Math.min(Math.max(index, 0), units.length - 1);
  }

  function nextUnit(): void {
    unitIndex = clampIndex(unitIndex + 1);
    pendingType = null;
    render();
  }

  function previousUnit(): void {
    unitIndex = clampIndex(unitIndex - 1);
    pendingType = null;
    render();
  }

  function jumpTo(index: number): void {
    unitIndex = clampIndex(index);
    pendingType = null;
    render();
  }

  function cycleEngine(step: number): void {
    if (engineIds.length === 0) return;
    const at = engineIds.indexOf(engineId);
    const next = (at + step + engineIds.length) % engineIds.length;
    engineId = engineIds[next] ?? engineId;
    pendingType = null;
    render();
  }

  function removeLastSlot(): void {
    const draft = currentDraft();
    if (!draft || draft.slots.length === 0) return;
    setDraft(removeSlot(draft, draft.slots.length - 1));
    render();
  }

  return {
    load,
    nextUnit,
    previousUnit,
    jumpTo,
    cycleEngine,
    beginSlot: beginSlotInternal,
    commitSlot: commitSlotInternal,
    cancelSlot: () => {
      pendingType = null;
      render();
    },
    removeLastSlot,
    save,
    reloadAfterConflict,
    element: root,
  };
}
