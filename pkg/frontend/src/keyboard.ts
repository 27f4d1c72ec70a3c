/**
 * Keyboard-only annotation path.
 *
 * Digits 1-8 pick the error type (in display order), home-row keys
 * a/s/d/f/g pick the severity and commit the pair as a new error slot,
 * so every type and severity combination is reachable without the mouse.
 */

import type { AnnotateView } from './annotate.js';
import { ERROR_TYPES, SEVERITIES } from './scoring.js';

const SEVERITY_KEYS = ['a', 's', 'd', 'f', 'g'] as const;

function isTypingTarget(target: EventTarget | null): boolean {
  return (
    target instanceof HTMLInputElement ||
    target instanceof HTMLTextAreaElement ||
    target instanceof HTMLSelectElement
  );
}

export function handleKey(view: AnnotateView, event: KeyboardEvent): boolean {
  if (isTypingTarget(event.target)) return false;
  if (event.ctrlKey || event.metaKey || event.altKey) return false;

  const digit = Number.parseInt(event.key, 10);
  if (digit >= 1 && digit <= ERROR_TYPES.length) {
    const info = ERROR_TYPES[digit - 1];
    if (info) view.beginSlot(info.code);
    return true;
  }

  const severityIndex = SEVERITY_KEYS.indexOf(
    event.key as (typeof SEVERITY_KEYS)[number],
  );
  if (severityIndex >= 0) {
    const severity = SEVERITIES[severityIndex];
    if (severity) return view.commitSlot(severity.code);
    return false;
  }

  switch (event.key) {
    case 'ArrowRight':
      view.nextUnit();
      return true;
    case 'ArrowLeft':
      view.previousUnit();
      return true;
    case ']':
      view.cycleEngine(1);
      return true;
    case '[':
      view.cycleEngine(-1);
      return true;
    case 'x':
      view.removeLastSlot();
      return true;
    case 'Escape':
      view.cancelSlot();
      return true;
    case 'Enter':
      void view.save();
      return true;
    default:
      return false;
  }
}

export function attachKeyboard(view: AnnotateView, target: Window | HTMLElement): () => void {
  const listener = (event: Event) => {
    if (handleKey(view, event as KeyboardEvent)) {
      event.preventDefault();
    }
  };
  target.addEventListener('keydown', listener);
  return () => target.removeEventListener('keydown', listener);
}
