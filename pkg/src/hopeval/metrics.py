"""Edit-distance baselines: WER, PER, TER with block shifts, and HTER.

All rates are exact :class:`fractions.Fraction` values so tests and oracle
comparisons never hit float noise; ``format_rate`` renders them as decimals.

Conventions used throughout:

* Edit counts speak from the hypothesis-error perspective, as usual for
  word error rates: an *insertion* is a spurious hypothesis token, a
  *deletion* is a reference token the hypothesis lacks. Hence
  ``matches + substitutions + deletions == len(ref)``.
* Edit traces describe rewriting the hypothesis into the reference, so a
  missing reference token surfaces as an ``InsertOp`` and a spurious
  hypothesis token as a ``DeleteOp``. Replaying a trace on the hypothesis
  tokens yields the reference tokens exactly.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

from .errors import EmptyReferenceError


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = False
    split_punctuation: bool = False


@dataclass(frozen=True)
class TokenSequence:
    """Tokens plus the text and tokenizer settings they came from."""

    tokens: tuple[str, ...]
    text: str
    config: TokenizerConfig


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str, config: TokenizerConfig | None = None) -> TokenSequence:
    """Split text into tokens: NFC normalize, optionally lowercase, split on
    whitespace, and (if configured) peel leading/trailing punctuation
    characters off each token, one token per character."""
    if config is None:
        config = TokenizerConfig()
    normalized = unicodedata.normalize("NFC", text)
    if config.lowercase:
        normalized = normalized.lower()
    pieces = normalized.split()
    if config.split_punctuation:
        out: list[str] = []
        for piece in pieces:
            lead: list[str] = []
            while piece and _is_punct(piece[0]):
                lead.append(piece[0])
                piece = piece[1:]
            trail: list[str] = []
            while piece and _is_punct(piece[-1]):
                trail.append(piece[-1])
                piece = piece[:-1]
            out.extend(lead)
            if piece:
                out.append(piece)
            out.extend(reversed(trail))
        tokens = tuple(out)
    else:
        tokens = tuple(pieces)
    return TokenSequence(tokens=tokens, text=text, config=config)


class MatchOp(NamedTuple):
    hyp_index: int
    ref_index: int


class SubstituteOp(NamedTuple):
    hyp_index: int
    ref_index: int
    replacement: str


class InsertOp(NamedTuple):
    ref_index: int
    token: str


class DeleteOp(NamedTuple):
    hyp_index: int


class ShiftOp(NamedTuple):
    start: int
    length: int
    destination: int


EditOp = Union[MatchOp, SubstituteOp, InsertOp, DeleteOp, ShiftOp]
EditTrace = tuple[EditOp, ...]


class EditCounts(NamedTuple):
    substitutions: int
    insertions: int
    deletions: int
    shifts: int
    matches: int

    def errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions + self.shifts


class MetricResult(NamedTuple):
    rate: Fraction
    counts: EditCounts
    trace: EditTrace


Tokens = Union[TokenSequence, Sequence[str]]


def _tokens(seq: Tokens) -> tuple[str, ...]:
    if isinstance(seq, TokenSequence):
        return seq.tokens
    return tuple(seq)


def _edit_matrix(hyp: tuple[str, ...], ref: tuple[str, ...]) -> list[list[int]]:
    rlen = len(ref)
    rows = [list(range(rlen + 1))]
    for i, htok in enumerate(hyp, start=1):
        prev = rows[-1]
        cur = [i] * (rlen + 1)
        for j in range(1, rlen + 1):
            if htok == ref[j - 1]:
                cur[j] = prev[j - 1]
            else:
                a = prev[j - 1]
                b = prev[j]
                if b < a:
                    a = b
                c = cur[j - 1]
                if c < a:
                    a = c
                cur[j] = a + 1
        rows.append(cur)
    return rows


def _edit_cost(hyp: tuple[str, ...], ref: tuple[str, ...]) -> int:
    # Two-row variant for the shift search, where only the cost is needed.
    rlen = len(ref)
    prev = list(range(rlen + 1))
    for i, htok in enumerate(hyp, start=1):
        cur = [i] * (rlen + 1)
        for j in range(1, rlen + 1):
            if htok == ref[j - 1]:
                cur[j] = prev[j - 1]
            else:
                a = prev[j - 1]
                b = prev[j]
                if b < a:
                    a = b
                c = cur[j - 1]
                if c < a:
                    a = c
                cur[j] = a + 1
        prev = cur
    return prev[rlen]


def _traceback(
    hyp: tuple[str, ...], ref: tuple[str, ...], rows: list[list[int]]
) -> list[EditOp]:
    # Deterministic tie-breaking: diagonal (match, then substitute) wins,
    # then consuming a hypothesis token, then consuming a reference token.
    ops: list[EditOp] = []
    i = len(hyp)
    j = len(ref)
    while i > 0 or j > 0:
        cost = rows[i][j]
        if i > 0 and j > 0:
            diag = rows[i - 1][j - 1]
            if hyp[i - 1] == ref[j - 1] and diag == cost:
                ops.append(MatchOp(i - 1, j - 1))
                i -= 1
                j -= 1
                continue
            if hyp[i - 1] != ref[j - 1] and diag + 1 == cost:
                ops.append(SubstituteOp(i - 1, j - 1, ref[j - 1]))
                i -= 1
                j -= 1
                continue
        if i > 0 and rows[i - 1][j] + 1 == cost:
            ops.append(DeleteOp(i - 1))
            i -= 1
            continue
        ops.append(InsertOp(j - 1, ref[j - 1]))
        j -= 1
    ops.reverse()
    return ops


def _counts_from(ops: list[EditOp], shifts: int = 0) -> EditCounts:
    matches = substitutions = extra = missing = 0
    for op in ops:
        kind = type(op)
        if kind is MatchOp:
            matches += 1
        elif kind is SubstituteOp:
            substitutions += 1
        elif kind is DeleteOp:
            extra += 1
        else:
            missing += 1
    return EditCounts(
        substitutions=substitutions,
        insertions=extra,
        deletions=missing,
        shifts=shifts,
        matches=matches,
    )


def wer(hyp: Tokens, ref: Tokens) -> MetricResult:
    """Word error rate from a minimum-cost positional alignment.

    Rate is (substitutions + insertions + deletions) / reference length and
    may exceed 1. Empty hypothesis is legal; empty reference is not.
    """
    h = _tokens(hyp)
    r = _tokens(ref)
    if not r:
        raise EmptyReferenceError("word error rate is undefined for an empty reference")
    rows = _edit_matrix(h, r)
    ops = _traceback(h, r, rows)
    counts = _counts_from(ops)
    rate = Fraction(counts.substitutions + counts.insertions + counts.deletions, len(r))
    return MetricResult(rate, counts, tuple(ops))


def per(hyp: Tokens, ref: Tokens) -> Fraction:
    """Position-independent error rate.

    ``correct`` is the multiset-intersection cardinality of the two token
    bags; the surplus of an over-long hypothesis is discounted before
    dividing by the reference length. The formula's value is returned
    verbatim, without clamping.
    """
    h = _tokens(hyp)
    r = _tokens(ref)
    if not r:
        raise EmptyReferenceError("position-independent rate is undefined for an empty reference")
    correct = sum((Counter(h) & Counter(r)).values())
    surplus = len(h) - len(r)
    if surplus < 0:
        surplus = 0
    return 1 - Fraction(correct - surplus, len(r))


def _ref_block_positions(ref: tuple[str, ...]) -> dict[tuple[str, ...], list[int]]:
    positions: dict[tuple[str, ...], list[int]] = {}
    rlen = len(ref)
    for length in range(1, rlen + 1):
        for t in range(rlen - length + 1):
            positions.setdefault(ref[t : t + length], []).append(t)
    return positions


def _greedy_shifts(
    hyp: tuple[str, ...], ref: tuple[str, ...]
) -> tuple[tuple[str, ...], list[ShiftOp], int]:
    """Greedy block-shift search against one reference.

    A candidate shift moves a contiguous hypothesis block that exactly
    matches a reference block to the index where that reference block
    starts (clamped to the remaining sequence), and must contain at least
    one token the current best alignment leaves unmatched. Each round
    applies the candidate that most reduces the remaining edit distance;
    ties prefer the shortest block, then the leftmost source position,
    then the leftmost destination. Stops when no candidate strictly
    reduces the distance. Returns the shifted hypothesis, the applied
    shifts, and the final edit distance.
    """
    current = hyp
    shift_ops: list[ShiftOp] = []
    blocks = _ref_block_positions(ref)
    cur_cost = _edit_cost(current, ref)

    while cur_cost > 0 and current:
        rows = _edit_matrix(current, ref)
        ops = _traceback(current, ref, rows)
        matched = [False] * len(current)
        for op in ops:
            if type(op) is MatchOp:
                matched[op.hyp_index] = True

        best_key: tuple[int, int, int, int] | None = None
        best_candidate: tuple[str, ...] | None = None
        max_len = min(len(current), len(ref))
        for length in range(1, max_len + 1):
            for start in range(len(current) - length + 1):
                if all(matched[start : start + length]):
                    continue
                block = current[start : start + length]
                targets = blocks.get(block)
                if targets is None:
                    continue
                remaining = current[:start] + current[start + length :]
                seen: set[int] = set()
                for t in targets:
                    dest = t if t <= len(remaining) else len(remaining)
                    if dest == start or dest in seen:
                        continue
                    seen.add(dest)
                    candidate = remaining[:dest] + block + remaining[dest:]
                    if candidate == current:
                        continue
                    new_cost = _edit_cost(candidate, ref)
                    reduction = cur_cost - new_cost
                    if reduction <= 0:
                        continue
                    key = (-reduction, length, start, dest)
                    if best_key is None or key < best_key:
                        best_key = key
                        best_candidate = candidate
        if best_key is None:
            break
        neg_reduction, length, start, dest = best_key
        shift_ops.append(ShiftOp(start, length, dest))
        current = best_candidate  # type: ignore[assignment]
        cur_cost += neg_reduction

    return current, shift_ops, cur_cost


def ter(hyp: Tokens, refs: Sequence[Tokens]) -> MetricResult:
    """Translation edit rate: block shifts plus positional edits.

    Moving any contiguous block any distance costs one edit, like a single
    insert/delete/substitute. The numerator is the minimum edit total over
    the references; the denominator is the average reference length. The
    trace replays against the reference that won.
    """
    h = _tokens(hyp)
    if isinstance(refs, (TokenSequence, str)):
        raise TypeError("refs must be a sequence of token sequences")
    ref_list = [_tokens(r) for r in refs]
    if not ref_list:
        raise EmptyReferenceError("edit rate needs at least one reference")
    if any(not r for r in ref_list):
        raise EmptyReferenceError("edit rate is undefined for an empty reference")

    best_edits: int | None = None
    best: tuple[tuple[str, ...], list[ShiftOp], tuple[str, ...]] | None = None
    for ref in ref_list:
        shifted, shift_ops, final_cost = _greedy_shifts(h, ref)
        edits = len(shift_ops) + final_cost
        if best_edits is None or edits < best_edits:
            best_edits = edits
            best = (shifted, shift_ops, ref)

    assert best is not None
    shifted, shift_ops, chosen_ref = best
    rows = _edit_matrix(shifted, chosen_ref)
    align_ops = _traceback(shifted, chosen_ref, rows)
    counts = _counts_from(align_ops, shifts=len(shift_ops))
    denominator = Fraction(sum(len(r) for r in ref_list), len(ref_list))
    rate = Fraction(best_edits) / denominator
    trace: EditTrace = tuple(shift_ops) + tuple(align_ops)
    return MetricResult(rate, counts, trace)


def hter(hyp: Tokens, post_edited: Tokens) -> MetricResult:
    """Edit rate against a human post-edit of this very hypothesis.

    Identical to ``ter`` with a single reference; named separately because
    the reference's provenance (a targeted correction, not an independent
    translation) changes what the number means.
    """
    return ter(hyp, [post_edited])


def replay(hyp: Tokens, trace: EditTrace) -> tuple[str, ...]:
    """Apply a trace to hypothesis tokens, producing the reference tokens."""
    tokens = list(_tokens(hyp))
    out: list[str] = []
    for op in trace:
        kind = type(op)
        if kind is ShiftOp:
            block = tokens[op.start : op.start + op.length]
            del tokens[op.start : op.start + op.length]
            tokens[op.destination : op.destination] = block
        elif kind is MatchOp:
            out.append(tokens[op.hyp_index])
        elif kind is SubstituteOp:
            out.append(op.replacement)
        elif kind is InsertOp:
            out.append(op.token)
        # DeleteOp drops the hypothesis token: nothing to emit.
    return tuple(out)


def format_rate(rate: Fraction, places: int = 6) -> str:
    """Render an exact rate as a fixed-point decimal string."""
    if places < 0:
        raise ValueError("places must be non-negative")
    scale = 10**places
    scaled = round(rate * scale)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), scale)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{places}d}"
