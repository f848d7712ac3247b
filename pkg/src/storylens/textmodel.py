"""Document text model: segmentation into paragraphs/sentences/tokens and edit deltas.

All offsets are 0-based Unicode scalar positions into the document string.
Segmentation is deliberately paragraph-local: the global segmentation of a
document equals the concatenation of per-paragraph segmentations, which is
what makes paragraph-level caching sound.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from enum import Enum

from .errors import MalformedDelta

# A token is a maximal run of word characters or a single other non-space char.
_TOKEN = re.compile(r"\w+|[^\w\s]", re.UNICODE)

# Sentence-final trigger characters. The horizontal ellipsis behaves like a
# terminator; ASCII "..." is a run of '.' and falls out of the same scan.
_TERMINATORS = frozenset(".?!…")

# Closing quotes/brackets that may trail a terminator and still belong to the
# closing sentence.
_CLOSERS = frozenset("\"'”’)]")

# Title-style abbreviations whose trailing period does not end a sentence.
ABBREVIATIONS = frozenset(
    {
        "mr", "mrs", "ms", "dr", "st", "prof", "rev", "hon", "capt",
        "col", "gen", "lt", "sgt", "sr", "jr", "mme", "mlle", "fr",
    }
)


class PosClass(str, Enum):
    NOUN = "NOUN"
    PROPER = "PROPER"
    PRONOUN = "PRONOUN"
    ADJ = "ADJ"
    VERB = "VERB"
    OTHER = "OTHER"


@dataclass(frozen=True, order=True, slots=True)
class Span:
    """Half-open character range [start, end); invariant start < end."""

    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start

    def shifted(self, offset: int) -> "Span":
        return Span(self.start + offset, self.end + offset)

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end


@dataclass(frozen=True, slots=True)
class Paragraph:
    index: int
    span: Span
    content_hash: int


@dataclass(frozen=True, slots=True)
class Sentence:
    index: int  # 1-based, global over the document
    span: Span
    paragraph_index: int


@dataclass(frozen=True, slots=True)
class Token:
    text: str
    span: Span
    sentence_index: int
    pos: PosClass | None = None

    def with_pos(self, pos: PosClass) -> "Token":
        return Token(self.text, self.span, self.sentence_index, pos)


class OpKind(str, Enum):
    RETAIN = "retain"
    INSERT = "insert"
    DELETE = "delete"


@dataclass(frozen=True)
class DeltaOp:
    kind: OpKind
    length: int = 0
    text: str = ""

    @staticmethod
    def retain(n: int) -> "DeltaOp":
        return DeltaOp(OpKind.RETAIN, length=n)

    @staticmethod
    def insert(text: str) -> "DeltaOp":
        return DeltaOp(OpKind.INSERT, text=text)

    @staticmethod
    def delete(n: int) -> "DeltaOp":
        return DeltaOp(OpKind.DELETE, length=n)

    def to_wire(self) -> dict:
        if self.kind is OpKind.INSERT:
            return {"insert": self.text}
        return {self.kind.value: self.length}


def delta_from_wire(ops: list[dict]) -> list[DeltaOp]:
    """Parse the wire form: one {"retain"|"insert"|"delete": ...} per op."""
    out = []
    for i, op in enumerate(ops):
        if not isinstance(op, dict) or len(op) != 1:
            raise MalformedDelta(f"op {i}: expected exactly one key, got {op!r}")
        key, value = next(iter(op.items()))
        if key == "insert":
            if not isinstance(value, str) or not value:
                raise MalformedDelta(f"op {i}: insert text must be non-empty")
            out.append(DeltaOp.insert(value))
        elif key in ("retain", "delete"):
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise MalformedDelta(f"op {i}: {key} length must be >= 1")
            out.append(DeltaOp(OpKind(key), length=value))
        else:
            raise MalformedDelta(f"op {i}: unknown op kind {key!r}")
    return out


def word_tokens(text: str) -> list[str]:
    """Token texts of ``text`` under the document tokenizer."""
    return _TOKEN.findall(text)


def content_hash(text: str) -> int:
    """Stable 64-bit hash of a paragraph's text (pure function of the text)."""
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def paragraph_spans(document: str) -> list[Span]:
    """Spans of the paragraphs of ``document``, in order.

    Boundaries are runs of 2+ newlines; leading/trailing newline runs are
    trimmed off each paragraph (so appending a paragraph never changes the
    text, and therefore the hash, of the one before it) and empty segments
    produce no paragraph.
    """
    spans = []
    find = document.find
    pos = 0
    n = len(document)
    while pos < n:
        boundary = find("\n\n", pos)
        end = n if boundary == -1 else boundary
        while pos < end and document[pos] == "\n":
            pos += 1
        while end > pos and document[end - 1] == "\n":
            end -= 1
        if end > pos:
            spans.append(Span(pos, end))
        if boundary == -1:
            break
        pos = boundary + 2
        while pos < n and document[pos] == "\n":
            pos += 1
    return spans


def _sentence_spans(text: str) -> list[Span]:
    """Sentence spans local to one paragraph's text."""
    spans = []
    n = len(text)
    i = 0
    start = None  # first non-space char of the current sentence
    while i < n:
        ch = text[i]
        if start is None:
            if not ch.isspace():
                start = i
            i += 1
            continue
        if ch in _TERMINATORS:
            run_start = i
            while i < n and text[i] in _TERMINATORS:
                i += 1
            while i < n and text[i] in _CLOSERS:
                i += 1
            at_boundary = i >= n or text[i].isspace()
            if at_boundary and _is_abbreviation(text, run_start, i - run_start):
                continue
            if at_boundary:
                spans.append(Span(start, i))
                start = None
            continue
        i += 1
    if start is not None:
        spans.append(Span(start, n))
    return spans


def _is_abbreviation(text: str, dot_pos: int, run_len: int) -> bool:
    # Only a lone '.' can belong to an abbreviation ("Mr.", "Dr.").
    if run_len != 1 or text[dot_pos] != ".":
        return False
    j = dot_pos
    while j > 0 and (text[j - 1].isalpha()):
        j -= 1
    word = text[j:dot_pos].lower()
    return word in ABBREVIATIONS


def segment_paragraph(text: str) -> tuple[list[Span], list[Token]]:
    """Segment one paragraph's text into sentence spans and tokens.

    Offsets are relative to the paragraph; token ``sentence_index`` is the
    1-based sentence ordinal within the paragraph.
    """
    sent_spans = _sentence_spans(text)
    tokens = []
    for s_idx, span in enumerate(sent_spans, start=1):
        for m in _TOKEN.finditer(text, span.start, span.end):
            tokens.append(Token(m.group(), Span(m.start(), m.end()), s_idx))
    return sent_spans, tokens


def segment(document: str) -> tuple[list[Paragraph], list[Sentence], list[Token]]:
    """Split a document into paragraphs, sentences, and tokens.

    Sentence indices are 1-based and global; every sentence lies inside
    exactly one paragraph, every token inside exactly one sentence.
    """
    paragraphs = []
    sentences = []
    tokens = []
    sentence_base = 0
    for p_idx, p_span in enumerate(paragraph_spans(document)):
        text = document[p_span.start : p_span.end]
        paragraphs.append(Paragraph(p_idx, p_span, content_hash(text)))
        sent_spans, local_tokens = segment_paragraph(text)
        for local_idx, span in enumerate(sent_spans, start=1):
            sentences.append(
                Sentence(sentence_base + local_idx, span.shifted(p_span.start), p_idx)
            )
        for tok in local_tokens:
            tokens.append(
                Token(
                    tok.text,
                    tok.span.shifted(p_span.start),
                    sentence_base + tok.sentence_index,
                )
            )
        sentence_base += len(sent_spans)
    return paragraphs, sentences, tokens


def apply_delta(prev: str, delta: list[DeltaOp]) -> str:
    """Apply retain/insert/delete ops to ``prev``; unconsumed tail is kept."""
    parts = []
    cursor = 0
    for i, op in enumerate(delta):
        if op.kind is OpKind.INSERT:
            if not op.text:
                raise MalformedDelta(f"op {i}: empty insert")
            parts.append(op.text)
        elif op.kind is OpKind.RETAIN:
            if op.length < 1:
                raise MalformedDelta(f"op {i}: retain length must be >= 1")
            if cursor + op.length > len(prev):
                raise MalformedDelta(f"op {i}: retain overruns document")
            parts.append(prev[cursor : cursor + op.length])
            cursor += op.length
        else:
            if op.length < 1:
                raise MalformedDelta(f"op {i}: delete length must be >= 1")
            if cursor + op.length > len(prev):
                raise MalformedDelta(f"op {i}: delete overruns document")
            cursor += op.length
    parts.append(prev[cursor:])
    return "".join(parts)


def diff_paragraphs(
    prev_paragraphs: list[Paragraph], new_paragraphs: list[Paragraph]
) -> set[int]:
    """Indices of new paragraphs not matched by hash in an LCS alignment."""
    prev_hashes = [p.content_hash for p in prev_paragraphs]
    new_hashes = [p.content_hash for p in new_paragraphs]

    # Strip the common prefix/suffix first; edits are almost always local.
    lo = 0
    while (
        lo < len(prev_hashes)
        and lo < len(new_hashes)
        and prev_hashes[lo] == new_hashes[lo]
    ):
        lo += 1
    hi = 0
    while (
        hi < len(prev_hashes) - lo
        and hi < len(new_hashes) - lo
        and prev_hashes[-1 - hi] == new_hashes[-1 - hi]
    ):
        hi += 1

    mid_prev = prev_hashes[lo : len(prev_hashes) - hi]
    mid_new = new_hashes[lo : len(new_hashes) - hi]
    matched = _lcs_matched_new_indices(mid_prev, mid_new)
    return {lo + k for k in range(len(mid_new)) if k not in matched}


def _lcs_matched_new_indices(prev: list[int], new: list[int]) -> set[int]:
    """New-side indices that participate in a longest common subsequence."""
    if not prev or not new or not set(prev) & set(new):
        return set()
    n, m = len(prev), len(new)
    # lengths[i][j] = LCS length of prev[i:], new[j:]
    lengths = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row = lengths[i]
        below = lengths[i + 1]
        pv = prev[i]
        for j in range(m - 1, -1, -1):
            if pv == new[j]:
                row[j] = below[j + 1] + 1
            else:
                row[j] = below[j] if below[j] >= row[j + 1] else row[j + 1]
    matched = set()
    i = j = 0
    while i < n and j < m:
        if prev[i] == new[j]:
            matched.add(j)
            i += 1
            j += 1
        elif lengths[i + 1][j] >= lengths[i][j + 1]:
            i += 1
        else:
            j += 1
    return matched
