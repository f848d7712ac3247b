"""Person-mention detection and paragraph-local resolution.

Detection runs three matchers over a paragraph (registry aliases, manual
surfaces, and a capitalized-sequence person heuristic) and resolves overlaps
leftmost-longest. Resolution is a deterministic sieve that never crosses a
paragraph boundary, which keeps paragraph analyses independent and cacheable.

New names are carried as provisional entity keys (``?<normalized surface>``)
until the orchestrator promotes them to registry records.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum

from . import lexicons
from .errors import SpanOutOfRange, UnknownPosClass
from .registry import CharacterRegistry, RegistryView
from .textmodel import PosClass, Span, Token, paragraph_spans, segment_paragraph

PROVISIONAL_PREFIX = "?"

_WS = re.compile(r"\s+")


class MentionKind(str, Enum):
    NAMED = "NAMED"
    ALIAS = "ALIAS"
    PRONOUN = "PRONOUN"


@dataclass(frozen=True, slots=True)
class Mention:
    span: Span
    sentence_index: int
    surface: str
    kind: MentionKind
    entity: str | None = None  # registry id, provisional "?key", or None

    @property
    def resolved(self) -> bool:
        return self.entity is not None


def provisional_key(surface_tokens: list[str]) -> str:
    return PROVISIONAL_PREFIX + " ".join(surface_tokens).lower()


def is_provisional(entity: str | None) -> bool:
    return entity is not None and entity.startswith(PROVISIONAL_PREFIX)


def _capitalized(token: Token) -> bool:
    text = token.text
    return text[0].isupper() and len(text) > 1 and any(c.islower() for c in text[1:])


def _normalize_surface(raw: str) -> str:
    return _WS.sub(" ", raw).strip()


@dataclass(frozen=True)
class _Candidate:
    start: int
    end: int
    priority: int  # alias matches shadow equal-length heuristic runs
    mention: Mention


def detect_named_mentions(
    text: str, tokens: list[Token], view: RegistryView
) -> list[Mention]:
    """NAMED/ALIAS mentions in one paragraph, leftmost-longest on overlap."""
    candidates = _alias_candidates(text, tokens, view)
    candidates += _heuristic_candidates(text, tokens, view)
    candidates.sort(key=lambda c: (c.start, c.start - c.end, c.priority))
    chosen: list[Mention] = []
    occupied_end = -1
    for cand in candidates:
        if cand.start >= occupied_end:
            chosen.append(cand.mention)
            occupied_end = cand.end
    return chosen


def _alias_candidates(
    text: str, tokens: list[Token], view: RegistryView
) -> list[_Candidate]:
    out = []
    for i, tok in enumerate(tokens):
        bucket = view.patterns.get(tok.text.lower())
        if not bucket:
            continue
        for pattern in bucket:
            k = len(pattern.tokens)
            if i + k > len(tokens):
                continue
            window = tokens[i : i + k]
            if any(t.sentence_index != tok.sentence_index for t in window):
                continue
            if pattern.case_sensitive:
                # manual surfaces must appear verbatim, token-boundary-aligned
                slice_text = text[window[0].span.start : window[-1].span.end]
                if slice_text != pattern.surface:
                    continue
            elif tuple(t.text.lower() for t in window) != tuple(
                t.lower() for t in pattern.tokens
            ):
                continue
            span = Span(window[0].span.start, window[-1].span.end)
            kind = MentionKind.NAMED if pattern.canonical else MentionKind.ALIAS
            out.append(
                _Candidate(
                    span.start,
                    span.end,
                    0,
                    Mention(span, tok.sentence_index, text[span.start : span.end], kind, pattern.entity),
                )
            )
            break  # buckets are sorted longest-first; first hit wins
    return out


def _heuristic_candidates(
    text: str, tokens: list[Token], view: RegistryView
) -> list[_Candidate]:
    honorific_words = lexicons.honorifics()
    stop = lexicons.stoplist()
    common = lexicons.common_words()
    sentence_start: dict[int, int] = {}
    for idx, tok in enumerate(tokens):
        sentence_start.setdefault(tok.sentence_index, idx)

    out = []
    j = 0
    n = len(tokens)
    while j < n:
        if not _capitalized(tokens[j]):
            j += 1
            continue
        run = [j]
        j += 1
        while j < n and tokens[j].sentence_index == tokens[run[0]].sentence_index:
            if _capitalized(tokens[j]):
                run.append(j)
                j += 1
                continue
            if (
                tokens[j].text == "."
                and tokens[run[-1]].text.lower() in honorific_words
                and j + 1 < n
                and _capitalized(tokens[j + 1])
                and tokens[j + 1].sentence_index == tokens[run[0]].sentence_index
            ):
                run.extend((j, j + 1))
                j += 2
                continue
            break
        cand = _run_to_candidate(run, text, tokens, sentence_start, honorific_words, stop, common, view)
        if cand is not None:
            out.append(cand)
    return out


def _run_to_candidate(
    run, text, tokens, sentence_start, honorific_words, stop, common, view
) -> _Candidate | None:
    first = tokens[run[0]]
    words = [tokens[i].text for i in run if tokens[i].text != "."]
    honorific_led = len(words) > 1 and words[0].lower() in honorific_words

    if not honorific_led:
        is_initial = run[0] == sentence_start[first.sentence_index]
        head = first.text.lower()
        if is_initial and (head in common or (len(head) > 3 and head.endswith("ly"))):
            run = run[1:]
            if run and tokens[run[0]].text == ".":
                run = run[1:]
            if not run:
                return None
            words = [tokens[i].text for i in run if tokens[i].text != "."]
            honorific_led = len(words) > 1 and words[0].lower() in honorific_words

    first = tokens[run[0]]
    last = tokens[run[-1]]
    if len(run) == 1 and first.text.lower() in lexicons.ALL_PRONOUNS:
        return None

    key_tokens = [tokens[i].text for i in run]
    plain_lower = " ".join(words).lower()
    if not honorific_led and (plain_lower in stop or (len(words) == 1 and words[0].lower() in stop)):
        return None
    raw = text[first.span.start : last.span.end]
    if _normalize_surface(raw).lower() in view.suppressed:
        return None

    span = Span(first.span.start, last.span.end)
    return _Candidate(
        span.start,
        span.end,
        1,
        Mention(
            span,
            first.sentence_index,
            raw,
            MentionKind.NAMED,
            provisional_key(key_tokens),
        ),
    )


def pronoun_mentions(
    text: str, tokens: list[Token], taken: list[Mention]
) -> list[Mention]:
    """PRONOUN mentions for tokens not covered by a name mention."""
    spans = sorted((m.span.start, m.span.end) for m in taken)
    out = []
    for tok in tokens:
        low = tok.text.lower()
        if low not in lexicons.RESOLVABLE_PRONOUNS:
            continue
        if any(s <= tok.span.start < e for s, e in spans):
            continue
        out.append(
            Mention(tok.span, tok.sentence_index, tok.text, MentionKind.PRONOUN)
        )
    return out


def resolve_paragraph(mentions: list[Mention], view: RegistryView) -> list[Mention]:
    """Run the resolution sieve over one paragraph's mentions, in text order.

    Passes: (1) names/aliases keep their detection binding (or provisional
    key); (2) gendered pronouns bind to the most recent gender-compatible
    antecedent; (3) they/them/their binds only when the paragraph has exactly
    one entity so far; (4) everything else stays unresolved.
    """
    ordered = sorted(mentions, key=lambda m: m.span.start)
    resolved: list[Mention] = []
    for mention in ordered:
        if mention.kind is not MentionKind.PRONOUN:
            resolved.append(mention)
            continue
        low = mention.surface.lower()
        entity = None
        if low in lexicons.MASCULINE_PRONOUNS or low in lexicons.FEMININE_PRONOUNS:
            wanted = "m" if low in lexicons.MASCULINE_PRONOUNS else "f"
            for prior in reversed(resolved):
                if prior.entity is None:
                    continue
                gender = _entity_gender(prior.entity, view)
                if gender is None or gender == wanted:
                    entity = prior.entity
                    break
        elif low in lexicons.NEUTRAL_PRONOUNS:
            seen = {m.entity for m in resolved if m.entity is not None}
            if len(seen) == 1:
                entity = next(iter(seen))
        resolved.append(replace(mention, entity=entity))
    return resolved


def _entity_gender(entity: str, view: RegistryView) -> str | None:
    if is_provisional(entity):
        first = entity[len(PROVISIONAL_PREFIX):].split(" ", 1)[0]
        return view.guess_gender(first)
    return view.gender.get(entity)


# -- gold annotation import -------------------------------------------------

_MENTION_KINDS = {k.value for k in MentionKind}


@dataclass
class GoldImport:
    """Sieve-bypassing annotations, grouped by paragraph index."""

    mentions: dict[int, list[Mention]]
    attribute_words: dict[int, list[tuple[Span, int, PosClass, str]]]
    # attribute_words values: (span, local sentence index, pos class, entity)

    def mention_count(self) -> int:
        return sum(len(v) for v in self.mentions.values())


def import_annotations(
    document: str, records: list[dict], registry: CharacterRegistry
) -> GoldImport:
    """Map gold annotation records onto the document and registry.

    Spans are paragraph-relative. Entity keys match registry records by
    canonical name first, then by alias; unmatched keys create new records.
    """
    para_spans = paragraph_spans(document)
    sentence_cache: dict[int, list[Span]] = {}
    mentions: dict[int, list[Mention]] = {}
    words: dict[int, list[tuple[Span, int, PosClass, str]]] = {}
    entity_ids: dict[str, str] = {}

    for i, rec in enumerate(records):
        where = f"record {i}"
        para_index = rec.get("para_index")
        if not isinstance(para_index, int) or not 0 <= para_index < len(para_spans):
            raise SpanOutOfRange(f"{where}: para_index {para_index!r} out of range")
        p_span = para_spans[para_index]
        text = document[p_span.start : p_span.end]
        start, end = rec.get("start"), rec.get("end")
        if (
            not isinstance(start, int)
            or not isinstance(end, int)
            or not 0 <= start < end <= len(text)
        ):
            raise SpanOutOfRange(f"{where}: span ({start!r}, {end!r}) outside paragraph")
        kind = rec.get("kind")
        if kind not in _MENTION_KINDS and kind != "ATTRIBUTE":
            raise UnknownPosClass(f"{where}: unknown record kind {kind!r}")
        pos = rec.get("pos")
        if pos is not None and pos not in PosClass.__members__:
            raise UnknownPosClass(f"{where}: unknown pos {pos!r}")

        key = str(rec.get("entity_key", "")).strip()
        if not key:
            raise SpanOutOfRange(f"{where}: entity_key missing")
        entity = entity_ids.get(key.lower())
        if entity is None:
            found = registry.find_by_canonical(key) or registry.find_by_alias(key)
            record = found if found is not None else registry.promote(key)
            entity = record.id
            entity_ids[key.lower()] = entity

        if para_index not in sentence_cache:
            sentence_cache[para_index] = segment_paragraph(text)[0]
        sentence_index = _containing_sentence(sentence_cache[para_index], start, where)
        span = Span(start, end)
        if kind == "ATTRIBUTE":
            if pos not in (PosClass.ADJ.value, PosClass.VERB.value):
                raise UnknownPosClass(f"{where}: attribute pos must be ADJ or VERB")
            words.setdefault(para_index, []).append(
                (span, sentence_index, PosClass(pos), entity)
            )
        else:
            mentions.setdefault(para_index, []).append(
                Mention(span, sentence_index, text[start:end], MentionKind(kind), entity)
            )
    return GoldImport(mentions, words)


def _containing_sentence(sentences: list[Span], offset: int, where: str) -> int:
    for local_idx, span in enumerate(sentences, start=1):
        if span.start <= offset < span.end:
            return local_idx
    raise SpanOutOfRange(f"{where}: span not inside any sentence")
