"""Incremental analysis orchestrator.

Paragraph analyses are cached content-addressed (by text hash), so re-analyzing
a document only runs the pipeline on paragraphs whose text changed. Registry
changes evict exactly the cached paragraphs whose tokens overlap the changed
surfaces, via an inverted token index. The result is provably equivalent to a
cold full analysis: a cached entry is reused only when neither its text nor
any registry state it can observe has changed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .attributes import AttributeLink, extract_attributes, tag_pos
from .entities import (
    GoldImport,
    Mention,
    detect_named_mentions,
    is_provisional,
    pronoun_mentions,
    resolve_paragraph,
)
from .errors import MalformedDelta
from .registry import CharacterRegistry, RegistryView
from .textmodel import (
    DeltaOp,
    Paragraph,
    Span,
    content_hash,
    delta_from_wire,
    diff_paragraphs,
    paragraph_spans,
    segment_paragraph,
)


@dataclass(frozen=True)
class ParagraphAnalysis:
    """Cached pipeline output for one paragraph text (paragraph-relative)."""

    content_hash: int
    sentence_count: int
    sentence_spans: tuple[Span, ...]
    mentions: tuple[Mention, ...]
    attribute_links: tuple[AttributeLink, ...]
    token_lower: frozenset[str]
    token_counts: dict[str, int]
    has_provisional: bool = False


@dataclass(eq=True)
class AnalysisSnapshot:
    """Immutable document-level merged view of all paragraph analyses."""

    snapshot_version: int = field(compare=False)
    S: int
    registry_version: int
    sentence_spans: tuple[Span, ...]
    mentions: dict[str, tuple[tuple[int, Span], ...]]
    attribute_links: tuple[AttributeLink, ...]
    token_count_parts: tuple[dict[str, int], ...] = field(compare=False, repr=False)
    _df: Counter | None = field(default=None, compare=False, repr=False)

    def token_frequencies(self) -> Counter:
        """Case-folded counts of every token in the story (lazy, cached)."""
        if self._df is None:
            df: Counter = Counter()
            for part in self.token_count_parts:
                df.update(part)
            object.__setattr__(self, "_df", df)
        return self._df

    def total_mentions(self) -> int:
        return sum(len(v) for v in self.mentions.values())


def run_paragraph_pipeline(text: str, view: RegistryView) -> ParagraphAnalysis:
    """Full entity + attribute pipeline over one paragraph's text."""
    sentence_spans, tokens = segment_paragraph(text)
    tagged = tag_pos(tokens)
    named = detect_named_mentions(text, tagged, view)
    pronouns = pronoun_mentions(text, tagged, named)
    resolved = resolve_paragraph(named + pronouns, view)
    links = _extract_links(tagged, resolved, len(sentence_spans))
    lower = [t.text.lower() for t in tokens]
    return ParagraphAnalysis(
        content_hash=content_hash(text),
        sentence_count=len(sentence_spans),
        sentence_spans=tuple(sentence_spans),
        mentions=tuple(resolved),
        attribute_links=tuple(links),
        token_lower=frozenset(lower),
        token_counts=dict(Counter(lower)),
        has_provisional=any(is_provisional(m.entity) for m in resolved),
    )


def _extract_links(tagged, mentions, sentence_count) -> list[AttributeLink]:
    links: list[AttributeLink] = []
    for s in range(1, sentence_count + 1):
        s_tokens = [t for t in tagged if t.sentence_index == s]
        s_mentions = [m for m in mentions if m.sentence_index == s]
        if s_tokens and s_mentions:
            links.extend(extract_attributes(s_tokens, s_mentions))
    return links


class Analyzer:
    """Owns the paragraph cache and produces immutable snapshots.

    One analyzer per project; mutations to the shared registry must happen
    between (not during) calls to :meth:`analyze`.
    """

    def __init__(self, registry: CharacterRegistry):
        self.registry = registry
        self._cache: dict[int, ParagraphAnalysis] = {}
        self._token_index: dict[str, set[int]] = {}
        self._synced_version = registry.version
        self._version_counter = 0
        self._last_snapshot: AnalysisSnapshot | None = None
        self._last_key: tuple[int, int] | None = None
        self._prev_paragraphs: list[Paragraph] = []
        self.pipeline_runs = 0
        self.last_promoted: list[str] = []
        self.last_changed: set[int] = set()

    # -- cache bookkeeping ---------------------------------------------------

    def cache_size(self) -> int:
        return len(self._cache)

    def _store(self, entry: ParagraphAnalysis) -> None:
        self._cache[entry.content_hash] = entry
        for tok in entry.token_lower:
            self._token_index.setdefault(tok, set()).add(entry.content_hash)

    def _evict(self, content_hash_: int) -> None:
        entry = self._cache.pop(content_hash_, None)
        if entry is None:
            return
        for tok in entry.token_lower:
            bucket = self._token_index.get(tok)
            if bucket is not None:
                bucket.discard(content_hash_)
                if not bucket:
                    del self._token_index[tok]

    def sync(self) -> int:
        """Apply pending registry changes to the cache; returns evictions."""
        evicted = 0
        for change in self.registry.changes_since(self._synced_version):
            if not change.tokens:
                continue
            hits: set[int] = set()
            for tok in change.tokens:
                hits |= self._token_index.get(tok, set())
            for h in hits:
                self._evict(h)
                evicted += 1
        self._synced_version = self.registry.version
        return evicted

    # -- analysis -------------------------------------------------------------

    def analyze(
        self, document: str, delta: list[DeltaOp] | list[dict] | None = None
    ) -> AnalysisSnapshot:
        """Segment, analyze changed paragraphs, and merge with cached results.

        The delta is an optimization hint from the editor; a malformed hint is
        discarded and full hash reconciliation used (analysis itself never
        fails on a bad hint).
        """
        if delta is not None:
            try:
                self._validate_hint(delta)
            except MalformedDelta:
                pass
        self.sync()
        doc_hash = content_hash(document)
        if self._last_snapshot is not None and self._last_key == (
            doc_hash,
            self.registry.version,
        ):
            self.last_promoted = []
            self.last_changed = set()
            return self._last_snapshot

        spans = paragraph_spans(document)
        texts = [document[s.start : s.end] for s in spans]
        paragraphs = [
            Paragraph(i, span, content_hash(texts[i])) for i, span in enumerate(spans)
        ]
        self.last_changed = diff_paragraphs(self._prev_paragraphs, paragraphs)

        promoted: list[str] = []
        while True:
            view = self.registry.view()
            for para, text in zip(paragraphs, texts):
                if para.content_hash not in self._cache:
                    self.pipeline_runs += 1
                    self._store(run_paragraph_pipeline(text, view))
            new_names = self._provisional_surfaces(paragraphs, texts)
            if not new_names:
                break
            for surface in new_names:
                promoted.append(self.registry.promote(surface).id)
            self.sync()

        snapshot = self._aggregate(paragraphs)
        self._last_snapshot = snapshot
        self._last_key = (doc_hash, self.registry.version)
        self._prev_paragraphs = paragraphs
        self.last_promoted = promoted
        return snapshot

    @staticmethod
    def _validate_hint(delta) -> None:
        if delta and isinstance(delta[0], dict):
            delta_from_wire(delta)
            return
        for op in delta:
            if not isinstance(op, DeltaOp):
                raise MalformedDelta(f"not a delta op: {op!r}")

    def _provisional_surfaces(self, paragraphs, texts) -> list[str]:
        """Normalized surfaces of new names, in first-appearance order."""
        seen: dict[str, str] = {}
        for para, text in zip(paragraphs, texts):
            entry = self._cache[para.content_hash]
            if not entry.has_provisional:
                continue
            for mention in entry.mentions:
                if not is_provisional(mention.entity):
                    continue
                if mention.entity not in seen:
                    seen[mention.entity] = " ".join(mention.surface.split())
        return list(seen.values())

    def _aggregate(self, paragraphs: list[Paragraph]) -> AnalysisSnapshot:
        self._version_counter += 1
        entries = [(p, self._cache[p.content_hash]) for p in paragraphs]
        return merge_paragraphs(entries, self.registry, self._version_counter)


def merge_paragraphs(
    entries: list[tuple[Paragraph, ParagraphAnalysis]],
    registry: CharacterRegistry,
    snapshot_version: int,
) -> AnalysisSnapshot:
    """Re-base paragraph analyses to document scope and merge them.

    Mentions and links of tombstoned characters are dropped here, which is
    the aggregation the registry's alias/merge/delete state applies on top of
    the raw per-paragraph results.
    """
    sentence_base = 0
    sentence_spans: list[Span] = []
    mentions_acc: dict[str, list[tuple[int, Span]]] = {}
    links_acc: list[AttributeLink] = []
    token_parts: list[dict[str, int]] = []
    alive: dict[str | None, bool] = {None: False}
    alive_get = alive.get
    span_cls = Span
    extend_spans = sentence_spans.extend
    append_link = links_acc.append

    for para, entry in entries:
        offset = para.span.start
        extend_spans(
            span_cls(s.start + offset, s.end + offset) for s in entry.sentence_spans
        )
        for mention in entry.mentions:
            entity = mention.entity
            live = alive_get(entity)
            if live is None:
                rec = registry.record_or_none(entity)
                live = alive[entity] = rec is not None and not rec.deleted
            if not live:
                continue
            bucket = mentions_acc.get(entity)
            if bucket is None:
                bucket = mentions_acc[entity] = []
            span = mention.span
            bucket.append(
                (
                    sentence_base + mention.sentence_index,
                    span_cls(span.start + offset, span.end + offset),
                )
            )
        for link in entry.attribute_links:
            entity = link.entity
            live = alive_get(entity)
            if live is None:
                rec = registry.record_or_none(entity)
                live = alive[entity] = rec is not None and not rec.deleted
            if not live:
                continue
            span = link.source_span
            append_link(
                AttributeLink(
                    link.word,
                    link.pos_class,
                    entity,
                    sentence_base + link.sentence_index,
                    span_cls(span.start + offset, span.end + offset),
                )
            )
        token_parts.append(entry.token_counts)
        sentence_base += entry.sentence_count

    return AnalysisSnapshot(
        snapshot_version=snapshot_version,
        S=sentence_base,
        registry_version=registry.version,
        sentence_spans=tuple(sentence_spans),
        mentions={k: tuple(v) for k, v in mentions_acc.items()},
        attribute_links=tuple(links_acc),
        token_count_parts=tuple(token_parts),
    )


def analyze_with_gold(
    document: str, gold: GoldImport, registry: CharacterRegistry
) -> AnalysisSnapshot:
    """One-shot full analysis with gold annotations replacing the sieve.

    When the gold data carries attribute records they replace the pattern
    linker as well; otherwise patterns run over the gold mentions.
    """
    use_gold_links = any(gold.attribute_words.values())
    entries: list[tuple[Paragraph, ParagraphAnalysis]] = []
    for i, p_span in enumerate(paragraph_spans(document)):
        text = document[p_span.start : p_span.end]
        sentence_spans, tokens = segment_paragraph(text)
        tagged = tag_pos(tokens)
        mentions = tuple(gold.mentions.get(i, ()))
        if use_gold_links:
            links = tuple(
                AttributeLink(
                    text[span.start : span.end].lower(), pos, entity, sentence, span
                )
                for span, sentence, pos, entity in gold.attribute_words.get(i, ())
            )
        else:
            links = tuple(_extract_links(tagged, list(mentions), len(sentence_spans)))
        entry = ParagraphAnalysis(
            content_hash=content_hash(text),
            sentence_count=len(sentence_spans),
            sentence_spans=tuple(sentence_spans),
            mentions=mentions,
            attribute_links=links,
            token_lower=frozenset(t.text.lower() for t in tokens),
            token_counts=dict(Counter(t.text.lower() for t in tokens)),
        )
        entries.append((Paragraph(i, p_span, entry.content_hash), entry))
    return merge_paragraphs(entries, registry, snapshot_version=1)
