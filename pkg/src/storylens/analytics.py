"""Analytics over an analysis snapshot: timelines, co-mention graphs,
word zones, and embedding-based candidate pairs.

Subjects are either character ids or :class:`GroupKey` conjunctions; group
subjects aggregate their member characters. A word's weight for a subject is
its frequency among the subject's linked words times the reciprocal of its
frequency in the whole story.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import NoEligibleSubjects, UnknownDimension, UnknownEntity
from .incremental import AnalysisSnapshot
from .registry import CharacterRegistry, GroupKey
from .textmodel import PosClass

AGGREGATE_BIN_TARGET = 500
DEFAULT_MIN_EDGE_COUNT = 5
DEFAULT_TOP_N_PAIRS = 10
DEFAULT_MIN_EMBEDDED_WORDS = 3


@dataclass(frozen=True)
class TimelineRow:
    subject: object  # entity id or GroupKey
    label: str
    total_mentions: int
    tiles: tuple[tuple[int, int], ...]  # (bin_index, count), sorted by bin
    sort_rank: int


@dataclass(frozen=True)
class InteractionEdge:
    a: object
    b: object
    count: int


@dataclass(frozen=True)
class WordZoneEntry:
    subject: object
    word: str
    pos_class: PosClass
    weight: float


@dataclass(frozen=True)
class CandidatePair:
    a: object
    b: object
    distance: float


def subject_label(subject, registry: CharacterRegistry) -> str:
    if isinstance(subject, GroupKey):
        return subject.label(registry.schema)
    return registry.display_name(subject)


def subject_members(subject, registry: CharacterRegistry) -> list[str]:
    """Member character ids of a subject (singleton for a character id)."""
    if isinstance(subject, GroupKey):
        return registry.group_members(subject)
    registry.get(subject)  # raises UnknownEntity for missing/deleted ids
    return [subject]


def bin_count(S: int, aggregate: str = "AUTO") -> int:
    """Number of timeline bins: 500 when auto-aggregation engages, else S."""
    if aggregate.upper() == "AUTO" and S > AGGREGATE_BIN_TARGET:
        return AGGREGATE_BIN_TARGET
    return S


def bin_of_sentence(s: int, S: int, bins: int) -> int:
    return (s - 1) * bins // S


def bin_sentence_ranges(S: int, aggregate: str = "AUTO") -> list[tuple[int, int]]:
    """Inclusive 1-based sentence range covered by each bin."""
    bins = bin_count(S, aggregate)
    ranges = []
    for b in range(bins):
        start = -(-b * S // bins) + 1
        end = -(-(b + 1) * S // bins)
        ranges.append((start, end))
    return ranges


def timeline(
    snapshot: AnalysisSnapshot,
    registry: CharacterRegistry,
    mode: str = "characters",
    dimension: str | None = None,
    groups: list[GroupKey] | None = None,
    order: str = "DESC",
    aggregate: str = "AUTO",
) -> list[TimelineRow]:
    """Mention timeline rows for characters, one identity dimension, or
    explicit intersectional groups.

    Identity and group rows sum their member characters' mentions (a sentence
    mentioning two members contributes two). Rows sort by total mentions,
    descending by default with ties alphabetical; ascending is the exact
    reverse.
    """
    subjects = _timeline_subjects(snapshot, registry, mode, dimension, groups)
    S = snapshot.S
    bins = bin_count(S, aggregate) if S else 0

    unranked = []
    for subject, label, members in subjects:
        tile_counts: Counter = Counter()
        total = 0
        for member in members:
            for sentence_index, _span in snapshot.mentions.get(member, ()):
                tile_counts[bin_of_sentence(sentence_index, S, bins)] += 1
                total += 1
        if total == 0 and mode != "groups":
            continue
        tiles = tuple(sorted(tile_counts.items()))
        unranked.append((subject, label, total, tiles))

    unranked.sort(key=lambda row: (-row[2], row[1]))
    if order.upper() == "ASC":
        unranked.reverse()
    return [
        TimelineRow(subject, label, total, tiles, rank)
        for rank, (subject, label, total, tiles) in enumerate(unranked)
    ]


def _timeline_subjects(snapshot, registry, mode, dimension, groups):
    mode = mode.lower()
    if mode == "characters":
        out = []
        for entity in snapshot.mentions:
            out.append((entity, registry.display_name(entity), [entity]))
        return out
    if mode == "identity":
        if dimension is None or not registry.schema.has_dimension(dimension):
            raise UnknownDimension(str(dimension))
        out = []
        for category in registry.schema.categories(dimension):
            group = GroupKey.of((dimension, category))
            members = registry.group_members(group)
            if members:
                out.append((group, category, members))
        return out
    if mode == "groups":
        out = []
        for group in groups or []:
            out.append(
                (group, group.label(registry.schema), registry.group_members(group))
            )
        return out
    raise ValueError(f"unknown timeline mode {mode!r}")


def _sentence_subject_sets(snapshot, members_of: dict) -> dict[int, set]:
    """sentence index -> set of subjects mentioned in it."""
    by_sentence: dict[int, set] = {}
    for entity, places in snapshot.mentions.items():
        subjects = members_of.get(entity)
        if not subjects:
            continue
        for sentence_index, _span in places:
            by_sentence.setdefault(sentence_index, set()).update(subjects)
    return by_sentence


def co_mention_counts(
    snapshot: AnalysisSnapshot,
    registry: CharacterRegistry,
    subjects: list | None = None,
) -> Counter:
    """Exact sentence co-mention counts for every unordered subject pair."""
    if subjects is None:
        subjects = list(snapshot.mentions)
    members_of: dict[str, list] = {}
    labels: dict = {}
    for subject in subjects:
        labels[subject] = subject_label(subject, registry)
        for member in subject_members(subject, registry):
            members_of.setdefault(member, []).append(subject)
    counts: Counter = Counter()
    for mentioned in _sentence_subject_sets(snapshot, members_of).values():
        if len(mentioned) < 2:
            continue
        ordered = sorted(mentioned, key=lambda s: (labels[s], repr(s)))
        for a, b in itertools.combinations(ordered, 2):
            counts[(a, b)] += 1
    return counts


def impact_graph(
    snapshot: AnalysisSnapshot,
    registry: CharacterRegistry,
    focus,
    min_count: int = DEFAULT_MIN_EDGE_COUNT,
    universe: list | None = None,
) -> list[InteractionEdge]:
    """Edges incident to ``focus`` with at least ``min_count`` shared
    sentences, plus same-threshold edges among the returned neighbors."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    if isinstance(focus, GroupKey):
        if universe is None:
            raise ValueError("group focus needs an explicit subject universe")
        subjects = list(universe)
        if focus not in subjects:
            subjects.append(focus)
    else:
        registry.get(focus)
        subjects = universe if universe is not None else list(snapshot.mentions)
        if focus not in subjects:
            subjects.append(focus)

    counts = co_mention_counts(snapshot, registry, subjects)
    neighbors = set()
    edges = []
    for (a, b), count in counts.items():
        if count >= min_count and (a == focus or b == focus):
            edges.append(InteractionEdge(a, b, count))
            neighbors.add(b if a == focus else a)
    for (a, b), count in counts.items():
        if count >= min_count and a != focus and b != focus:
            if a in neighbors and b in neighbors:
                edges.append(InteractionEdge(a, b, count))
    edges.sort(
        key=lambda e: (
            -e.count,
            subject_label(e.a, registry),
            subject_label(e.b, registry),
        )
    )
    return edges


def word_zone(
    snapshot: AnalysisSnapshot,
    registry: CharacterRegistry,
    subjects: list,
    pos_filter: str = "BOTH",
    k: int = 10,
) -> list[WordZoneEntry]:
    """Top-k weighted descriptor/action words per subject.

    weight(w, subject) = tf(w, subject) * (1 / df(w)) with tf counted over the
    subject's attribute links and df over every token of the whole story,
    case-folded. A subject with no links yields no entries.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    wanted = _pos_classes(pos_filter)
    df = snapshot.token_frequencies()
    out: list[WordZoneEntry] = []
    for subject in subjects:
        members = set(subject_members(subject, registry))
        tf: dict[tuple[str, PosClass], int] = Counter()
        for link in snapshot.attribute_links:
            if link.pos_class in wanted and link.entity in members:
                tf[(link.word, link.pos_class)] += 1
        scored = []
        for (word, pos_class), count in tf.items():
            # linked words are story tokens, so df >= 1; multi-word gold
            # spans fall back to a neutral denominator
            weight = count * (1.0 / df.get(word, 1))
            scored.append(WordZoneEntry(subject, word, pos_class, weight))
        scored.sort(key=lambda e: (-e.weight, e.word))
        out.extend(scored[:k])
    return out


def _pos_classes(pos_filter: str) -> frozenset[PosClass]:
    mapping = {
        "ADJ": frozenset({PosClass.ADJ}),
        "VERB": frozenset({PosClass.VERB}),
        "BOTH": frozenset({PosClass.ADJ, PosClass.VERB}),
    }
    key = pos_filter.upper()
    if key not in mapping:
        raise ValueError(f"pos_filter must be ADJ, VERB, or BOTH, not {pos_filter!r}")
    return mapping[key]


@dataclass
class EmbeddingTable:
    """Word-vector lookup; all vectors share one dimension, keys case-folded."""

    dimension: int
    entries: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, word: str) -> np.ndarray | None:
        return self.entries.get(word.lower())


def load_embedding_file(path) -> EmbeddingTable:
    """Parse a "count dimension" header plus "word v1 .. vd" lines."""
    entries: dict[str, np.ndarray] = {}
    dimension = None
    declared = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if declared is None:
                if len(parts) != 2:
                    raise ValueError(f"line {lineno}: expected 'count dimension' header")
                try:
                    declared, dimension = int(parts[0]), int(parts[1])
                except ValueError as exc:
                    raise ValueError(f"line {lineno}: bad header numbers") from exc
                if declared < 0 or dimension < 1:
                    raise ValueError(f"line {lineno}: bad header values")
                continue
            word = parts[0].lower()
            values = parts[1:]
            if len(values) != dimension:
                raise ValueError(
                    f"line {lineno}: expected {dimension} components, got {len(values)}"
                )
            try:
                vector = np.array([float(v) for v in values], dtype=np.float64)
            except ValueError as exc:
                raise ValueError(f"line {lineno}: non-numeric component") from exc
            entries.setdefault(word, vector)
    if declared is None:
        raise ValueError("empty embedding file")
    if declared != len(entries):
        raise ValueError(
            f"header declares {declared} words but file holds {len(entries)}"
        )
    return EmbeddingTable(dimension=dimension, entries=entries)


def candidate_pairs(
    snapshot: AnalysisSnapshot,
    registry: CharacterRegistry,
    table: EmbeddingTable,
    subjects: list,
    top_n: int = DEFAULT_TOP_N_PAIRS,
    min_words: int = DEFAULT_MIN_EMBEDDED_WORDS,
) -> list[CandidatePair]:
    """Most-different subject pairs by cosine distance of mean word vectors.

    Each subject is represented by the arithmetic mean of the embeddings of
    its distinct attribute-linked words found in the table; subjects with
    fewer than ``min_words`` embedded words are excluded.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    if not table.entries:
        raise ValueError("embedding table is empty")

    means = []
    for subject in subjects:
        members = set(subject_members(subject, registry))
        words = {
            link.word
            for link in snapshot.attribute_links
            if link.entity in members
        }
        vectors = [table.get(w) for w in sorted(words)]
        vectors = [v for v in vectors if v is not None]
        if len(vectors) < min_words:
            continue
        means.append((subject, np.mean(vectors, axis=0)))

    if len(means) < 2:
        raise NoEligibleSubjects(
            f"{len(means)} subject(s) have at least {min_words} embedded words"
        )

    pairs = []
    for (sa, va), (sb, vb) in itertools.combinations(means, 2):
        denom = float(np.linalg.norm(va) * np.linalg.norm(vb))
        distance = 1.0 if denom == 0 else 1.0 - float(np.dot(va, vb)) / denom
        a, b = sorted((sa, sb), key=lambda s: subject_label(s, registry))
        pairs.append(CandidatePair(a, b, distance))
    pairs.sort(
        key=lambda p: (
            -p.distance,
            subject_label(p.a, registry),
            subject_label(p.b, registry),
        )
    )
    return pairs[:top_n]
