"""Story analytics engine: characters, identities, and their textual treatment.

Tracks who appears where in a manuscript, how characters interact, and which
descriptors and actions attach to them, incrementally as the text changes.
"""

from .analytics import (
    CandidatePair,
    EmbeddingTable,
    InteractionEdge,
    TimelineRow,
    WordZoneEntry,
    bin_sentence_ranges,
    candidate_pairs,
    co_mention_counts,
    impact_graph,
    load_embedding_file,
    timeline,
    word_zone,
)
from .attributes import AttributeLink, extract_attributes, tag_pos
from .entities import (
    GoldImport,
    Mention,
    MentionKind,
    detect_named_mentions,
    import_annotations,
    resolve_paragraph,
)
from .errors import (
    CorruptFile,
    DuplicateAlias,
    MalformedDelta,
    NoEligibleSubjects,
    SelfMerge,
    SpanOutOfRange,
    StorylensError,
    UnknownDimension,
    UnknownEntity,
    UnknownPosClass,
    UnsupportedVersion,
)
from .incremental import AnalysisSnapshot, Analyzer, ParagraphAnalysis, analyze_with_gold
from .project import Project, Settings, load_project, save_project
from .registry import CharacterRecord, CharacterRegistry, GroupKey, IdentitySchema
from .textmodel import (
    DeltaOp,
    OpKind,
    Paragraph,
    PosClass,
    Sentence,
    Span,
    Token,
    apply_delta,
    delta_from_wire,
    diff_paragraphs,
    segment,
)

__version__ = "0.1.0"
