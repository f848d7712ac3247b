"""Shipped lexicon data: honorifics, proper-noun stoplist, gender hints, POS words.

Data files live under ``storylens/data`` and are loaded once per process.
Closed-class word sets are small and fixed, so they live here as constants.
"""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from .textmodel import PosClass

_DATA_DIR = Path(__file__).parent / "data"

# Pronoun buckets used by the resolution sieve. Deliberately exact: the
# resolver never guesses beyond these forms.
MASCULINE_PRONOUNS = frozenset({"he", "him", "his"})
FEMININE_PRONOUNS = frozenset({"she", "her", "hers"})
NEUTRAL_PRONOUNS = frozenset({"they", "them", "their"})
RESOLVABLE_PRONOUNS = MASCULINE_PRONOUNS | FEMININE_PRONOUNS | NEUTRAL_PRONOUNS

ALL_PRONOUNS = RESOLVABLE_PRONOUNS | frozenset(
    {
        "i", "me", "my", "mine", "myself",
        "you", "your", "yours", "yourself",
        "we", "us", "our", "ours", "ourselves",
        "it", "its", "itself",
        "himself", "herself", "themselves", "theirs",
        "who", "whom", "whose",
    }
)

DETERMINERS = frozenset(
    {
        "a", "an", "the", "this", "that", "these", "those", "each", "every",
        "some", "any", "no", "all", "both", "either", "neither", "such",
    }
)

AUXILIARIES = frozenset(
    {
        "am", "is", "are", "was", "were", "be", "been", "being",
        "do", "does", "did", "have", "has", "had", "having",
        "will", "would", "shall", "should", "may", "might", "must",
        "can", "could", "ought",
    }
)

PREPOSITIONS = frozenset(
    {
        "about", "above", "across", "after", "against", "along", "among",
        "around", "at", "before", "behind", "below", "beneath", "beside",
        "between", "beyond", "by", "down", "during", "for", "from", "in",
        "inside", "into", "near", "of", "off", "on", "onto", "out", "outside",
        "over", "past", "through", "to", "toward", "towards", "under", "until",
        "up", "upon", "with", "within", "without",
    }
)

CONJUNCTIONS = frozenset(
    {"and", "but", "or", "nor", "so", "yet", "if", "because", "while",
     "when", "where", "as", "than", "though", "although", "unless", "once"}
)

PARTICLES = frozenset({"not", "never", "there", "here", "then", "now", "very",
                       "too", "also", "just", "only", "even", "still", "again",
                       "quite", "rather", "really", "soon", "almost", "ever"})

NUMBER_WORDS = frozenset(
    {
        "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
        "ten", "eleven", "twelve", "twenty", "thirty", "forty", "fifty",
        "sixty", "seventy", "eighty", "ninety", "hundred", "thousand",
        "first", "second", "third", "fourth", "fifth", "sixth", "seventh",
        "eighth", "ninth", "tenth", "last", "next", "many", "few", "several",
    }
)

CLOSED_CLASS_OTHER = (
    DETERMINERS | AUXILIARIES | PREPOSITIONS | CONJUNCTIONS | PARTICLES | NUMBER_WORDS
)

# Linking words accepted between a mention and its predicate adjectives.
COPULAS = AUXILIARIES | frozenset(
    {
        "seem", "seems", "seemed", "look", "looks", "looked",
        "appear", "appears", "appeared", "become", "becomes", "became",
        "feel", "feels", "felt", "grow", "grows", "grew", "grown",
        "remain", "remains", "remained", "stay", "stays", "stayed",
        "turn", "turns", "turned",
    }
)

# Degree words and conjunctions that may sit inside an adjective run.
ADJ_CONNECTORS = frozenset(
    {",", "and", "or", "very", "so", "too", "quite", "rather", "really",
     "most", "more", "truly", "almost", "but", "yet"}
)


def _read_lines(name: str) -> list[str]:
    path = _DATA_DIR / name
    lines = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


@lru_cache(maxsize=None)
def honorifics() -> frozenset[str]:
    """Lowercase honorific words ("mr", "lady", ...)."""
    return frozenset(line.lower() for line in _read_lines("honorifics.txt"))


@lru_cache(maxsize=None)
def stoplist() -> frozenset[str]:
    """Lowercase surfaces of known non-person proper nouns."""
    return frozenset(line.lower() for line in _read_lines("stoplist.txt"))


@lru_cache(maxsize=None)
def gender_lexicon() -> dict[str, str]:
    """Lowercase first-name token -> 'm' | 'f'."""
    out = {}
    for line in _read_lines("gender_names.txt"):
        name, _, tag = line.partition(" ")
        if tag.strip() in ("m", "f"):
            out[name.lower()] = tag.strip()
    return out


@lru_cache(maxsize=None)
def pos_lexicon() -> dict[str, PosClass]:
    out = {}
    for line in _read_lines("pos_lexicon.txt"):
        word, _, cls = line.partition(" ")
        out[word] = PosClass(cls.strip())
    return out


@lru_cache(maxsize=None)
def suffix_rules() -> tuple[tuple[str, PosClass], ...]:
    rules = []
    for line in _read_lines("suffix_rules.txt"):
        suffix, _, cls = line.partition(" ")
        rules.append((suffix, PosClass(cls.strip())))
    return tuple(rules)


@lru_cache(maxsize=None)
def common_words() -> frozenset[str]:
    """Ordinary vocabulary used to reject sentence-initial capitalized words
    as name candidates."""
    return frozenset(pos_lexicon()) | ALL_PRONOUNS | CLOSED_CLASS_OTHER | COPULAS
