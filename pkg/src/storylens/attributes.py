"""Part-of-speech tagging and descriptor/action linking.

The tagger is a lookup cascade (closed class, word lexicon, suffix rules);
the linker applies four shallow sentence-local patterns instead of a full
dependency parse:

  (a) copular     mention + be/seem/look + adjective run
  (b) prenominal  adjective run immediately before a mention
  (c) subject-verb  a verb links to the nearest preceding resolved mention
  (d) appositive  mention , <adjective phrase> ,

Adjective runs may contain connector tokens (commas, and/or, degree words);
each adjective occurrence is linked at most once, patterns applied in the
order above.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import lexicons
from .entities import Mention
from .textmodel import PosClass, Span, Token

_APPOSITIVE_EXTRA = frozenset({"a", "an", "the", "of"})
_MAX_APPOSITIVE_TOKENS = 8


@dataclass(frozen=True, slots=True)
class AttributeLink:
    word: str  # case-folded surface
    pos_class: PosClass
    entity: str
    sentence_index: int
    source_span: Span


def tag_pos(tokens: list[Token]) -> list[Token]:
    """Assign one pos class per token; pure and sentence-local."""
    lexicon = lexicons.pos_lexicon()
    rules = lexicons.suffix_rules()
    tagged: list[Token] = []
    sentence_seen: set[int] = set()
    for i, tok in enumerate(tokens):
        initial = tok.sentence_index not in sentence_seen
        sentence_seen.add(tok.sentence_index)
        tagged.append(tok.with_pos(_classify(tok, i, tokens, initial, lexicon, rules)))
    return tagged


def _classify(tok, i, tokens, sentence_initial, lexicon, rules) -> PosClass:
    text = tok.text
    if not text[0].isalpha():
        return PosClass.OTHER
    low = text.lower()
    if low in lexicons.ALL_PRONOUNS:
        return PosClass.PRONOUN
    if low in lexicons.CLOSED_CLASS_OTHER:
        return PosClass.OTHER
    if text[0].isupper() and not sentence_initial:
        return PosClass.PROPER
    hit = lexicon.get(low)
    if hit is not None:
        return hit
    if low.endswith(("ed", "ing")) and len(low) > 4:
        return _ed_ing(low, i, tokens, lexicon)
    for suffix, cls in rules:
        if low.endswith(suffix) and len(low) > len(suffix) + 1:
            return cls
    return PosClass.OTHER


def _ed_ing(low, i, tokens, lexicon) -> PosClass:
    # after an auxiliary -> VERB ("was sleeping"); before a common noun -> ADJ
    # ("a burnished kettle"); otherwise read it as a plain past-tense verb.
    # A following proper name does not count as noun context ("embraced Nora"
    # is verb + object far more often than modifier + name).
    sentence = tokens[i].sentence_index
    for back in (1, 2):
        j = i - back
        if j < 0 or tokens[j].sentence_index != sentence:
            break
        if tokens[j].text.lower() in lexicons.AUXILIARIES:
            return PosClass.VERB
        if not tokens[j].text[0].isalpha():
            break
    j = i + 1
    if j < len(tokens) and tokens[j].sentence_index == sentence:
        nxt = tokens[j].text
        if nxt[0].isalpha() and lexicon.get(nxt.lower()) is PosClass.NOUN:
            return PosClass.ADJ
    return PosClass.VERB


def extract_attributes(
    sentence_tokens: list[Token], sentence_mentions: list[Mention]
) -> list[AttributeLink]:
    """Link adjectives and verbs in one sentence to its resolved mentions."""
    mentions = [m for m in sentence_mentions if m.entity is not None]
    if not mentions:
        return []
    toks = sentence_tokens
    links: list[AttributeLink] = []
    claimed: set[int] = set()  # adjective token indexes already linked

    first_token_of: dict[int, int] = {}
    last_token_of: dict[int, int] = {}
    for mi, mention in enumerate(mentions):
        covered = [
            i for i, t in enumerate(toks) if mention.span.contains(t.span)
        ]
        if covered:
            first_token_of[mi] = covered[0]
            last_token_of[mi] = covered[-1]

    def emit(idx: int, entity: str):
        tok = toks[idx]
        links.append(
            AttributeLink(
                tok.text.lower(), tok.pos, entity, tok.sentence_index, tok.span
            )
        )

    # (a) copular
    for mi, mention in enumerate(mentions):
        if mi not in last_token_of:
            continue
        j = last_token_of[mi] + 1
        if j >= len(toks) or toks[j].text.lower() not in lexicons.COPULAS:
            continue
        k = j + 1
        while k < len(toks):
            if toks[k].pos is PosClass.ADJ:
                if k not in claimed:
                    claimed.add(k)
                    emit(k, mention.entity)
                k += 1
            elif toks[k].text.lower() in lexicons.ADJ_CONNECTORS:
                k += 1
            else:
                break

    # (b) prenominal
    for mi, mention in enumerate(mentions):
        if mi not in first_token_of:
            continue
        k = first_token_of[mi] - 1
        while k >= 0 and toks[k].pos is PosClass.ADJ:
            if k not in claimed:
                claimed.add(k)
                emit(k, mention.entity)
            k -= 1

    # (c) subject-verb
    starts = [(first_token_of[mi], mi) for mi in first_token_of]
    for idx, tok in enumerate(toks):
        if tok.pos is not PosClass.VERB:
            continue
        subject = None
        for start, mi in starts:
            if start < idx and (last_token_of[mi] < idx):
                if subject is None or start > first_token_of[subject]:
                    subject = mi
        if subject is not None:
            emit(idx, mentions[subject].entity)

    # (d) appositive
    for mi, mention in enumerate(mentions):
        if mi not in last_token_of:
            continue
        j = last_token_of[mi] + 1
        if j >= len(toks) or toks[j].text != ",":
            continue
        segment = []
        k = j + 1
        closed = False
        while k < len(toks) and len(segment) <= _MAX_APPOSITIVE_TOKENS:
            if toks[k].text == ",":
                closed = True
                break
            segment.append(k)
            k += 1
        if not closed or not segment:
            continue
        if not _appositive_shape(segment, toks):
            continue
        for k in segment:
            if toks[k].pos is PosClass.ADJ and k not in claimed:
                claimed.add(k)
                emit(k, mention.entity)

    return links


def _appositive_shape(segment: list[int], toks: list[Token]) -> bool:
    has_adj = False
    for k in segment:
        tok = toks[k]
        if tok.pos is PosClass.ADJ:
            has_adj = True
        elif tok.pos in (PosClass.VERB, PosClass.PRONOUN, PosClass.PROPER):
            return False
        else:
            low = tok.text.lower()
            if low not in lexicons.ADJ_CONNECTORS and low not in _APPOSITIVE_EXTRA and tok.pos is not PosClass.NOUN:
                return False
    return has_adj
