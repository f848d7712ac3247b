#!/usr/bin/env python3
"""Build the 200-sentence pos-tagging fixture with its gold tag file.

Sentences are filled from templates whose slots carry a known class, so the
gold file is correct by construction and independent of the tagger. Output:
pos_fixture.txt (one paragraph per sentence) and pos_fixture.gold.tsv with
"sentence<TAB>token<TAB>class" rows.
"""

import random
from pathlib import Path

HERE = Path(__file__).resolve().parent

# Slot vocabularies; the class column is the hand-checked truth. A slice of
# each list is deliberately absent from the shipped lexicon so the fixture
# also exercises the suffix rules and defaults.
NAMES = ["Marta", "Edwin", "Selina", "Rupert", "Ines", "Bogdan", "Celia", "Tomas"]
NOUNS = [
    "miller", "garden", "lantern", "harbor", "mountain", "letter", "teacher",
    "bridge", "orchard", "village", "soldier", "window", "basket", "cellar",
    "meadow", "chapel", "barrel", "saddle", "ribbon", "kettle",
]
VERBS_PAST = [
    "carried", "opened", "watched", "followed", "painted", "mended",
    "counted", "crossed", "borrowed", "gathered", "repaired", "signed",
    "sharpened", "measured", "weighed", "emptied",
]
VERBS_ING = [
    "carrying", "opening", "watching", "following", "painting", "mending",
    "counting", "crossing", "borrowing", "gathering", "repairing", "signing",
]
ADJS = [
    "narrow", "quiet", "heavy", "bright", "gloomy", "generous", "cautious",
    "famous", "graceful", "hopeful", "massive", "restive", "spacious",
    "dreadful", "festive", "gracious", "tedious", "wakeful", "pensive",
    "virtuous",
]
ADVERBS = ["slowly", "brightly", "gladly", "sadly", "neatly", "roughly", "calmly"]

TEMPLATES = [
    # (pattern, tuple of (word-or-slot, class)) — None class means punctuation
    [("the", "OTHER"), ("ADJ", "ADJ"), ("NOUN", "NOUN"), ("VERB_PAST", "VERB"),
     ("the", "OTHER"), ("NOUN", "NOUN"), (".", "OTHER")],
    [("NAME", "PROPER"), ("VERB_PAST", "VERB"), ("a", "OTHER"), ("ADJ", "ADJ"),
     ("NOUN", "NOUN"), (".", "OTHER")],
    [("she", "PRONOUN"), ("was", "OTHER"), ("VERB_ING", "VERB"), ("near", "OTHER"),
     ("the", "OTHER"), ("NOUN", "NOUN"), (".", "OTHER")],
    [("the", "OTHER"), ("NOUN", "NOUN"), ("was", "OTHER"), ("ADJ", "ADJ"),
     ("and", "OTHER"), ("ADJ", "ADJ"), (".", "OTHER")],
    [("he", "PRONOUN"), ("VERB_PAST", "VERB"), ("the", "OTHER"), ("NOUN", "NOUN"),
     ("ADV", "OTHER"), (".", "OTHER")],
    [("they", "PRONOUN"), ("had", "OTHER"), ("VERB_PAST", "VERB"), ("the", "OTHER"),
     ("ADJ", "ADJ"), ("NOUN", "NOUN"), (".", "OTHER")],
    [("a", "OTHER"), ("ADJ", "ADJ"), ("NOUN", "NOUN"), ("stood", "VERB"),
     ("beside", "OTHER"), ("the", "OTHER"), ("NOUN", "NOUN"), (".", "OTHER")],
    [("NAME", "PROPER"), ("and", "OTHER"), ("NAME", "PROPER"), ("VERB_PAST", "VERB"),
     ("ADV", "OTHER"), (".", "OTHER")],
]

SLOTS = {
    "NAME": NAMES,
    "NOUN": NOUNS,
    "VERB_PAST": VERBS_PAST,
    "VERB_ING": VERBS_ING,
    "ADJ": ADJS,
    "ADV": ADVERBS,
}


def main(n_sentences: int = 200) -> None:
    rng = random.Random(7021)
    lines = []
    gold_rows = []
    for s in range(1, n_sentences + 1):
        template = TEMPLATES[(s - 1) % len(TEMPLATES)]
        words = []
        for slot, cls in template:
            word = rng.choice(SLOTS[slot]) if slot in SLOTS else slot
            words.append(word)
            gold_rows.append((s, word, cls))
        sentence = " ".join(words[:-1]) + words[-1]
        sentence = sentence[0].upper() + sentence[1:]
        # keep the capitalized first word's gold row in sync
        first = gold_rows[-len(words)]
        gold_rows[-len(words)] = (first[0], sentence.split()[0], first[2])
        lines.append(sentence)

    (HERE / "pos_fixture.txt").write_text("\n\n".join(lines) + "\n", encoding="utf-8")
    with open(HERE / "pos_fixture.gold.tsv", "w", encoding="utf-8") as fh:
        for s, word, cls in gold_rows:
            fh.write(f"{s}\t{word}\t{cls}\n")
    print(f"wrote {n_sentences} sentences, {len(gold_rows)} gold tokens")


if __name__ == "__main__":
    main()
