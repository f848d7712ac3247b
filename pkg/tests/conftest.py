import json
from pathlib import Path

import pytest

from storylens import CharacterRegistry
from storylens.incremental import Analyzer

FIXTURES = Path(__file__).parent / "fixtures"


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def read_gold(name: str) -> list[dict]:
    out = []
    for line in (FIXTURES / name).read_text(encoding="utf-8").splitlines():
        if line.strip():
            out.append(json.loads(line))
    return out


@pytest.fixture
def sleeping_beauty():
    return read_fixture("sleeping_beauty.txt")


@pytest.fixture
def sleeping_beauty_gold():
    return read_gold("sleeping_beauty.gold.jsonl")


@pytest.fixture
def winter_pact():
    return read_fixture("winter_pact.txt")


@pytest.fixture
def winter_pact_gold():
    return read_gold("winter_pact.gold.jsonl")


@pytest.fixture
def salon_excerpt():
    return read_fixture("salon_excerpt.txt")


@pytest.fixture
def embeddings_path():
    return FIXTURES / "toy_embeddings.txt"


def analyze_fresh(document: str):
    """Cold analysis convenience: returns (snapshot, registry, analyzer)."""
    registry = CharacterRegistry()
    analyzer = Analyzer(registry)
    return analyzer.analyze(document), registry, analyzer
