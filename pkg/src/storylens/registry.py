"""Curated character model: records, aliases, demographics, identity schema.

The registry is the single mutable piece of state in the engine. Every
mutation bumps ``version`` and appends a change record so the incremental
analyzer can invalidate exactly the paragraphs a change can affect.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DuplicateAlias, SelfMerge, UnknownDimension, UnknownEntity
from .lexicons import gender_lexicon
from .textmodel import word_tokens

GENDER_DIMENSION = "Gender"
SELF_DESCRIBED_PREFIX = "Self-described:"

_MALE_CATEGORIES = frozenset({"male", "man", "men", "boy", "masculine"})
_FEMALE_CATEGORIES = frozenset({"female", "woman", "women", "girl", "feminine"})


@dataclass
class CharacterRecord:
    id: str
    canonical_name: str
    aliases: set[str] = field(default_factory=set)
    manual_aliases: set[str] = field(default_factory=set)
    demographics: dict[str, str] = field(default_factory=dict)
    manually_added: bool = False
    deleted: bool = False

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "canonical_name": self.canonical_name,
            "aliases": sorted(self.aliases),
            "manual_aliases": sorted(self.manual_aliases),
            "demographics": dict(sorted(self.demographics.items())),
            "manually_added": self.manually_added,
            "deleted": self.deleted,
        }


@dataclass(frozen=True)
class GroupKey:
    """Conjunction of (dimension, category) pairs; one pair per dimension."""

    selections: frozenset[tuple[str, str]]

    def __post_init__(self):
        if not self.selections:
            raise ValueError("GroupKey needs at least one selection")
        dims = [d for d, _ in self.selections]
        if len(dims) != len(set(dims)):
            raise ValueError("GroupKey allows one category per dimension")

    @staticmethod
    def of(*pairs: tuple[str, str]) -> "GroupKey":
        return GroupKey(frozenset(pairs))

    def matches(self, demographics: dict[str, str]) -> bool:
        return all(demographics.get(dim) == cat for dim, cat in self.selections)

    def label(self, schema: "IdentitySchema" | None = None) -> str:
        order = {name: i for i, name in enumerate(schema.dimension_names())} if schema else {}
        pairs = sorted(self.selections, key=lambda p: (order.get(p[0], 999), p[0]))
        return " ".join(cat for _, cat in pairs)

    def to_dict(self) -> dict:
        return {dim: cat for dim, cat in sorted(self.selections)}

    @staticmethod
    def from_dict(data: dict) -> "GroupKey":
        return GroupKey(frozenset((str(d), str(c)) for d, c in data.items()))


class IdentitySchema:
    """Ordered, user-extensible identity dimensions."""

    def __init__(self, dimensions: list[tuple[str, list[str]]] | None = None):
        self._dims: dict[str, list[str]] = {}
        for name, categories in dimensions or []:
            self._dims[name] = list(categories)

    @staticmethod
    def default() -> "IdentitySchema":
        return IdentitySchema(
            [
                ("Gender", ["Female", "Male", "Non-binary", "Transgender", "Agender"]),
                (
                    "Race/Ethnicity",
                    [
                        "Asian",
                        "Black or African American",
                        "Hispanic or Latine",
                        "Middle Eastern or North African",
                        "Native American or Alaska Native",
                        "Native Hawaiian or Pacific Islander",
                        "White",
                        "Multiracial",
                    ],
                ),
                (
                    "Age-group",
                    ["Child", "Teenager", "Young adult", "Adult", "Middle-aged", "Older adult"],
                ),
            ]
        )

    def dimension_names(self) -> list[str]:
        return list(self._dims)

    def has_dimension(self, name: str) -> bool:
        return name in self._dims

    def categories(self, dimension: str) -> list[str]:
        if dimension not in self._dims:
            raise UnknownDimension(dimension)
        return list(self._dims[dimension])

    def has_category(self, dimension: str, category: str) -> bool:
        return dimension in self._dims and category in self._dims[dimension]

    def extend(self, dimension: str, category: str | None = None) -> bool:
        """Add a dimension and/or category; returns True when anything changed."""
        dimension = dimension.strip()
        if not dimension:
            raise ValueError("dimension name must be non-empty")
        changed = False
        if dimension not in self._dims:
            self._dims[dimension] = []
            changed = True
        if category is not None:
            category = category.strip()
            if not category:
                raise ValueError("category name must be non-empty")
            if category not in self._dims[dimension]:
                self._dims[dimension].append(category)
                changed = True
        return changed

    def to_dict(self) -> dict:
        return {
            "dimensions": [
                {"name": name, "categories": list(cats)} for name, cats in self._dims.items()
            ]
        }

    @staticmethod
    def from_dict(data: dict) -> "IdentitySchema":
        dims = []
        for i, dim in enumerate(data.get("dimensions", [])):
            if not isinstance(dim, dict) or "name" not in dim:
                raise ValueError(f"schema.dimensions[{i}]: expected object with name")
            cats = dim.get("categories", [])
            if not isinstance(cats, list):
                raise ValueError(f"schema.dimensions[{i}].categories: expected list")
            dims.append((str(dim["name"]), [str(c) for c in cats]))
        return IdentitySchema(dims)


@dataclass(frozen=True)
class RegistryChange:
    """One registry mutation plus the lowercase word tokens it can affect."""

    kind: str
    tokens: frozenset[str]


@dataclass(frozen=True)
class AliasPattern:
    surface: str  # alias string as registered
    tokens: tuple[str, ...]  # original casing
    entity: str
    case_sensitive: bool
    canonical: bool  # pattern surface equals the record's canonical name


class RegistryView:
    """Immutable read view the paragraph pipeline runs against."""

    def __init__(self, registry: "CharacterRegistry"):
        self.version = registry.version
        self.patterns: dict[str, list[AliasPattern]] = {}
        self.gender: dict[str, str | None] = {}
        self.canonical: dict[str, str] = {}
        suppressed = set()
        live_lower = set()
        lexicon = gender_lexicon()
        for rec in registry.all_records():
            if rec.deleted:
                suppressed.update(a.lower() for a in rec.aliases)
                continue
            live_lower.update(a.lower() for a in rec.aliases)
            self.canonical[rec.id] = rec.canonical_name
            self.gender[rec.id] = _record_gender(rec, lexicon)
            canon_lower = rec.canonical_name.lower()
            for alias in rec.aliases:
                toks = tuple(word_tokens(alias))
                if not toks:
                    continue
                pattern = AliasPattern(
                    surface=alias,
                    tokens=toks,
                    entity=rec.id,
                    case_sensitive=alias in rec.manual_aliases,
                    canonical=alias.lower() == canon_lower,
                )
                self.patterns.setdefault(toks[0].lower(), []).append(pattern)
        for bucket in self.patterns.values():
            bucket.sort(key=lambda p: (-len(p.tokens), p.entity))
        self.suppressed = frozenset(suppressed - live_lower)

    def guess_gender(self, first_token_lower: str) -> str | None:
        return gender_lexicon().get(first_token_lower)


def _record_gender(rec: CharacterRecord, lexicon: dict[str, str]) -> str | None:
    """'m' | 'f' | 'x' (assigned, neither) | None (unknown, compatible with any)."""
    assigned = rec.demographics.get(GENDER_DIMENSION)
    if assigned:
        normalized = assigned.lower()
        if normalized.startswith(SELF_DESCRIBED_PREFIX.lower()):
            normalized = normalized[len(SELF_DESCRIBED_PREFIX):].strip()
        if normalized in _MALE_CATEGORIES:
            return "m"
        if normalized in _FEMALE_CATEGORIES:
            return "f"
        return "x"
    toks = word_tokens(rec.canonical_name.lower())
    return lexicon.get(toks[0]) if toks else None


class CharacterRegistry:
    """Single-writer character store for one project session."""

    def __init__(self, schema: IdentitySchema | None = None):
        self.schema = schema or IdentitySchema.default()
        self._records: dict[str, CharacterRecord] = {}
        self._next_id = 1
        self.version = 0
        self._journal: list[tuple[int, RegistryChange]] = []
        self._view: RegistryView | None = None

    # -- reads ------------------------------------------------------------

    def all_records(self) -> list[CharacterRecord]:
        return list(self._records.values())

    def live_records(self) -> list[CharacterRecord]:
        return [r for r in self._records.values() if not r.deleted]

    def get(self, entity_id: str, include_deleted: bool = False) -> CharacterRecord:
        rec = self._records.get(entity_id)
        if rec is None or (rec.deleted and not include_deleted):
            raise UnknownEntity(entity_id)
        return rec

    def record_or_none(self, entity_id: str) -> CharacterRecord | None:
        return self._records.get(entity_id)

    def find_by_alias(self, surface: str) -> CharacterRecord | None:
        lowered = surface.lower()
        for rec in self._records.values():
            if not rec.deleted and lowered in (a.lower() for a in rec.aliases):
                return rec
        return None

    def find_by_canonical(self, name: str) -> CharacterRecord | None:
        lowered = name.lower()
        for rec in self._records.values():
            if not rec.deleted and rec.canonical_name.lower() == lowered:
                return rec
        return None

    def group_members(self, group: GroupKey) -> list[str]:
        return [r.id for r in self.live_records() if group.matches(r.demographics)]

    def display_name(self, entity_id: str) -> str:
        rec = self._records.get(entity_id)
        return rec.canonical_name if rec else entity_id

    def view(self) -> RegistryView:
        if self._view is None or self._view.version != self.version:
            self._view = RegistryView(self)
        return self._view

    def changes_since(self, version: int) -> list[RegistryChange]:
        return [change for v, change in self._journal if v > version]

    # -- mutations ---------------------------------------------------------

    def _bump(self, kind: str, surfaces: set[str]) -> None:
        self.version += 1
        tokens = set()
        for surface in surfaces:
            tokens.update(t.lower() for t in word_tokens(surface))
        self._journal.append((self.version, RegistryChange(kind, frozenset(tokens))))

    def _check_alias_free(self, surface: str) -> None:
        if self.find_by_alias(surface) is not None:
            raise DuplicateAlias(surface)

    def promote(self, surface: str) -> CharacterRecord:
        """Create a record for a surface discovered by the pipeline."""
        existing = self.find_by_alias(surface)
        if existing is not None:
            return existing
        rec = CharacterRecord(
            id=f"c{self._next_id}", canonical_name=surface, aliases={surface}
        )
        self._next_id += 1
        self._records[rec.id] = rec
        self._bump("promote", {surface})
        return rec

    def add_manual(self, surface: str) -> CharacterRecord:
        surface = surface.strip()
        if not surface:
            raise ValueError("surface must be non-empty")
        self._check_alias_free(surface)
        rec = CharacterRecord(
            id=f"c{self._next_id}",
            canonical_name=surface,
            aliases={surface},
            manual_aliases={surface},
            manually_added=True,
        )
        self._next_id += 1
        self._records[rec.id] = rec
        self._bump("add_manual", {surface})
        return rec

    def add_alias(self, entity_id: str, alias: str) -> CharacterRecord:
        rec = self.get(entity_id)
        alias = alias.strip()
        if not alias:
            raise ValueError("alias must be non-empty")
        if alias.lower() in (a.lower() for a in rec.aliases):
            return rec
        self._check_alias_free(alias)
        rec.aliases.add(alias)
        self._bump("add_alias", {alias})
        return rec

    def merge(self, target_id: str, source_id: str) -> CharacterRecord:
        if target_id == source_id:
            raise SelfMerge(target_id)
        target = self.get(target_id)
        source = self.get(source_id)
        target_lower = {a.lower() for a in target.aliases}
        for alias in source.aliases:
            if alias.lower() not in target_lower:
                target.aliases.add(alias)
                target_lower.add(alias.lower())
        target.manual_aliases |= {
            a for a in source.manual_aliases if a in target.aliases
        }
        for dim, cat in source.demographics.items():
            target.demographics.setdefault(dim, cat)
        source.deleted = True
        self._bump("merge", set(target.aliases) | set(source.aliases))
        return target

    def delete(self, entity_id: str) -> CharacterRecord:
        rec = self.get(entity_id)
        rec.deleted = True
        self._bump("delete", set(rec.aliases))
        return rec

    def restore(self, entity_id: str) -> CharacterRecord:
        rec = self._records.get(entity_id)
        if rec is None or not rec.deleted:
            raise UnknownEntity(entity_id)
        for alias in rec.aliases:
            self._check_alias_free(alias)
        rec.deleted = False
        self._bump("restore", set(rec.aliases))
        return rec

    def assign_demographic(
        self, entity_id: str, dimension: str, category: str | None
    ) -> CharacterRecord:
        rec = self.get(entity_id)
        if not self.schema.has_dimension(dimension):
            raise UnknownDimension(dimension)
        if category is not None:
            category = category.strip()
            if category.startswith(SELF_DESCRIBED_PREFIX):
                self.schema.extend(dimension, category)
            elif not self.schema.has_category(dimension, category):
                raise UnknownDimension(f"{dimension}/{category}")
            rec.demographics[dimension] = category
        else:
            rec.demographics.pop(dimension, None)
        # Only gender feeds pronoun resolution; other dimensions aggregate
        # at snapshot level and need no paragraph re-analysis.
        surfaces = set(rec.aliases) if dimension == GENDER_DIMENSION else set()
        self._bump("demographic", surfaces)
        return rec

    def extend_schema(self, dimension: str, category: str | None = None) -> bool:
        changed = self.schema.extend(dimension, category)
        if changed:
            self._bump("schema", set())
        return changed

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "next_id": self._next_id,
            "schema": self.schema.to_dict(),
            "records": [r.to_dict() for r in sorted(self._records.values(), key=lambda r: r.id)],
        }

    @staticmethod
    def from_dict(data: dict) -> "CharacterRegistry":
        if not isinstance(data, dict):
            raise ValueError("registry: expected object")
        schema = IdentitySchema.from_dict(data.get("schema", {}))
        registry = CharacterRegistry(schema)
        next_id = data.get("next_id", 1)
        if not isinstance(next_id, int) or next_id < 1:
            raise ValueError("registry.next_id: expected positive integer")
        registry._next_id = next_id
        records = data.get("records", [])
        if not isinstance(records, list):
            raise ValueError("registry.records: expected list")
        for i, rd in enumerate(records):
            rec = _record_from_dict(rd, f"registry.records[{i}]")
            if rec.id in registry._records:
                raise ValueError(f"registry.records[{i}].id: duplicate {rec.id!r}")
            registry._records[rec.id] = rec
        return registry


def _record_from_dict(data: dict, path: str) -> CharacterRecord:
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected object")
    for key in ("id", "canonical_name", "aliases"):
        if key not in data:
            raise ValueError(f"{path}.{key}: missing")
    aliases = data["aliases"]
    if not isinstance(aliases, list) or not aliases:
        raise ValueError(f"{path}.aliases: expected non-empty list")
    canonical = str(data["canonical_name"])
    alias_set = {str(a) for a in aliases}
    if canonical not in alias_set:
        raise ValueError(f"{path}.canonical_name: must be one of the aliases")
    demographics = data.get("demographics", {})
    if not isinstance(demographics, dict):
        raise ValueError(f"{path}.demographics: expected object")
    return CharacterRecord(
        id=str(data["id"]),
        canonical_name=canonical,
        aliases=alias_set,
        manual_aliases={str(a) for a in data.get("manual_aliases", [])} & alias_set,
        demographics={str(k): str(v) for k, v in demographics.items()},
        manually_added=bool(data.get("manually_added", False)),
        deleted=bool(data.get("deleted", False)),
    )
