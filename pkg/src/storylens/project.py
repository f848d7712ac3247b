"""Single-file, versioned, human-diffable project persistence."""

from __future__ import annotations

import json
import os
import tempfile
import uuid
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .errors import CorruptFile, UnsupportedVersion
from .registry import CharacterRegistry

FORMAT_VERSION = 1

AGGREGATE_MODES = ("AUTO", "OFF")
SORT_ORDERS = ("ASC", "DESC")


@dataclass
class Settings:
    aggregate_mode: str = "AUTO"
    sort_order: str = "DESC"
    min_edge_count: int = 5
    top_n_pairs: int = 10
    word_zone_k: int = 10

    def validate(self) -> None:
        if self.aggregate_mode not in AGGREGATE_MODES:
            raise ValueError(f"settings.aggregate_mode: {self.aggregate_mode!r}")
        if self.sort_order not in SORT_ORDERS:
            raise ValueError(f"settings.sort_order: {self.sort_order!r}")
        for name in ("min_edge_count", "top_n_pairs", "word_zone_k"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"settings.{name}: expected positive integer")


@dataclass
class Project:
    id: str
    title: str
    document: str = ""
    registry: CharacterRegistry = field(default_factory=CharacterRegistry)
    settings: Settings = field(default_factory=Settings)
    format_version: int = FORMAT_VERSION

    @staticmethod
    def new(title: str = "Untitled", document: str = "") -> "Project":
        return Project(id=uuid.uuid4().hex[:12], title=title, document=document)

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "id": self.id,
            "title": self.title,
            "document": self.document,
            "registry": self.registry.to_dict(),
            "settings": asdict(self.settings),
        }


def save_project(project: Project, path: str | Path) -> None:
    """Write the project atomically (write temp file, then replace)."""
    path = Path(path)
    payload = json.dumps(project.to_dict(), indent=2, ensure_ascii=False, sort_keys=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_project(path: str | Path) -> Project:
    """Parse and validate a project file; never yields a partial project."""
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CorruptFile(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CorruptFile(f"invalid JSON: {exc}", field="$") from exc
    return project_from_dict(data)


def project_from_dict(data: dict) -> Project:
    if not isinstance(data, dict):
        raise CorruptFile("expected top-level object", field="$")
    version = data.get("format_version")
    if not isinstance(version, int):
        raise CorruptFile("missing format_version", field="format_version")
    if version > FORMAT_VERSION:
        raise UnsupportedVersion(f"format_version {version} > {FORMAT_VERSION}")

    for key, kind in (("id", str), ("title", str), ("document", str)):
        if not isinstance(data.get(key), kind):
            raise CorruptFile(f"expected {kind.__name__}", field=key)
    try:
        registry = CharacterRegistry.from_dict(data.get("registry", {}))
    except ValueError as exc:
        raise CorruptFile(str(exc), field=str(exc).split(":")[0]) from exc

    settings_data = data.get("settings", {})
    if not isinstance(settings_data, dict):
        raise CorruptFile("expected object", field="settings")
    known = {f for f in Settings.__dataclass_fields__}
    settings = Settings(**{k: v for k, v in settings_data.items() if k in known})
    try:
        settings.validate()
    except ValueError as exc:
        raise CorruptFile(str(exc), field=str(exc).split(":")[0]) from exc

    return Project(
        id=data["id"],
        title=data["title"],
        document=data["document"],
        registry=registry,
        settings=settings,
        format_version=version,
    )
