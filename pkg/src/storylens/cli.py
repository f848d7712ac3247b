"""Command line interface: serve the API, analyze files, emit reports."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .analytics import load_embedding_file
from .entities import import_annotations
from .errors import StorylensError
from .incremental import Analyzer, analyze_with_gold
from .project import Project, load_project
from .registry import CharacterRegistry
from .report import build_report, render_figures, write_csv_reports, write_json_report

VALIDATION_EXIT = 2


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(VALIDATION_EXIT)


def _load_embeddings(path: str | None):
    if path is None:
        return None
    try:
        return load_embedding_file(path)
    except (OSError, ValueError) as exc:
        _fail(f"embeddings: {exc}")


def _load_registry_arg(path: str | None) -> CharacterRegistry:
    """Accept either a bare registry JSON document or a full project file."""
    if path is None:
        return CharacterRegistry()
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"registry: {exc}")
    if isinstance(data, dict) and "registry" in data:
        data = data["registry"]
    try:
        return CharacterRegistry.from_dict(data)
    except ValueError as exc:
        _fail(f"registry: {exc}")


def _read_gold(path: str) -> list[dict]:
    records = []
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    _fail(f"gold line {lineno}: {exc}")
    except OSError as exc:
        _fail(f"gold: {exc}")
    return records


@click.group()
def main():
    """Character, identity, and treatment analytics for fiction."""


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True, type=int)
@click.option("--data-dir", type=click.Path(file_okay=False), default=None,
              help="Directory for project files.", envvar="STORYLENS_DATA_DIR")
@click.option("--embeddings", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Word-vector file for candidate pairs.", envvar="STORYLENS_EMBEDDINGS")
def serve(host, port, data_dir, embeddings):
    """Run the HTTP API."""
    import uvicorn

    from .api import ProjectStore, create_app

    table = _load_embeddings(embeddings)
    app = create_app(ProjectStore(data_dir=data_dir, embeddings=table))
    uvicorn.run(app, host=host, port=port, log_level="info")


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--registry", "registry_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Registry or project JSON to analyze against.")
@click.option("--gold", "gold_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Gold annotation JSONL; bypasses the sieve.")
@click.option("--embeddings", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None,
              help="Write the full JSON report here (default: stdout).")
def analyze(file, registry_path, gold_path, embeddings, report_path):
    """Analyze a text file and emit the snapshot plus all analytics."""
    document = Path(file).read_text(encoding="utf-8")
    registry = _load_registry_arg(registry_path)
    table = _load_embeddings(embeddings)

    try:
        if gold_path is not None:
            gold = import_annotations(document, _read_gold(gold_path), registry)
            snapshot = analyze_with_gold(document, gold, registry)
        else:
            snapshot = Analyzer(registry).analyze(document)
    except StorylensError as exc:
        _fail(str(exc))

    project = Project.new(title=Path(file).stem, document=document)
    project.registry = registry
    report = build_report(project, snapshot, table)
    if report_path:
        write_json_report(report, report_path)
        click.echo(f"wrote {report_path}")
    else:
        click.echo(json.dumps(report, indent=2, ensure_ascii=False))


@main.command()
@click.option("--project", "project_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json",
              show_default=True)
@click.option("--out-dir", type=click.Path(file_okay=False), default="report",
              show_default=True)
@click.option("--figures/--no-figures", default=True, show_default=True,
              help="Render timeline/impact/word-zone PNGs next to the data.")
@click.option("--embeddings", type=click.Path(exists=True, dir_okay=False), default=None)
def report(project_path, fmt, out_dir, figures, embeddings):
    """Build the analytics report for a saved project."""
    try:
        project = load_project(project_path)
    except StorylensError as exc:
        _fail(str(exc))
    table = _load_embeddings(embeddings)
    snapshot = Analyzer(project.registry).analyze(project.document)
    data = build_report(project, snapshot, table)

    out = Path(out_dir)
    written = []
    if fmt == "json":
        written.append(write_json_report(data, out / "report.json"))
    else:
        written.extend(write_csv_reports(data, out))
    if figures:
        written.extend(render_figures(data, out))
    for path in written:
        click.echo(f"wrote {path}")


@main.group()
def embeddings():
    """Embedding table utilities."""


@embeddings.command("check")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def embeddings_check(file):
    """Validate a word-vector file (exit 2 on format errors)."""
    try:
        table = load_embedding_file(file)
    except (OSError, ValueError) as exc:
        _fail(str(exc))
    click.echo(f"ok: {len(table)} words, dimension {table.dimension}")


if __name__ == "__main__":
    main()
