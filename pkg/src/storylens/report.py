"""Batch report building: JSON/CSV analytics dumps plus rendered figures."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analytics import (
    CandidatePair,
    InteractionEdge,
    TimelineRow,
    WordZoneEntry,
    bin_sentence_ranges,
    candidate_pairs,
    co_mention_counts,
    subject_label,
    timeline,
    word_zone,
)
from .errors import NoEligibleSubjects
from .incremental import AnalysisSnapshot
from .project import Project
from .registry import CharacterRegistry, GroupKey


def subject_to_json(subject, registry: CharacterRegistry) -> dict:
    if isinstance(subject, GroupKey):
        return {
            "type": "group",
            "selections": subject.to_dict(),
            "label": subject.label(registry.schema),
        }
    return {"type": "character", "id": subject, "label": registry.display_name(subject)}


def timeline_row_json(row: TimelineRow, registry) -> dict:
    return {
        "subject": subject_to_json(row.subject, registry),
        "label": row.label,
        "total_mentions": row.total_mentions,
        "tiles": [[b, c] for b, c in row.tiles],
        "sort_rank": row.sort_rank,
    }


def edge_json(edge: InteractionEdge, registry) -> dict:
    return {
        "a": subject_to_json(edge.a, registry),
        "b": subject_to_json(edge.b, registry),
        "count": edge.count,
    }


def word_zone_entry_json(entry: WordZoneEntry, registry) -> dict:
    return {
        "subject": subject_to_json(entry.subject, registry),
        "word": entry.word,
        "pos": entry.pos_class.value,
        "weight": entry.weight,
    }


def pair_json(pair: CandidatePair, registry) -> dict:
    return {
        "a": subject_to_json(pair.a, registry),
        "b": subject_to_json(pair.b, registry),
        "distance": pair.distance,
    }


def global_edges(snapshot, registry, min_count: int) -> list[InteractionEdge]:
    """All co-mention edges at or above the threshold, strongest first."""
    counts = co_mention_counts(snapshot, registry)
    edges = [
        InteractionEdge(a, b, count)
        for (a, b), count in counts.items()
        if count >= min_count
    ]
    edges.sort(key=lambda e: (-e.count, subject_label(e.a, registry), subject_label(e.b, registry)))
    return edges


def build_report(
    project: Project,
    snapshot: AnalysisSnapshot,
    embeddings=None,
) -> dict:
    """Snapshot plus all four analytics as one JSON-serializable document."""
    registry = project.registry
    settings = project.settings
    rows = timeline(
        snapshot,
        registry,
        mode="characters",
        order=settings.sort_order,
        aggregate=settings.aggregate_mode,
    )
    edges = global_edges(snapshot, registry, settings.min_edge_count)
    zone_subjects = [row.subject for row in rows]
    zones = word_zone(snapshot, registry, zone_subjects, "BOTH", settings.word_zone_k)
    pairs: list[CandidatePair] = []
    if embeddings is not None and zone_subjects:
        try:
            pairs = candidate_pairs(
                snapshot, registry, embeddings, zone_subjects, settings.top_n_pairs
            )
        except NoEligibleSubjects:
            pairs = []

    return {
        "title": project.title,
        "snapshot_version": snapshot.snapshot_version,
        "S": snapshot.S,
        "total_mentions": snapshot.total_mentions(),
        "characters": [r.to_dict() for r in registry.live_records()],
        "timeline": {
            "aggregate": settings.aggregate_mode,
            "bins": [[a, b] for a, b in bin_sentence_ranges(snapshot.S, settings.aggregate_mode)],
            "rows": [timeline_row_json(r, registry) for r in rows],
        },
        "impact": {
            "min_count": settings.min_edge_count,
            "edges": [edge_json(e, registry) for e in edges],
        },
        "word_zones": [word_zone_entry_json(z, registry) for z in zones],
        "candidate_pairs": [pair_json(p, registry) for p in pairs],
    }


# -- delimited output ---------------------------------------------------------


def write_csv_reports(report: dict, out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name: str, header: list[str], rows: list[list]) -> None:
        path = out_dir / name
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        written.append(path)

    emit(
        "characters.csv",
        ["id", "name", "aliases", "demographics", "manually_added"],
        [
            [
                c["id"],
                c["canonical_name"],
                "; ".join(c["aliases"]),
                "; ".join(f"{k}={v}" for k, v in c["demographics"].items()),
                c["manually_added"],
            ]
            for c in report["characters"]
        ],
    )
    emit(
        "timeline.csv",
        ["label", "total_mentions", "bin", "count"],
        [
            [row["label"], row["total_mentions"], b, c]
            for row in report["timeline"]["rows"]
            for b, c in row["tiles"]
        ],
    )
    emit(
        "impact.csv",
        ["a", "b", "count"],
        [[e["a"]["label"], e["b"]["label"], e["count"]] for e in report["impact"]["edges"]],
    )
    emit(
        "word_zones.csv",
        ["subject", "word", "pos", "weight"],
        [
            [z["subject"]["label"], z["word"], z["pos"], f"{z['weight']:.9f}"]
            for z in report["word_zones"]
        ],
    )
    emit(
        "candidate_pairs.csv",
        ["a", "b", "distance"],
        [
            [p["a"]["label"], p["b"]["label"], f"{p['distance']:.9f}"]
            for p in report["candidate_pairs"]
        ],
    )
    return written


def write_json_report(report: dict, path: str | Path) -> Path:
    path = Path(path)
    if path.parent:
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(report, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    return path


# -- figures ------------------------------------------------------------------


def render_figures(report: dict, out_dir: str | Path) -> list[Path]:
    """Render timeline, impact-graph, and word-zone figures as PNG files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    written.append(_timeline_figure(report, out_dir / "timeline.png"))
    written.append(_impact_figure(report, out_dir / "impact.png"))
    written.append(_word_zone_figure(report, out_dir / "word_zones.png"))
    return [p for p in written if p is not None]


def _timeline_figure(report: dict, path: Path) -> Path | None:
    rows = report["timeline"]["rows"]
    bins = report["timeline"]["bins"]
    if not rows or not bins:
        return None
    n_bins = len(bins)
    fig, (ax_tot, ax_tiles) = plt.subplots(
        1,
        2,
        figsize=(11, max(2.0, 0.45 * len(rows) + 1)),
        gridspec_kw={"width_ratios": [1, 5]},
        sharey=True,
    )
    labels = [r["label"] for r in rows]
    y = np.arange(len(rows))
    ax_tot.barh(y, [r["total_mentions"] for r in rows], color="#4878a8")
    ax_tot.set_yticks(y, labels)
    ax_tot.invert_xaxis()
    ax_tot.set_xlabel("total mentions")
    peak = max((c for r in rows for _, c in r["tiles"]), default=1)
    for yi, row in enumerate(rows):
        for b, count in row["tiles"]:
            ax_tiles.add_patch(
                plt.Rectangle(
                    (b, yi - 0.4), 1, 0.8,
                    color="#356635", alpha=0.25 + 0.75 * (count / peak),
                    linewidth=0,
                )
            )
    ax_tiles.set_xlim(0, n_bins)
    ax_tiles.set_ylim(-0.6, len(rows) - 0.4)
    ax_tiles.invert_yaxis()
    ax_tot.invert_yaxis()
    ax_tiles.set_xlabel("passage" if n_bins < report["S"] else "sentence")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def _impact_figure(report: dict, path: Path) -> Path | None:
    edges = report["impact"]["edges"]
    if not edges:
        return None
    names = sorted({e["a"]["label"] for e in edges} | {e["b"]["label"] for e in edges})
    angle = {n: 2 * np.pi * i / len(names) for i, n in enumerate(names)}
    pos = {n: (np.cos(a), np.sin(a)) for n, a in angle.items()}
    peak = max(e["count"] for e in edges)
    fig, ax = plt.subplots(figsize=(6, 6))
    for e in edges:
        (x1, y1), (x2, y2) = pos[e["a"]["label"]], pos[e["b"]["label"]]
        ax.plot([x1, x2], [y1, y2], color="#888", linewidth=0.5 + 3.5 * e["count"] / peak, zorder=1)
    for n, (x, y) in pos.items():
        ax.scatter([x], [y], s=350, color="#4878a8", zorder=2)
        ax.annotate(n, (x, y), ha="center", va="center", fontsize=7, zorder=3)
    ax.set_axis_off()
    ax.set_title(f"co-mentions (>= {report['impact']['min_count']} shared sentences)")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def _word_zone_figure(report: dict, path: Path) -> Path | None:
    zones = report["word_zones"]
    if not zones:
        return None
    by_subject: dict[str, list] = {}
    for z in zones:
        by_subject.setdefault(z["subject"]["label"], []).append(z)
    subjects = list(by_subject)[:9]
    cols = min(3, len(subjects))
    rows_n = -(-len(subjects) // cols)
    fig, axes = plt.subplots(rows_n, cols, figsize=(4 * cols, 2.6 * rows_n), squeeze=False)
    for ax in axes.flat:
        ax.set_visible(False)
    for i, name in enumerate(subjects):
        ax = axes[i // cols][i % cols]
        ax.set_visible(True)
        entries = by_subject[name]
        y = np.arange(len(entries))
        ax.barh(y, [e["weight"] for e in entries], color="#6a5b8c")
        ax.set_yticks(y, [f"{e['word']} ({e['pos'].lower()})" for e in entries], fontsize=7)
        ax.invert_yaxis()
        ax.set_title(name, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
