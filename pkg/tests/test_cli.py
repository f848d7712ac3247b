import json

from click.testing import CliRunner

from storylens import Project, save_project
from storylens.cli import main
from storylens.incremental import Analyzer

from conftest import FIXTURES


def invoke(args):
    return CliRunner().invoke(main, args, catch_exceptions=False)


def test_analyze_empty_file(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    out = tmp_path / "report.json"
    result = invoke(["analyze", str(empty), "--report", str(out)])
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    assert report["S"] == 0
    assert report["timeline"]["rows"] == []
    assert report["impact"]["edges"] == []
    assert report["word_zones"] == []


def test_analyze_with_gold_matches_counts(tmp_path):
    out = tmp_path / "report.json"
    result = invoke(
        [
            "analyze",
            str(FIXTURES / "sleeping_beauty.txt"),
            "--gold",
            str(FIXTURES / "sleeping_beauty.gold.jsonl"),
            "--report",
            str(out),
        ]
    )
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    gold_lines = (FIXTURES / "sleeping_beauty.gold.jsonl").read_text().splitlines()
    assert report["total_mentions"] == len([l for l in gold_lines if l.strip()])
    assert report["timeline"]["rows"][0]["label"] == "Florimond"


def test_analyze_bad_gold_exits_2(tmp_path):
    gold = tmp_path / "bad.jsonl"
    gold.write_text('{"para_index": 40, "start": 0, "end": 2, "kind": "NAMED", "entity_key": "X"}\n')
    result = CliRunner().invoke(
        main, ["analyze", str(FIXTURES / "salon_excerpt.txt"), "--gold", str(gold)]
    )
    assert result.exit_code == 2


def test_embeddings_check_ok():
    result = invoke(["embeddings", "check", str(FIXTURES / "toy_embeddings.txt")])
    assert result.exit_code == 0
    assert "50 words" in result.output


def test_embeddings_check_ragged_exits_2(tmp_path):
    bad = tmp_path / "ragged.txt"
    bad.write_text("2 4\nalpha 1 2 3 4\nbeta 1 2 3\n")
    result = CliRunner().invoke(main, ["embeddings", "check", str(bad)])
    assert result.exit_code == 2
    assert "error" in result.output


def test_report_csv_and_figures(tmp_path, winter_pact):
    project = Project.new("Pact", document=winter_pact)
    Analyzer(project.registry).analyze(winter_pact)
    ppath = tmp_path / "pact.json"
    save_project(project, ppath)
    out_dir = tmp_path / "out"
    result = invoke(
        [
            "report",
            "--project",
            str(ppath),
            "--format",
            "csv",
            "--out-dir",
            str(out_dir),
            "--embeddings",
            str(FIXTURES / "toy_embeddings.txt"),
        ]
    )
    assert result.exit_code == 0, result.output
    for name in (
        "characters.csv",
        "timeline.csv",
        "impact.csv",
        "word_zones.csv",
        "candidate_pairs.csv",
        "timeline.png",
        "impact.png",
        "word_zones.png",
    ):
        assert (out_dir / name).exists(), name
    header = (out_dir / "timeline.csv").read_text().splitlines()[0]
    assert header == "label,total_mentions,bin,count"


def test_report_json(tmp_path, winter_pact):
    project = Project.new("Pact", document=winter_pact)
    ppath = tmp_path / "pact.json"
    save_project(project, ppath)
    out_dir = tmp_path / "out"
    result = invoke(
        ["report", "--project", str(ppath), "--format", "json", "--out-dir", str(out_dir), "--no-figures"]
    )
    assert result.exit_code == 0, result.output
    report = json.loads((out_dir / "report.json").read_text())
    assert report["title"] == "Pact"
    assert report["S"] > 0


def test_report_rejects_corrupt_project(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    result = CliRunner().invoke(main, ["report", "--project", str(bad)])
    assert result.exit_code == 2
