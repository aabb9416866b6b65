import json
from pathlib import Path

import pytest

from smellstab.cli import main as cli_main
from smellstab.io_utils import read_csv, write_csv
from smellstab.pipeline import (
    DATASET_HEADER,
    PipelineConfig,
    PipelineIntegrityError,
    export_dataset,
    run_pipeline,
)

from conftest import EPOCH, GitRepo

DAY = 86400

PROV1 = "public class Prov1 {\n" + "".join(
    f"    public int {c};\n" for c in "abcdef") + "}\n"
ENVY = (
    "public class Envy {\n"
    "    int crave(Prov1 p) { return p.a + p.b + p.c + p.d + p.e + p.f; }\n"
    "}\n"
)
ENVY_V1 = (
    "public class Envy {\n"
    "    int extra;\n"
    "    int crave(Prov1 p) { return p.a + p.b + p.c + p.d + p.e + p.f; }\n"
    "}\n"
)
QUIET_V0 = "public class Quiet {\n    int q;\n}\n"
QUIET_V1 = "public class Quiet {\n    int q;\n    int r;\n    int s;\n}\n"
SHIFT = "public class Shift {\n    int s;\n    void pull(Prov1 p) { s = p.a; }\n}\n"
ALPHA_V0 = "public class Alpha {\n    int a;\n}\n"
ALPHA_V1 = "public class Alpha {\n    int a;\n    int b;\n}\n"
BETA = "public class Beta {\n    int b;\n}\n"


@pytest.fixture(scope="module")
def fixture_projects(tmp_path_factory):
    base = tmp_path_factory.mktemp("repos")
    one = GitRepo(base / "one")
    one.write("Prov1.java", PROV1)
    one.write("Envy.java", ENVY)
    one.write("Quiet.java", QUIET_V0)
    one.write("Shift.java", SHIFT)
    snap_one = one.commit_all("snapshot", EPOCH)
    one.write("Quiet.java", QUIET_V1)
    one.commit_all("grow quiet", EPOCH + 5 * DAY)
    one.write("Envy.java", ENVY_V1)
    one.commit_all("extend envy", EPOCH + 9 * DAY)
    one.write("Quiet.java", QUIET_V1 + "// trailing\n")
    one.commit_all("outside window", EPOCH + 400 * DAY)

    two = GitRepo(base / "two")
    two.write("Alpha.java", ALPHA_V0)
    two.write("Beta.java", BETA)
    snap_two = two.commit_all("snapshot", EPOCH)
    two.write("Alpha.java", ALPHA_V1)
    two.commit_all("touch alpha", EPOCH + 3 * DAY)
    return {
        "one": (one, snap_one),
        "two": (two, snap_two),
    }


def _manifest_line(repo_id, repo: GitRepo, snapshot: str, **overrides):
    rec = {
        "repo": repo_id, "stars": 500, "forks": 200, "contributors": 25,
        "java_fraction": 0.95, "window_commits": 60, "education_flag": False,
        "clone_path": str(repo.path), "snapshot": snapshot, "branch": "main",
    }
    rec.update(overrides)
    return json.dumps(rec)


def _write_manifest(path: Path, fixture_projects, extra_lines=()) -> Path:
    one, snap_one = fixture_projects["one"]
    two, snap_two = fixture_projects["two"]
    lines = [
        _manifest_line("fix/one", one, snap_one),
        _manifest_line("fix/two", two, snap_two),
        *extra_lines,
    ]
    path.write_text("\n".join(lines) + "\n")
    return path


def _run(tmp_path, fixture_projects, name="out", extra_lines=()):
    manifest = _write_manifest(tmp_path / f"manifest_{name}.jsonl", fixture_projects, extra_lines)
    config = PipelineConfig(manifest=str(manifest), output_dir=str(tmp_path / name), seed=7)
    outcome = run_pipeline(config)
    return config, outcome


def test_end_to_end_dataset_and_results(tmp_path, fixture_projects):
    config, outcome = _run(tmp_path, fixture_projects)
    assert sorted(outcome.accepted) == ["fix/one", "fix/two"]
    header, rows = read_csv(Path(config.output_dir) / "dataset.csv")
    assert header == DATASET_HEADER
    by_class = {(r["project"], r["class"]): r for r in rows}
    assert len(by_class) == 6
    envy = by_class[("fix/one", "Envy")]
    assert envy["IsSmelly"] == "true"
    assert envy["#SmellFoc"] == "1"
    assert envy["VarSmellFoc"] == "1"
    assert envy["HasSmellEff"] == "true"
    assert envy["HasEffCoup"] == "true"
    assert envy["HasEffInt"] == "true"
    assert envy["#EffSmellInt"] == "1"
    assert envy["EffIntInten"] == "7"  # parameter edge + six field-use edges
    assert envy["#EffNei"] == "1"
    assert (envy["ChF"], envy["ChS"]) == ("1", "1")
    prov = by_class[("fix/one", "Prov1")]
    assert prov["IsSmelly"] == "true"  # Data Class
    assert prov["#EffNei"] == "0"
    shift = by_class[("fix/one", "Shift")]
    assert shift["IsSmelly"] == "false"
    assert shift["HasSmellEff"] == "true"
    quiet = by_class[("fix/one", "Quiet")]
    assert (quiet["ChF"], quiet["ChS"]) == ("1", "2")
    _, results = read_csv(Path(config.output_dir) / "results.csv")
    assert len(results) == 34
    assert all(r["accepted"] in ("true", "false") for r in results)
    activity_path = Path(config.output_dir) / "activity.csv"
    _, activity = read_csv(activity_path)
    commits_row = next(r for r in activity if r["measure"] == "window_commits")
    assert commits_row["min"] == "1" and commits_row["max"] == "2"

    analyze_dir = Path(config.output_dir) / "projects" / "fix__one" / "analyze"
    assert (analyze_dir / "corpus.json").exists()
    assert (analyze_dir / "edges.csv").exists()
    mh, mrows = read_csv(analyze_dir / "metrics_method.csv")
    assert mh[:5] == ["project", "method", "signature", "enclosing_class", "loc"]
    crave = next(r for r in mrows if r["method"] == "Envy.crave")
    assert crave["atfd_m"] == "6" and crave["fdp"] == "1"
    _, smell_rows = read_csv(analyze_dir / "smells.csv")
    listed = {(r["smell"], r["host"]) for r in smell_rows}
    assert listed == {("FE", "Envy.crave(Prov1)"), ("DC", "Prov1")}
    meta = json.loads((analyze_dir / "smells.csv.meta.json").read_text())
    assert meta["per_strategy_counts"]["FE"] == 1
    assert meta["config"]["thresholds"]["FEW"] == 5


def test_rerun_is_byte_identical(tmp_path, fixture_projects):
    config_a, _ = _run(tmp_path, fixture_projects, name="run_a")
    config_b, _ = _run(tmp_path, fixture_projects, name="run_b")
    for name in ("dataset.csv", "results.csv"):
        a = (Path(config_a.output_dir) / name).read_bytes()
        b = (Path(config_b.output_dir) / name).read_bytes()
        assert a == b, name


def test_cached_rerun_skips_and_matches(tmp_path, fixture_projects):
    config, _ = _run(tmp_path, fixture_projects, name="cached")
    first = (Path(config.output_dir) / "dataset.csv").read_bytes()
    outcome = run_pipeline(config)  # second run over the same output dir
    assert not outcome.quarantined
    assert (Path(config.output_dir) / "dataset.csv").read_bytes() == first


def test_quarantine_isolates_broken_project(tmp_path, fixture_projects):
    broken = json.dumps({
        "repo": "fix/broken", "stars": 900, "forks": 200, "contributors": 25,
        "java_fraction": 0.95, "window_commits": 60, "education_flag": False,
        "clone_path": str(tmp_path / "nowhere"), "snapshot": "f" * 40, "branch": "main",
    })
    config, outcome = _run(tmp_path, fixture_projects, name="quar", extra_lines=[broken])
    assert set(outcome.quarantined) == {"fix/broken"}
    assert sorted(outcome.accepted) == ["fix/one", "fix/two"]
    _, rows = read_csv(Path(config.output_dir) / "dataset.csv")
    assert len(rows) == 6
    doc = json.loads((Path(config.output_dir) / "quarantine.json").read_text())
    assert "fix/broken" in doc["quarantined"]


def test_no_author_identity_leaks_into_outputs(tmp_path, fixture_projects):
    config, _ = _run(tmp_path, fixture_projects, name="anon")
    needles = (b"Fixture Committer", b"fixture.committer")
    for path in sorted(Path(config.output_dir).rglob("*")):
        if path.is_file() and path.suffix in (".csv", ".json"):
            blob = path.read_bytes()
            for needle in needles:
                assert needle not in blob, path


def test_dataset_roundtrip_lossless(tmp_path, fixture_projects):
    config, _ = _run(tmp_path, fixture_projects, name="trip")
    src = Path(config.output_dir) / "dataset.csv"
    header, rows = read_csv(src)
    copy = Path(config.output_dir) / "dataset_copy.csv"
    write_csv(copy, header, [[r[c] for c in header] for r in rows])
    assert copy.read_bytes() == src.read_bytes()


def test_duplicate_key_is_fatal(tmp_path):
    config = PipelineConfig(output_dir=str(tmp_path / "dup"))
    Path(config.output_dir).mkdir(parents=True, exist_ok=True)
    row = ["p", "C"] + ["0"] * (len(DATASET_HEADER) - 2)
    with pytest.raises(PipelineIntegrityError):
        export_dataset([row, list(row)], config)


def test_empty_project_header_only_dataset(tmp_path, git_repo_factory):
    repo = git_repo_factory()
    repo.write("README.md", "no java here\n")
    snap = repo.commit_all("snapshot", EPOCH)
    manifest = tmp_path / "empty.jsonl"
    manifest.write_text(json.dumps({
        "repo": "fix/empty", "stars": 1, "forks": 200, "contributors": 25,
        "java_fraction": 0.95, "window_commits": 60, "education_flag": False,
        "clone_path": str(repo.path), "snapshot": snap, "branch": "main",
    }) + "\n")
    config = PipelineConfig(manifest=str(manifest), output_dir=str(tmp_path / "empty_out"))
    run_pipeline(config, stages=("analyze", "mine", "join"))
    content = (Path(config.output_dir) / "dataset.csv").read_text()
    assert content.splitlines() == [",".join(DATASET_HEADER)]


def test_cli_all_and_report(tmp_path, fixture_projects, capsys):
    manifest = _write_manifest(tmp_path / "cli_manifest.jsonl", fixture_projects)
    out_dir = tmp_path / "cli_out"
    cfg_path = tmp_path / "cli_config.json"
    cfg_path.write_text(json.dumps({
        "manifest": str(manifest), "output_dir": str(out_dir), "seed": 3,
    }))
    assert cli_main(["all", "--config", str(cfg_path)]) == 0
    assert cli_main(["report", "--config", str(cfg_path)]) == 0
    printed = capsys.readouterr().out
    assert "H1.1" in printed and "verdict" in printed
    assert (out_dir / "results.csv").exists()
    assert (out_dir / "fits.json").exists()
    assert (out_dir / "quantile_residuals.csv").exists()


def test_parallel_workers_identical_output(tmp_path, fixture_projects):
    manifest = _write_manifest(tmp_path / "workers_manifest.jsonl", fixture_projects)
    serial = PipelineConfig(manifest=str(manifest), output_dir=str(tmp_path / "w1"), workers=1)
    run_pipeline(serial)
    parallel = PipelineConfig(manifest=str(manifest), output_dir=str(tmp_path / "w2"), workers=3)
    run_pipeline(parallel)
    a = (Path(serial.output_dir) / "dataset.csv").read_bytes()
    b = (Path(parallel.output_dir) / "dataset.csv").read_bytes()
    assert a == b


def test_config_echo_replays(tmp_path, fixture_projects):
    config, _ = _run(tmp_path, fixture_projects, name="replay")
    echo_path = tmp_path / "echoed_config.json"
    echo_path.write_text(json.dumps(config.echo()))
    replayed = PipelineConfig.from_file(echo_path)
    assert replayed.config_hash() == config.config_hash()
    assert replayed.thresholds == config.thresholds


def test_cli_stage_sequence(tmp_path, fixture_projects, capsys):
    manifest = _write_manifest(tmp_path / "seq_manifest.jsonl", fixture_projects)
    out_dir = tmp_path / "seq_out"
    cfg_path = tmp_path / "seq_config.json"
    cfg_path.write_text(json.dumps({"manifest": str(manifest), "output_dir": str(out_dir)}))
    for command in ("analyze", "mine", "join", "stats"):
        assert cli_main([command, "--config", str(cfg_path)]) == 0
    assert (out_dir / "dataset.csv").exists()
    assert (out_dir / "results.csv").exists()


def test_cli_filter(tmp_path, fixture_projects, capsys):
    manifest = _write_manifest(tmp_path / "filter_manifest.jsonl", fixture_projects)
    out_dir = tmp_path / "filter_out"
    assert cli_main([
        "filter", "--manifest", str(manifest), "--output-dir", str(out_dir),
    ]) == 0
    doc = json.loads((out_dir / "selection.json").read_text())
    assert doc["accepted"] == ["fix/one", "fix/two"]
