"""End-to-end orchestration: analyze, mine, join, fit, report.

Per-project stages are cached content-addressed by (snapshot, config hash)
and a project failure quarantines the project without stopping the run.
All outputs are deterministic byte-for-byte for a fixed config.
"""

from __future__ import annotations

import hashlib
import json
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__ as _version
from .corpus import ingest_corpus
from .graph import extract_dependencies
from .io_utils import read_csv, write_csv, write_json, write_meta
from .manifest import ProjectManifestEntry, filter_manifest, load_manifest
from .metrics import build_metrics_context, compute_class_metrics, compute_method_metrics
from .mining import (
    activity_summary,
    aggregate_stability,
    archive_snapshot,
    make_window,
    mine_window,
)
from .mining.miner import ACTIVITY_HEADER
from .neighborhood import OBSERVATION_HEADER, build_all_observations, observation_row
from .smells import ThresholdConfig, detect_smells_with_diagnostics, per_strategy_counts
from .stats.suite import (
    export_fits_json,
    export_quantile_residuals,
    export_results_csv,
    run_hypothesis_suite,
)

DATASET_HEADER = OBSERVATION_HEADER + ["ChF", "ChS", "lineage_status"]

METHOD_METRICS_HEADER = [
    "project", "method", "signature", "enclosing_class", "loc", "cyclo", "max_nesting",
    "noav", "atfd_m", "laa", "fdp", "cint", "cdisp", "cm", "cc",
]
CLASS_METRICS_HEADER = [
    "project", "class", "loc", "wmc", "tcc", "atfd_c", "woc", "nopa", "noam", "nom",
    "amw", "nprotm", "bur", "bovr", "nas", "pnas",
]
SMELLS_HEADER = ["smell", "level", "host", "enclosing_class"]


class PipelineIntegrityError(RuntimeError):
    pass


@dataclass
class PipelineConfig:
    manifest: str = ""
    output_dir: str = "out"
    thresholds: ThresholdConfig = field(default_factory=ThresholdConfig)
    window_days: int = 365
    rename_threshold: float = 0.6
    split_threshold: float = 0.3
    project_limit: int = 100
    include_deleted: bool = True
    path_excludes: tuple[str, ...] = ()
    workers: int = 1
    seed: int = 0

    def echo(self) -> dict:
        return {
            "tool_version": _version,
            "manifest": self.manifest,
            "output_dir": self.output_dir,
            "thresholds": self.thresholds.echo(),
            "window_days": self.window_days,
            "rename_threshold": self.rename_threshold,
            "split_threshold": self.split_threshold,
            "project_limit": self.project_limit,
            "include_deleted": self.include_deleted,
            "path_excludes": list(self.path_excludes),
            "workers": self.workers,
            "seed": self.seed,
        }

    def config_hash(self) -> str:
        echo = self.echo()
        echo.pop("workers")  # parallelism never changes results
        echo.pop("output_dir")
        return hashlib.sha256(json.dumps(echo, sort_keys=True).encode()).hexdigest()[:16]

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        """Load a config JSON; a config echo from a previous run is accepted."""
        doc = json.loads(Path(path).read_text())
        threshold_doc = {k: v for k, v in doc.get("thresholds", {}).items()
                         if k != "threshold_schema_version"}
        thresholds = ThresholdConfig(**threshold_doc)
        known = {
            "manifest", "output_dir", "window_days", "rename_threshold", "split_threshold",
            "project_limit", "include_deleted", "path_excludes", "workers", "seed",
        }
        kwargs = {k: v for k, v in doc.items() if k in known}
        if "path_excludes" in kwargs:
            kwargs["path_excludes"] = tuple(kwargs["path_excludes"])
        return cls(thresholds=thresholds, **kwargs)


def _safe_name(repo: str) -> str:
    return repo.replace("/", "__")


def _project_dir(config: PipelineConfig, entry: ProjectManifestEntry) -> Path:
    d = Path(config.output_dir) / "projects" / _safe_name(entry.repo)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _cache_valid(stage_dir: Path, key: str) -> bool:
    marker = stage_dir / "stage.json"
    if not marker.exists():
        return False
    try:
        return json.loads(marker.read_text()).get("key") == key
    except json.JSONDecodeError:
        return False


def _write_stage_marker(stage_dir: Path, key: str) -> None:
    write_json(stage_dir / "stage.json", {"key": key})


def analyze_project(entry: ProjectManifestEntry, config: PipelineConfig) -> Path:
    """Ingest, graph, smells, observations for one project; returns stage dir."""
    out = _project_dir(config, entry) / "analyze"
    key = f"{entry.snapshot}:{config.config_hash()}"
    if _cache_valid(out, key):
        return out
    out.mkdir(parents=True, exist_ok=True)
    with_tree = Path(config.output_dir) / "snapshots" / _safe_name(entry.repo)
    archive_snapshot(entry.clone_path, entry.snapshot, with_tree)
    corpus = ingest_corpus(with_tree, entry.snapshot, project=entry.repo,
                           path_excludes=config.path_excludes)
    (out / "corpus.json").write_text(corpus.to_json())
    graph, facts = extract_dependencies(corpus)
    graph.write_csv(out / "edges.csv")
    ctx = build_metrics_context(corpus, graph, facts)
    echo = config.echo()

    method_rows = []
    for t, m in corpus.iter_methods():
        if corpus.type_decl(corpus.enclosing_class(m.id).qualified_name).is_interface:
            continue
        mm = compute_method_metrics(ctx, m.id)
        method_rows.append([
            entry.repo, m.id.qualified_name, m.id.signature,
            corpus.enclosing_class(m.id).qualified_name,
            mm.loc, mm.cyclo, mm.max_nesting, mm.noav, mm.atfd_m, mm.laa, mm.fdp,
            mm.cint, mm.cdisp, mm.cm, mm.cc,
        ])
    method_rows.sort(key=lambda r: (r[1], r[2]))
    write_csv(out / "metrics_method.csv", METHOD_METRICS_HEADER, method_rows)
    write_meta(out / "metrics_method.csv", config_echo=echo)

    class_rows = []
    for decl in corpus.top_level_classes():
        cm = compute_class_metrics(ctx, decl.id)
        class_rows.append([
            entry.repo, decl.id.qualified_name, cm.loc, cm.wmc, cm.tcc, cm.atfd_c,
            cm.woc, cm.nopa, cm.noam, cm.nom, cm.amw, cm.nprotm, cm.bur, cm.bovr,
            cm.nas, cm.pnas,
        ])
    write_csv(out / "metrics_class.csv", CLASS_METRICS_HEADER, class_rows)
    write_meta(out / "metrics_class.csv", config_echo=echo)

    smells, smell_diags = detect_smells_with_diagnostics(
        corpus, graph, facts, config.thresholds, ctx)
    write_csv(out / "smells.csv", SMELLS_HEADER, [
        [s.smell.value, s.smell.level, str(s.host), s.enclosing.qualified_name] for s in smells
    ])
    write_meta(out / "smells.csv", config_echo=echo,
               extra={"per_strategy_counts": per_strategy_counts(smells),
                      "diagnostics": [f"{d.file}: {d.message}" for d in smell_diags]})

    observations = build_all_observations(corpus, graph, smells)
    write_csv(out / "observations.csv", OBSERVATION_HEADER,
              [observation_row(o) for o in observations])
    write_meta(out / "observations.csv", config_echo=echo)
    _write_stage_marker(out, key)
    return out


def mine_project(entry: ProjectManifestEntry, config: PipelineConfig) -> Path:
    """Window mining and stability outcomes for one project."""
    out = _project_dir(config, entry) / "mine"
    key = f"{entry.snapshot}:{config.window_days}:{config.rename_threshold}:{config.split_threshold}:{config.include_deleted}"
    if _cache_valid(out, key):
        return out
    out.mkdir(parents=True, exist_ok=True)
    with_tree = Path(config.output_dir) / "snapshots" / _safe_name(entry.repo)
    archive_snapshot(entry.clone_path, entry.snapshot, with_tree)
    corpus = ingest_corpus(with_tree, entry.snapshot, project=entry.repo,
                           path_excludes=config.path_excludes)
    window = make_window(entry.clone_path, entry.snapshot, entry.branch, config.window_days)
    result = mine_window(entry.clone_path, window, corpus,
                         config.rename_threshold, config.split_threshold)
    outcomes = aggregate_stability(result, include_deleted=config.include_deleted)
    write_csv(out / "outcomes.csv", ["project", "class", "ChF", "ChS", "lineage_status"], [
        [entry.repo, o.focal.qualified_name, o.chf, o.chs, o.status] for o in outcomes
    ])
    write_meta(out / "outcomes.csv", config_echo=config.echo(), extra={
        "window": {"snapshot": window.snapshot, "start": window.start, "end": window.end,
                   "branch": window.branch},
        "window_commits": len(result.commits),
        "system_churn": result.system_churn,
        "diagnostics": [f"{d.file}: {d.message}" for d in result.diagnostics],
    })
    _write_stage_marker(out, key)
    return out


def join_project(entry: ProjectManifestEntry, config: PipelineConfig) -> list[list]:
    """Inner-join observations with outcomes on (project, class)."""
    base = _project_dir(config, entry)
    _, obs_rows = read_csv(base / "analyze" / "observations.csv")
    _, out_rows = read_csv(base / "mine" / "outcomes.csv")
    outcomes: dict[tuple[str, str], dict] = {}
    for r in out_rows:
        key = (r["project"], r["class"])
        if key in outcomes:
            raise PipelineIntegrityError(f"duplicate outcome key {key}")
        outcomes[key] = r
    joined = []
    seen: set[tuple[str, str]] = set()
    for r in obs_rows:
        key = (r["project"], r["class"])
        if key in seen:
            raise PipelineIntegrityError(f"duplicate observation key {key}")
        seen.add(key)
        oc = outcomes.get(key)
        if oc is None:
            continue  # excluded or secondary lineage: no outcome row
        joined.append([r[c] for c in OBSERVATION_HEADER] + [oc["ChF"], oc["ChS"], oc["lineage_status"]])
    joined.sort(key=lambda row: (row[0], row[1]))
    return joined


def export_dataset(all_rows: list[list], config: PipelineConfig) -> Path:
    path = Path(config.output_dir) / "dataset.csv"
    keys = [(r[0], r[1]) for r in all_rows]
    if len(keys) != len(set(keys)):
        raise PipelineIntegrityError("duplicate (project, class) keys in dataset")
    write_csv(path, DATASET_HEADER, all_rows)
    write_meta(path, config_echo=config.echo())
    return path


def run_stats(config: PipelineConfig) -> None:
    dataset_path = Path(config.output_dir) / "dataset.csv"
    _, rows = read_csv(dataset_path)
    suite = run_hypothesis_suite(rows, seed=config.seed)
    out = Path(config.output_dir)
    export_results_csv(suite, out / "results.csv")
    write_meta(out / "results.csv", config_echo=config.echo())
    export_fits_json(suite, out / "fits.json", seed=config.seed, config_echo=config.echo())
    export_quantile_residuals(suite, rows, out / "quantile_residuals.csv", seed=config.seed)
    write_meta(out / "quantile_residuals.csv", config_echo=config.echo())


@dataclass
class PipelineOutcome:
    accepted: list[str]
    quarantined: dict[str, str]
    dataset_path: Path | None


def run_pipeline(config: PipelineConfig, stages: tuple[str, ...] = ("analyze", "mine", "join", "stats")) -> PipelineOutcome:
    records = load_manifest(config.manifest)
    accepted, rejections = filter_manifest(records, config.project_limit)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / "selection.json", {
        "accepted": [e.repo for e in accepted],
        "rejected": [{"repo": r.repo, "reason": r.reason} for r in rejections],
        "config": config.echo(),
    })
    quarantined: dict[str, str] = {}

    def per_project(entry: ProjectManifestEntry) -> None:
        if "analyze" in stages:
            analyze_project(entry, config)
        if "mine" in stages:
            mine_project(entry, config)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            futures = {pool.submit(per_project, e): e for e in accepted}
            for fut, entry in futures.items():
                try:
                    fut.result()
                except Exception:
                    quarantined[entry.repo] = traceback.format_exc(limit=4)
    else:
        for entry in accepted:
            try:
                per_project(entry)
            except Exception:
                quarantined[entry.repo] = traceback.format_exc(limit=4)

    healthy = [e for e in accepted if e.repo not in quarantined]
    dataset_path = None
    if "join" in stages:
        all_rows: list[list] = []
        activity = []
        for entry in sorted(healthy, key=lambda e: e.repo):
            try:
                all_rows.extend(join_project(entry, config))
                meta = json.loads((_project_dir(config, entry) / "mine" / "outcomes.csv.meta.json").read_text())
                activity.append({"project": entry.repo,
                                 "window_commits": meta["window_commits"],
                                 "system_churn": meta["system_churn"]})
            except Exception:
                quarantined[entry.repo] = traceback.format_exc(limit=4)
        healthy = [e for e in healthy if e.repo not in quarantined]
        dataset_path = export_dataset(all_rows, config)
        write_csv(out / "activity.csv", ACTIVITY_HEADER, activity_summary(activity))
        write_meta(out / "activity.csv", config_echo=config.echo())
    write_json(out / "quarantine.json", {"quarantined": quarantined})
    if "stats" in stages and dataset_path is not None:
        run_stats(config)
    return PipelineOutcome([e.repo for e in healthy], quarantined, dataset_path)
