"""One-year window mining: lineages, per-class churn, stability outcomes.

The one-to-one mapping assumption governs everything here: renames/moves keep
a lineage tracked (same evolving class); split and merge refactorings break
the mapping and exclude the lineage; deletion keeps accumulated outcomes with
a flag.  All line accounting is logical (blank/comment lines removed before
diffing), so whitespace- or comment-only commits change nothing.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from difflib import SequenceMatcher
from pathlib import Path

from ..lexer import logical_lines
from ..model import ArtifactId, Diagnostic, SourceCorpus
from .gitio import ChainEntry, diff_name_status, first_parent_chain, show_blob

DEFAULT_WINDOW_DAYS = 365
DEFAULT_RENAME_THRESHOLD = 0.6
DEFAULT_SPLIT_THRESHOLD = 0.3

TRACKED = "tracked"
EXCLUDED_SPLIT = "excluded_split"
EXCLUDED_MERGE = "excluded_merge"
DELETED = "deleted"


class MiningConfigError(RuntimeError):
    pass


@dataclass(frozen=True)
class ObservationWindow:
    snapshot: str
    start: int  # snapshot committer timestamp
    end: int  # start + window length
    branch: str


def make_window(repo: str | Path, snapshot: str, branch: str, window_days: int = DEFAULT_WINDOW_DAYS) -> ObservationWindow:
    chain = first_parent_chain(repo, branch)
    entry = next((e for e in chain if e.commit == snapshot), None)
    if entry is None:
        raise MiningConfigError(
            f"snapshot {snapshot} is not on the first-parent chain of branch {branch!r}"
        )
    return ObservationWindow(snapshot, entry.timestamp, entry.timestamp + window_days * 86400, branch)


@dataclass
class CommitRecord:
    id: str
    timestamp: int
    parent_count: int
    first_parent: str
    files: list[tuple[str, str, int, int]] = field(default_factory=list)  # status, path, added, deleted


@dataclass
class ClassLineage:
    focal: ArtifactId
    timeline: list[tuple[str, str]]  # (commit, path); "" = snapshot
    status: str = TRACKED

    @property
    def current_path(self) -> str:
        return self.timeline[-1][1]


@dataclass(frozen=True)
class StabilityOutcome:
    focal: ArtifactId
    chf: int
    chs: int
    status: str


def enumerate_window_commits(repo: str | Path, window: ObservationWindow) -> list[CommitRecord]:
    """First-parent commits in (start, end], oldest first, merges included."""
    chain = first_parent_chain(repo, window.branch)
    idx = next((i for i, e in enumerate(chain) if e.commit == window.snapshot), None)
    if idx is None:
        raise MiningConfigError(
            f"snapshot {window.snapshot} is not on the first-parent chain of branch {window.branch!r}"
        )
    after: list[ChainEntry] = list(reversed(chain[:idx]))
    out = []
    for e in after:
        if window.start < e.timestamp <= window.end:
            parent = e.parents[0] if e.parents else ""
            out.append(CommitRecord(e.commit, e.timestamp, len(e.parents), parent))
    return out


def _matched(a: list[str], b: list[str]) -> int:
    sm = SequenceMatcher(a=a, b=b, autojunk=False)
    return sum(block.size for block in sm.get_matching_blocks())


def _line_churn(before: list[str], after: list[str]) -> tuple[int, int]:
    sm = SequenceMatcher(a=before, b=after, autojunk=False)
    added = deleted = 0
    for tag, i1, i2, j1, j2 in sm.get_opcodes():
        if tag in ("replace", "delete"):
            deleted += i2 - i1
        if tag in ("replace", "insert"):
            added += j2 - j1
    return added, deleted


@dataclass
class MiningResult:
    window: ObservationWindow
    commits: list[CommitRecord]
    lineages: dict[str, ClassLineage]  # focal qualified name -> lineage
    churn_by_class: dict[str, list[tuple[str, int, int]]]  # qname -> [(commit, added, deleted)]
    system_churn: int
    diagnostics: list[Diagnostic] = field(default_factory=list)


def mine_window(
    repo: str | Path,
    window: ObservationWindow,
    corpus: SourceCorpus,
    rename_threshold: float = DEFAULT_RENAME_THRESHOLD,
    split_threshold: float = DEFAULT_SPLIT_THRESHOLD,
) -> MiningResult:
    """Walk the window once, maintaining lineages and attributing churn."""
    commits = enumerate_window_commits(repo, window)
    lineages: dict[str, ClassLineage] = {}
    path_to_class: dict[str, str] = {}
    for rel, qname in corpus.primary_type_of_file.items():
        decl = corpus.type_decl(qname)
        if decl.is_interface:
            continue
        lineages[qname] = ClassLineage(decl.id, [("", rel)])
        path_to_class[rel] = qname
    churn_by_class: dict[str, list[tuple[str, int, int]]] = {q: [] for q in lineages}
    system_churn = 0
    diagnostics: list[Diagnostic] = []

    def lines_at(commit: str, path: str) -> list[str]:
        text = show_blob(repo, commit, path)
        if text is None:
            diagnostics.append(Diagnostic(path, f"unreadable blob at {commit[:12]}"))
            return []
        return logical_lines(text)

    for rec in commits:
        changes = [(s, p) for s, p in diff_name_status(repo, rec.first_parent, rec.id) if p.endswith(".java")]
        adds = sorted(p for s, p in changes if s == "A")
        dels = sorted(p for s, p in changes if s == "D")
        mods = sorted(p for s, p in changes if s == "M")

        before_cache: dict[str, list[str]] = {}
        after_cache: dict[str, list[str]] = {}
        for p in dels + mods:
            before_cache[p] = lines_at(rec.first_parent, p)
        for p in adds + mods:
            after_cache[p] = lines_at(rec.id, p)

        for status, p in changes:
            b = before_cache.get(p, [])
            a = after_cache.get(p, [])
            add_n, del_n = _line_churn(b, a)
            system_churn += add_n + del_n
            rec.files.append((status, p, add_n, del_n))

        tracked_dels = [p for p in dels if p in path_to_class]
        tracked_mods = [p for p in mods if p in path_to_class]

        # split: a tracked file's lines continue into >= 2 successor files
        split_now: set[str] = set()
        for p in tracked_dels + tracked_mods:
            before = before_cache[p]
            if not before:
                continue
            successors = list(adds)
            if p in mods:
                successors.append(p)
            continuing = 0
            for s in successors:
                frac = _matched(before, after_cache[s]) / len(before)
                if frac >= split_threshold:
                    continuing += 1
            if continuing >= 2:
                split_now.add(p)

        # merge: >= 2 tracked sources each contribute >= threshold of one target
        merge_now: set[str] = set()
        for target in adds + tracked_mods:
            after = after_cache[target]
            if not after:
                continue
            contributors = []
            for src in tracked_dels + tracked_mods:
                if src in split_now:
                    continue
                frac = _matched(before_cache[src], after) / len(after)
                if frac >= split_threshold:
                    contributors.append(src)
            if len(contributors) >= 2:
                merge_now.update(contributors)

        for p in split_now:
            qname = path_to_class.pop(p)
            lineages[qname].status = EXCLUDED_SPLIT
        for p in merge_now - split_now:
            if p in path_to_class:
                qname = path_to_class.pop(p)
                lineages[qname].status = EXCLUDED_MERGE

        # renames: greedy best-match pairing of remaining deleted/added files
        remaining_dels = [p for p in tracked_dels if p in path_to_class]
        consumed_adds: set[str] = set()
        pairs = []
        for d in remaining_dels:
            before = before_cache[d]
            if not before:
                continue
            for a in adds:
                sim = _matched(before, after_cache[a]) / max(len(before), len(after_cache[a]), 1)
                if sim >= rename_threshold:
                    pairs.append((-sim, d, a))
        pairs.sort()
        renamed: dict[str, str] = {}
        for _negsim, d, a in pairs:
            if d in renamed or a in consumed_adds:
                continue
            renamed[d] = a
            consumed_adds.add(a)

        for d, a in sorted(renamed.items()):
            qname = path_to_class.pop(d)
            path_to_class[a] = qname
            lineages[qname].timeline.append((rec.id, a))
            add_n, del_n = _line_churn(before_cache[d], after_cache[a])
            if add_n + del_n > 0:
                churn_by_class[qname].append((rec.id, add_n, del_n))

        for d in remaining_dels:
            if d in renamed or d not in path_to_class:
                continue
            qname = path_to_class.pop(d)
            lineages[qname].status = DELETED  # deleting commit adds no churn

        for p in tracked_mods:
            if p not in path_to_class:
                continue
            qname = path_to_class[p]
            add_n, del_n = _line_churn(before_cache[p], after_cache[p])
            if add_n + del_n > 0:
                churn_by_class[qname].append((rec.id, add_n, del_n))

    return MiningResult(window, commits, lineages, churn_by_class, system_churn, diagnostics)


def class_lineage(
    repo: str | Path,
    window: ObservationWindow,
    corpus: SourceCorpus,
    rename_threshold: float = DEFAULT_RENAME_THRESHOLD,
    split_threshold: float = DEFAULT_SPLIT_THRESHOLD,
) -> dict[str, ClassLineage]:
    return mine_window(repo, window, corpus, rename_threshold, split_threshold).lineages


def aggregate_stability(result: MiningResult, include_deleted: bool = True) -> list[StabilityOutcome]:
    """ChF = touching commits, ChS = total logical added+deleted; excluded
    lineages produce no outcome row."""
    out = []
    for qname in sorted(result.lineages):
        lin = result.lineages[qname]
        if lin.status in (EXCLUDED_SPLIT, EXCLUDED_MERGE):
            continue
        if lin.status == DELETED and not include_deleted:
            continue
        events = result.churn_by_class.get(qname, [])
        chf = len(events)
        chs = sum(a + d for _, a, d in events)
        out.append(StabilityOutcome(lin.focal, chf, chs, lin.status))
    return out


ACTIVITY_HEADER = ["measure", "min", "max", "median", "mean", "sd"]


def activity_summary(per_project: list[dict]) -> list[list]:
    """Descriptive statistics of window activity across projects.

    ``per_project`` rows carry ``window_commits`` and ``system_churn``.
    Population standard deviation (a single project has sd 0).
    """
    rows = []
    for measure, key in (("window_commits", "window_commits"), ("system_churn", "system_churn")):
        values = [p[key] for p in per_project]
        if not values:
            continue
        rows.append([
            measure,
            min(values),
            max(values),
            statistics.median(values),
            statistics.fmean(values),
            statistics.pstdev(values),
        ])
    return rows
