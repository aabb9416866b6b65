from .gitio import GitError, archive_snapshot, first_parent_chain, run_git, show_blob
from .miner import (
    DELETED,
    EXCLUDED_MERGE,
    EXCLUDED_SPLIT,
    TRACKED,
    ClassLineage,
    CommitRecord,
    MiningConfigError,
    MiningResult,
    ObservationWindow,
    StabilityOutcome,
    activity_summary,
    aggregate_stability,
    class_lineage,
    enumerate_window_commits,
    make_window,
    mine_window,
)

__all__ = [
    "GitError",
    "archive_snapshot",
    "first_parent_chain",
    "run_git",
    "show_blob",
    "DELETED",
    "EXCLUDED_MERGE",
    "EXCLUDED_SPLIT",
    "TRACKED",
    "ClassLineage",
    "CommitRecord",
    "MiningConfigError",
    "MiningResult",
    "ObservationWindow",
    "StabilityOutcome",
    "activity_summary",
    "aggregate_stability",
    "class_lineage",
    "enumerate_window_commits",
    "make_window",
    "mine_window",
]
