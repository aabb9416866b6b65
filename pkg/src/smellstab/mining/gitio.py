"""Thin wrappers over git plumbing.

Only structural data is read (hashes, committer timestamps, parent counts,
paths, blobs).  Author names and emails are never requested, so they cannot
leak into any export.
"""

from __future__ import annotations

import subprocess
from dataclasses import dataclass
from pathlib import Path


class GitError(RuntimeError):
    pass


def run_git(repo: str | Path, *args: str, check: bool = True) -> str:
    proc = subprocess.run(
        ["git", "-C", str(repo), *args],
        capture_output=True,
    )
    if check and proc.returncode != 0:
        raise GitError(f"git {' '.join(args)} failed: {proc.stderr.decode(errors='replace').strip()}")
    return proc.stdout.decode(errors="replace")


@dataclass(frozen=True)
class ChainEntry:
    commit: str
    timestamp: int
    parents: tuple[str, ...]


def first_parent_chain(repo: str | Path, branch: str) -> list[ChainEntry]:
    """First-parent history of ``branch``, newest first."""
    out = run_git(repo, "log", "--first-parent", "--format=%H %ct %P", branch)
    entries = []
    for line in out.splitlines():
        parts = line.split()
        if not parts:
            continue
        entries.append(ChainEntry(parts[0], int(parts[1]), tuple(parts[2:])))
    return entries


def commit_timestamp(repo: str | Path, commit: str) -> int:
    return int(run_git(repo, "log", "-1", "--format=%ct", commit).strip())


def diff_name_status(repo: str | Path, parent: str, commit: str) -> list[tuple[str, str]]:
    """(status, path) pairs between two revisions, git's own rename detection off."""
    out = run_git(repo, "diff-tree", "-r", "--no-renames", "--name-status", parent, commit)
    changes = []
    for line in out.splitlines():
        if not line.strip():
            continue
        status, _, path = line.partition("\t")
        changes.append((status.strip()[:1], path))
    return changes


def show_blob(repo: str | Path, commit: str, path: str) -> str | None:
    """File content at a revision; None when the path is absent there."""
    proc = subprocess.run(
        ["git", "-C", str(repo), "show", f"{commit}:{path}"],
        capture_output=True,
    )
    if proc.returncode != 0:
        return None
    return proc.stdout.decode("utf-8", errors="replace")


def archive_snapshot(repo: str | Path, commit: str, dest: str | Path) -> None:
    """Extract the tree at ``commit`` into ``dest`` (clone left untouched)."""
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    archive = subprocess.run(
        ["git", "-C", str(repo), "archive", commit],
        capture_output=True,
    )
    if archive.returncode != 0:
        raise GitError(f"git archive {commit} failed: {archive.stderr.decode(errors='replace').strip()}")
    extract = subprocess.run(["tar", "-x", "-C", str(dest)], input=archive.stdout, capture_output=True)
    if extract.returncode != 0:
        raise GitError(f"extracting archive failed: {extract.stderr.decode(errors='replace').strip()}")
