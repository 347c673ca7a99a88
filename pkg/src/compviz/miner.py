"""Git history mining: commit records and contributor-to-file touch maps.

History is read with the ``git`` command-line tool against the local
object store; nothing is fetched over the network. Contributor identity
is the lowercased author email, so differently-cased aliases of the same
address merge into one contributor whose display name is the most recent
author name seen.
"""

from __future__ import annotations

import ast
import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .paths import glob_match

DEFAULT_FILE_FILTER = "**/*.py"

# git --name-status letters; copies create a new path, typechanges modify.
_CHANGE_KINDS = {
    "A": "added",
    "M": "modified",
    "D": "deleted",
    "R": "renamed",
    "C": "added",
    "T": "modified",
}

_RECORD_SEP = "\x1e"
_FIELD_SEP = "\x1f"
_LOG_FORMAT = _RECORD_SEP + _FIELD_SEP.join(["%H", "%an", "%ae", "%at", "%P"])


class RepositoryError(Exception):
    """The target is not a readable git repository, or a ref is unknown."""


@dataclass(frozen=True)
class CommitRecord:
    """One mined commit with the files it touched."""

    hash: str
    author_name: str
    author_email: str
    timestamp: int
    is_merge: bool
    files: tuple[tuple[str, str], ...]  # (path, change kind)


@dataclass(frozen=True)
class Contributor:
    """Identity keyed by canonical (lowercased) author email."""

    canonical_id: str
    display_name: str = field(compare=False)

    def __post_init__(self) -> None:
        if not self.canonical_id:
            raise ValueError("canonical_id must be nonempty")


@dataclass(frozen=True)
class ContributorFileMap:
    """Per-contributor touch counts of filtered repository files."""

    entries: dict[Contributor, dict[str, int]]

    def contributors(self) -> list[Contributor]:
        return sorted(self.entries, key=lambda c: c.canonical_id)

    def total_touches(self) -> int:
        return sum(sum(files.values()) for files in self.entries.values())


def canonicalize_email(email: str) -> str:
    return email.strip().lower()


def _run_git(repo: Path, *args: str) -> subprocess.CompletedProcess:
    cmd = ["git", "-C", str(repo), "-c", "core.quotepath=false", *args]
    return subprocess.run(cmd, capture_output=True, text=True)


def _ensure_repository(repo: Path) -> None:
    if not repo.exists():
        raise RepositoryError(f"repository path does not exist: {repo}")
    probe = _run_git(repo, "rev-parse", "--absolute-git-dir")
    if probe.returncode != 0:
        raise RepositoryError(f"not a git repository: {repo}")
    git_dir = Path(probe.stdout.strip()).resolve()
    resolved = repo.resolve()
    if git_dir == resolved:
        return  # bare repository
    toplevel = _run_git(repo, "rev-parse", "--show-toplevel")
    if toplevel.returncode != 0 or Path(toplevel.stdout.strip()).resolve() != resolved:
        # The discovered metadata belongs to an enclosing repository.
        raise RepositoryError(f"not a git repository: {repo}")


def _ref_resolves(repo: Path, ref: str) -> bool:
    probe = _run_git(repo, "rev-parse", "--verify", "--quiet", f"{ref}^{{commit}}")
    return probe.returncode == 0


def _unquote_path(path: str) -> str:
    # git C-quotes paths containing control or escape-worthy characters.
    if len(path) >= 2 and path.startswith('"') and path.endswith('"'):
        try:
            unescaped = ast.literal_eval(path)
            return unescaped.encode("latin-1").decode("utf-8", "replace")
        except (ValueError, SyntaxError):
            return path
    return path


def _parse_name_status(lines: Iterable[str]) -> tuple[tuple[str, str], ...]:
    files: list[tuple[str, str]] = []
    for line in lines:
        if not line.strip():
            continue
        parts = line.split("\t")
        kind = _CHANGE_KINDS.get(parts[0][:1])
        if kind is None or len(parts) < 2:
            continue
        # Renames and copies list "old<TAB>new"; the new path is what the
        # analyzer sees at HEAD.
        files.append((_unquote_path(parts[-1]), kind))
    return tuple(files)


def _parse_log(output: str) -> list[CommitRecord]:
    records: list[CommitRecord] = []
    for chunk in output.split(_RECORD_SEP):
        if not chunk.strip():
            continue
        header, _, body = chunk.partition("\n")
        commit_hash, name, email, timestamp, parents = header.split(_FIELD_SEP)
        records.append(
            CommitRecord(
                hash=commit_hash,
                author_name=name,
                author_email=email,
                timestamp=int(timestamp),
                is_merge=len(parents.split()) >= 2,
                files=_parse_name_status(body.splitlines()),
            )
        )
    return records


def mine(
    repo: "Path | str",
    include_merges: bool = False,
    since: int | None = None,
    until: int | None = None,
    branch: str | None = None,
) -> list[CommitRecord]:
    """Return commit records reachable from the selected branch head.

    Records come back oldest-first, parents before children, timestamp
    order as the tie-break. Merge commits are
    excluded unless ``include_merges`` is set, in which case their file
    lists are diffed against the first parent. ``since``/``until`` bound
    the author timestamp (UTC epoch seconds), inclusive.
    """
    repo = Path(repo)
    _ensure_repository(repo)
    ref = branch if branch is not None else "HEAD"
    if not _ref_resolves(repo, ref):
        if branch is not None:
            raise RepositoryError(f"unknown branch {branch!r} in {repo}")
        return []  # repository with zero commits

    args = [
        "log",
        ref,
        "--date-order",
        "--reverse",
        "--no-color",
        "-M",
        f"--format={_LOG_FORMAT}",
        "--name-status",
    ]
    if include_merges:
        args.insert(2, "--diff-merges=first-parent")
    else:
        args.insert(2, "--no-merges")
    result = _run_git(repo, *args)
    if result.returncode != 0:
        raise RepositoryError(
            f"git log failed for {repo}: {result.stderr.strip() or 'unknown error'}"
        )
    records = _parse_log(result.stdout)
    if since is not None:
        records = [r for r in records if r.timestamp >= since]
    if until is not None:
        records = [r for r in records if r.timestamp <= until]
    return records


def contributor_file_map(
    records: Sequence[CommitRecord],
    file_filter: str = DEFAULT_FILE_FILTER,
) -> ContributorFileMap:
    """Derive per-contributor touch counts from mined records.

    Added, modified, and renamed files matching the filter count one touch
    per commit; deletions do not. Contributors whose commits touched no
    matching file still appear, with an empty file map.
    """
    display: dict[str, str] = {}
    counts: dict[str, dict[str, int]] = {}
    for record in records:
        cid = canonicalize_email(record.author_email)
        if not cid:
            cid = record.author_name.strip().lower() or "unknown"
        display[cid] = record.author_name  # records are oldest-first; last wins
        per_file = counts.setdefault(cid, {})
        for path, kind in record.files:
            if kind in ("added", "modified", "renamed") and glob_match(path, file_filter):
                per_file[path] = per_file.get(path, 0) + 1
    entries = {
        Contributor(cid, display[cid]): dict(sorted(files.items()))
        for cid, files in counts.items()
    }
    return ContributorFileMap(entries=entries)
