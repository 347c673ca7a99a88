"""Shared fixtures: git repo construction and finding factories."""

from __future__ import annotations

import os
import subprocess
from pathlib import Path

import pytest

from compviz import Finding, Level

FIXTURES = Path(__file__).parent / "fixtures"


def git_env(name: str, email: str, when: str) -> dict:
    env = dict(os.environ)
    env.update(
        {
            "GIT_AUTHOR_NAME": name,
            "GIT_AUTHOR_EMAIL": email,
            "GIT_AUTHOR_DATE": when,
            "GIT_COMMITTER_NAME": name,
            "GIT_COMMITTER_EMAIL": email,
            "GIT_COMMITTER_DATE": when,
        }
    )
    return env


def run_git(repo: Path, *args: str, env: dict | None = None) -> str:
    result = subprocess.run(
        ["git", "-C", str(repo), *args],
        capture_output=True,
        text=True,
        env=env,
    )
    assert result.returncode == 0, f"git {' '.join(args)} failed: {result.stderr}"
    return result.stdout


def commit_files(
    repo: Path,
    files: dict[str, str],
    message: str,
    author: tuple[str, str],
    when: str,
) -> None:
    for rel, content in files.items():
        target = repo / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(content, encoding="utf-8")
    run_git(repo, "add", "-A")
    run_git(repo, "commit", "-m", message, env=git_env(author[0], author[1], when))


def make_finding(**overrides) -> Finding:
    defaults = dict(
        repository="demo",
        file="a.py",
        class_context="module",
        start_line=1,
        end_line=1,
        displacement=0,
        element="print",
        level=Level.A1,
    )
    defaults.update(overrides)
    return Finding(**defaults)


@pytest.fixture
def mining_repo(tmp_path: Path) -> Path:
    """Five commits, three authors (one with case-variant email aliases),
    one rename, one merge.

    Hand-derived expectations (default mining, *.py filter):
      alice@example.com: util.py 1, core.py 1, app.py 1 (display "alice")
      bob@dev.io:        app.py 1, util.py 1
      carol@dev.io:      extra.py 1
    With merges included, the merge (authored by carol, first-parent diff
    adds extra.py) gives carol extra.py a second touch.
    """
    repo = tmp_path / "mining-repo"
    repo.mkdir()
    run_git(repo, "init", "-q", "-b", "main")

    # c1: mixed-case alias of alice, touches util.py and a non-Python file
    commit_files(
        repo,
        {"util.py": "def helper():\n    return 1\n", "README.md": "demo\n"},
        "add util",
        ("Alice", "Alice@Example.COM"),
        "2024-03-01T10:00:00+0000",
    )
    # c2: bob adds app.py, modifies util.py
    commit_files(
        repo,
        {"app.py": "print('hi')\n", "util.py": "def helper():\n    return 2\n"},
        "add app",
        ("Bob", "bob@dev.io"),
        "2024-03-02T10:00:00+0000",
    )
    # c3 (on a branch): carol adds extra.py
    run_git(repo, "checkout", "-q", "-b", "feature")
    commit_files(
        repo,
        {"extra.py": "value = [1, 2]\n"},
        "add extra",
        ("Carol", "carol@dev.io"),
        "2024-03-03T10:00:00+0000",
    )
    # c4 (back on main): lowercase alice renames util.py and edits app.py
    run_git(repo, "checkout", "-q", "main")
    run_git(repo, "mv", "util.py", "core.py")
    commit_files(
        repo,
        {"app.py": "print('hi there')\n"},
        "rename util to core",
        ("alice", "alice@example.com"),
        "2024-03-04T10:00:00+0000",
    )
    # c5: merge authored by carol
    run_git(
        repo,
        "merge",
        "-q",
        "--no-ff",
        "feature",
        "-m",
        "merge feature",
        env=git_env("Carol", "carol@dev.io", "2024-03-05T10:00:00+0000"),
    )
    return repo


@pytest.fixture
def mini_project(tmp_path: Path) -> Path:
    """Small analyzable project under git, for end-to-end runs."""
    repo = tmp_path / "mini-project"
    repo.mkdir()
    run_git(repo, "init", "-q", "-b", "main")
    sources = {
        name: (FIXTURES / "miniproject" / name).read_text(encoding="utf-8")
        for name in ("app.py", "models.py", "util.py", "legacy_broken.py")
    }
    commit_files(
        repo,
        {"app.py": sources["app.py"], "models.py": sources["models.py"]},
        "initial code",
        ("Dana", "dana@dev.io"),
        "2024-04-01T09:00:00+0000",
    )
    commit_files(
        repo,
        {"util.py": sources["util.py"], "notes.txt": "not python\n"},
        "utilities",
        ("Eli", "eli@dev.io"),
        "2024-04-02T09:00:00+0000",
    )
    commit_files(
        repo,
        {"legacy_broken.py": sources["legacy_broken.py"]},
        "import legacy module",
        ("Dana", "dana@dev.io"),
        "2024-04-03T09:00:00+0000",
    )
    return repo
