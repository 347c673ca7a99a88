"""Glob matching against repository-relative POSIX paths.

fnmatch treats ``*`` as crossing directory separators, which is what the
file filters here want, but it has no notion of ``**``. A leading ``**/``
is therefore also tried with the prefix stripped so that ``**/*.py``
matches top-level files.
"""

from __future__ import annotations

from fnmatch import fnmatchcase
from typing import Iterable


def glob_match(path: str, pattern: str) -> bool:
    """Return True when the relative POSIX path matches the glob pattern."""
    if fnmatchcase(path, pattern):
        return True
    return pattern.startswith("**/") and fnmatchcase(path, pattern[3:])


def matches_any(path: str, patterns: Iterable[str]) -> bool:
    return any(glob_match(path, pattern) for pattern in patterns)
