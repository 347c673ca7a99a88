"""Bit-exact serialization of findings, commit records, maps, and reports.

CSV output is RFC-4180-quoted UTF-8 with LF line endings; JSON output is
two-space indented with sorted keys so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Sequence

from .aggregate import (
    CompetencyGroup,
    contributor_level_tree,
    file_frequency,
    summary_report,
)
from .core import Finding, Level
from .miner import CommitRecord, Contributor, ContributorFileMap

FINDINGS_COLUMNS = (
    "repository",
    "file",
    "class",
    "start_line",
    "end_line",
    "displacement",
    "element",
    "level",
)

FREQUENCY_ROW_LABELS = {
    CompetencyGroup.AB: "AB (A1, A2, B1, B2)",
    CompetencyGroup.C1_EFFECTIVE: "C1 - Effective",
    CompetencyGroup.C2_MASTERY: "C2 - Mastery",
}


class MalformedFileError(ValueError):
    """An input file could not be parsed in its expected format."""


def _finding_to_dict(finding: Finding) -> dict:
    return {
        "repository": finding.repository,
        "file": finding.file,
        "class": finding.class_context,
        "start_line": finding.start_line,
        "end_line": finding.end_line,
        "displacement": finding.displacement,
        "element": finding.element,
        "level": finding.level.name,
    }


def _finding_from_dict(row: dict, source: str) -> Finding:
    try:
        return Finding(
            repository=row["repository"],
            file=row["file"],
            class_context=row["class"],
            start_line=int(row["start_line"]),
            end_line=int(row["end_line"]),
            displacement=int(row["displacement"]),
            element=row["element"],
            level=Level[row["level"]],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedFileError(f"malformed findings record in {source}: {exc}") from exc


def findings_to_csv(findings: Sequence[Finding]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(FINDINGS_COLUMNS)
    for finding in findings:
        record = _finding_to_dict(finding)
        writer.writerow([record[column] for column in FINDINGS_COLUMNS])
    return buffer.getvalue()


def write_findings_csv(findings: Sequence[Finding], path: "Path | str") -> None:
    Path(path).write_text(findings_to_csv(findings), encoding="utf-8", newline="")


def read_findings_csv(path: "Path | str") -> list[Finding]:
    path = Path(path)
    try:
        with path.open(encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or tuple(reader.fieldnames) != FINDINGS_COLUMNS:
                raise MalformedFileError(
                    f"unexpected findings CSV header in {path}: {reader.fieldnames}"
                )
            return [_finding_from_dict(row, str(path)) for row in reader]
    except (csv.Error, UnicodeDecodeError) as exc:
        raise MalformedFileError(f"cannot parse findings CSV {path}: {exc}") from exc


def _dump_json(payload: object) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_findings_json(findings: Sequence[Finding], path: "Path | str") -> None:
    payload = [_finding_to_dict(finding) for finding in findings]
    Path(path).write_text(_dump_json(payload), encoding="utf-8")


def read_findings_json(path: "Path | str") -> list[Finding]:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedFileError(f"cannot parse findings JSON {path}: {exc}") from exc
    if not isinstance(payload, list):
        raise MalformedFileError(f"findings JSON {path} must be an array")
    return [_finding_from_dict(row, str(path)) for row in payload]


def load_findings(path: "Path | str") -> list[Finding]:
    """Load findings from CSV or JSON, chosen by file extension."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"findings file does not exist: {path}")
    if path.suffix.lower() == ".json":
        return read_findings_json(path)
    return read_findings_csv(path)


def write_commits_json(records: Sequence[CommitRecord], path: "Path | str") -> None:
    payload = [
        {
            "hash": record.hash,
            "author_name": record.author_name,
            "author_email": record.author_email,
            "timestamp": record.timestamp,
            "is_merge": record.is_merge,
            "files": [{"path": p, "kind": k} for p, k in record.files],
        }
        for record in records
    ]
    Path(path).write_text(_dump_json(payload), encoding="utf-8")


def write_contributor_map_json(cmap: ContributorFileMap, path: "Path | str") -> None:
    payload = {
        "contributors": [
            {
                "id": contributor.canonical_id,
                "display_name": contributor.display_name,
                "files": dict(sorted(cmap.entries[contributor].items())),
            }
            for contributor in cmap.contributors()
        ]
    }
    Path(path).write_text(_dump_json(payload), encoding="utf-8")


def read_contributor_map_json(path: "Path | str") -> ContributorFileMap:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"contributor map file does not exist: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
        entries = {
            Contributor(item["id"], item["display_name"]): {
                str(file): int(count) for file, count in item["files"].items()
            }
            for item in payload["contributors"]
        }
    except (json.JSONDecodeError, UnicodeDecodeError, KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedFileError(f"cannot parse contributor map {path}: {exc}") from exc
    return ContributorFileMap(entries=entries)


def report_markdown(
    project: str,
    findings: Sequence[Finding],
    cmap: ContributorFileMap | None = None,
    top_contributors: int = 10,
) -> str:
    """Render the per-project Markdown report.

    Contains the distinct-file frequency table, element totals per group,
    and, when a contributor map is supplied, the contributor count and the
    largest contributors by inherited element count.
    """
    row = summary_report(project, findings, cmap)
    frequency = file_frequency(findings)

    lines: list[str] = []
    lines.append(f"# Competency report: {project}")
    lines.append("")
    lines.append(f"- Files with findings: {row.files_with_findings}")
    total = row.elements_ab + row.elements_c1 + row.elements_c2
    lines.append(f"- Detected elements: {total}")
    if cmap is not None:
        lines.append(f"- Contributors: {row.contributors}")
    lines.append("")
    lines.append("## Files per competency group")
    lines.append("")
    lines.append("| Competency level | # files |")
    lines.append("| --- | ---: |")
    for group in CompetencyGroup:
        lines.append(f"| {FREQUENCY_ROW_LABELS[group]} | {frequency[group]} |")
    lines.append("")
    lines.append("## Elements per competency group")
    lines.append("")
    lines.append("| Competency group | # elements |")
    lines.append("| --- | ---: |")
    lines.append(f"| {FREQUENCY_ROW_LABELS[CompetencyGroup.AB]} | {row.elements_ab} |")
    lines.append(f"| {FREQUENCY_ROW_LABELS[CompetencyGroup.C1_EFFECTIVE]} | {row.elements_c1} |")
    lines.append(f"| {FREQUENCY_ROW_LABELS[CompetencyGroup.C2_MASTERY]} | {row.elements_c2} |")
    if cmap is not None:
        tree = contributor_level_tree(project, findings, cmap, top_n=top_contributors)
        lines.append("")
        lines.append("## Top contributors")
        lines.append("")
        lines.append("| Contributor | Elements | AB | C1 - Effective | C2 - Mastery |")
        lines.append("| --- | ---: | ---: | ---: | ---: |")
        for node in tree.children:
            per_group = {child.group: child.value for child in node.children}
            lines.append(
                f"| {node.label} | {node.value} "
                f"| {per_group.get(CompetencyGroup.AB, 0)} "
                f"| {per_group.get(CompetencyGroup.C1_EFFECTIVE, 0)} "
                f"| {per_group.get(CompetencyGroup.C2_MASTERY, 0)} |"
            )
    lines.append("")
    return "\n".join(lines)


def write_report_markdown(
    path: "Path | str",
    project: str,
    findings: Sequence[Finding],
    cmap: ContributorFileMap | None = None,
) -> None:
    Path(path).write_text(report_markdown(project, findings, cmap), encoding="utf-8")
