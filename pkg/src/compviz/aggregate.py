"""Hierarchy building and tabular statistics over findings.

Two tree shapes feed the treemap layout: project -> file -> group and
project -> contributor -> group. A contributor inherits the full group
counts of every distinct file they touched, unweighted by how often they
touched it, so contributor totals intentionally double-count files shared
between contributors.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import CompetencyGroup, Finding, group_of
from .miner import ContributorFileMap

#: Default cap on contributor nodes before folding into "(others)".
DEFAULT_TOP_N = 50

OTHERS_LABEL = "(others)"


@dataclass(frozen=True)
class CompetencyTree:
    """Up-to-three-level hierarchy with counts; children sorted by size."""

    label: str
    kind: str  # "project" | "file" | "contributor" | "group" | "others"
    value: int
    group: CompetencyGroup | None = None
    children: tuple["CompetencyTree", ...] = ()


@dataclass(frozen=True)
class FrequencyTable:
    """Distinct-file counts per competency group."""

    counts: dict[CompetencyGroup, int]

    def __getitem__(self, group: CompetencyGroup) -> int:
        return self.counts[group]


@dataclass(frozen=True)
class SummaryRow:
    """One project's totals in fixed column order."""

    project: str
    files_analyzed: int
    files_with_findings: int
    contributors: int | None
    elements_ab: int
    elements_c1: int
    elements_c2: int
    files_ab: int
    files_c1: int
    files_c2: int


def _child_order(node: CompetencyTree) -> tuple[int, str]:
    return (-node.value, node.label)


def _group_children(counter: "Counter[CompetencyGroup]") -> tuple[CompetencyTree, ...]:
    nodes = [
        CompetencyTree(label=group.display_name, kind="group", value=count, group=group)
        for group, count in counter.items()
        if count > 0
    ]
    return tuple(sorted(nodes, key=_child_order))


def _per_file_groups(findings: Iterable[Finding]) -> "dict[str, Counter[CompetencyGroup]]":
    per_file: dict[str, Counter[CompetencyGroup]] = {}
    for finding in findings:
        per_file.setdefault(finding.file, Counter())[group_of(finding.level)] += 1
    return per_file


def _element_counts(findings: Iterable[Finding]) -> "Counter[CompetencyGroup]":
    counter: Counter[CompetencyGroup] = Counter()
    for finding in findings:
        counter[group_of(finding.level)] += 1
    return counter


def file_level_tree(project: str, findings: Sequence[Finding]) -> CompetencyTree:
    """Build the project -> file -> group hierarchy.

    Counts are occurrences, not distinct rule ids; files without findings
    are omitted entirely.
    """
    per_file = _per_file_groups(findings)
    file_nodes = [
        CompetencyTree(
            label=path,
            kind="file",
            value=sum(counter.values()),
            children=_group_children(counter),
        )
        for path, counter in per_file.items()
    ]
    file_nodes.sort(key=_child_order)
    return CompetencyTree(
        label=project,
        kind="project",
        value=sum(node.value for node in file_nodes),
        children=tuple(file_nodes),
    )


def _fold_others(nodes: list[CompetencyTree], top_n: int) -> list[CompetencyTree]:
    kept, folded = nodes[:top_n], nodes[top_n:]
    folded_counts: Counter[CompetencyGroup] = Counter()
    for node in folded:
        for child in node.children:
            folded_counts[child.group] += child.value
    others = CompetencyTree(
        label=OTHERS_LABEL,
        kind="others",
        value=sum(folded_counts.values()),
        children=_group_children(folded_counts),
    )
    return sorted(kept + [others], key=_child_order)


def contributor_level_tree(
    project: str,
    findings: Sequence[Finding],
    contributor_map: ContributorFileMap,
    top_n: int | None = None,
) -> CompetencyTree:
    """Build the project -> contributor -> group hierarchy.

    Each contributor's group counts are the sum over the distinct files
    they touched of the file's finding counts. With ``top_n`` set, the
    largest ``top_n`` contributors are kept and the rest fold into one
    "(others)" node.
    """
    if top_n is not None and top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    per_file = _per_file_groups(findings)
    nodes: list[CompetencyTree] = []
    for contributor in contributor_map.contributors():
        counter: Counter[CompetencyGroup] = Counter()
        for path in contributor_map.entries[contributor]:
            counter.update(per_file.get(path, {}))
        total = sum(counter.values())
        if total == 0:
            continue  # invisible in a treemap
        nodes.append(
            CompetencyTree(
                label=contributor.display_name,
                kind="contributor",
                value=total,
                children=_group_children(counter),
            )
        )
    nodes.sort(key=_child_order)
    if top_n is not None and len(nodes) > top_n:
        nodes = _fold_others(nodes, top_n)
    return CompetencyTree(
        label=project,
        kind="project",
        value=sum(node.value for node in nodes),
        children=tuple(nodes),
    )


def file_frequency(findings: Sequence[Finding]) -> FrequencyTable:
    """Count distinct files per group; a file may count toward several.

    Multiple findings of the same group in one file count that file once.
    """
    files_per_group: dict[CompetencyGroup, set[str]] = {g: set() for g in CompetencyGroup}
    for finding in findings:
        files_per_group[group_of(finding.level)].add(finding.file)
    return FrequencyTable(
        counts={group: len(files) for group, files in files_per_group.items()}
    )


def summary_report(
    project: str,
    findings: Sequence[Finding],
    contributor_map: ContributorFileMap | None = None,
    files_analyzed: int | None = None,
) -> SummaryRow:
    """Summarize one project as a fixed-column row.

    ``files_analyzed`` defaults to the number of distinct files with
    findings, which is all a findings file can tell; pass the analyzer's
    count to include files that had none.
    """
    elements = _element_counts(findings)
    frequency = file_frequency(findings)
    files_with_findings = len({finding.file for finding in findings})
    return SummaryRow(
        project=project,
        files_analyzed=files_analyzed if files_analyzed is not None else files_with_findings,
        files_with_findings=files_with_findings,
        contributors=len(contributor_map.entries) if contributor_map is not None else None,
        elements_ab=elements[CompetencyGroup.AB],
        elements_c1=elements[CompetencyGroup.C1_EFFECTIVE],
        elements_c2=elements[CompetencyGroup.C2_MASTERY],
        files_ab=frequency[CompetencyGroup.AB],
        files_c1=frequency[CompetencyGroup.C1_EFFECTIVE],
        files_c2=frequency[CompetencyGroup.C2_MASTERY],
    )


def summary_table(rows: Iterable[SummaryRow]) -> list[SummaryRow]:
    """Order summary rows by project label for stable multi-project output."""
    return sorted(rows, key=lambda row: row.project)
