"""Command-line pipeline: analyze, mine, treemap, report, and run.

Stage commands write canonically named artifacts under --out so that
``compviz run`` is byte-identical to running the stages one by one:
findings.csv, commits.json, contributor_map.json, treemap_file.svg,
treemap_contributor.svg, report.md.

Exit codes: 0 success, 1 internal error, 2 invalid input or usage.
Diagnostics go to stderr, human summaries to stdout; setting
COMPVIZ_NO_COLOR disables ANSI styling.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .aggregate import (
    DEFAULT_TOP_N,
    contributor_level_tree,
    file_level_tree,
)
from .analyzer import analyze_path
from .core import (
    CompetencyGroup,
    DuplicateRuleError,
    Level,
    Rule,
    RuleCatalog,
    default_catalog,
)
from .miner import RepositoryError, contributor_file_map, mine
from .serialize import (
    MalformedFileError,
    load_findings,
    read_contributor_map_json,
    write_commits_json,
    write_contributor_map_json,
    write_findings_csv,
    write_findings_json,
    write_report_markdown,
)
from .treemap import (
    DEFAULT_CANVAS_HEIGHT,
    DEFAULT_CANVAS_WIDTH,
    DEFAULT_COLORS,
    layout_tree,
    render_svg,
)

FINDINGS_CSV = "findings.csv"
FINDINGS_JSON = "findings.json"
COMMITS_JSON = "commits.json"
CONTRIBUTOR_MAP_JSON = "contributor_map.json"
TREEMAP_FILE_SVG = "treemap_file.svg"
TREEMAP_CONTRIBUTOR_SVG = "treemap_contributor.svg"
REPORT_MD = "report.md"


class UsageError(Exception):
    """Invalid configuration or arguments; maps to exit code 2."""


def _use_color() -> bool:
    if "COMPVIZ_NO_COLOR" in os.environ:
        return False
    return sys.stdout.isatty()


def _style(text: str, code: str) -> str:
    if not _use_color():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def _say(message: str) -> None:
    print(message)


@dataclass
class RunConfig:
    """Validated settings shared by the pipeline stages."""

    repo_path: Path
    repo_name: str
    include: tuple[str, ...] = ()
    exclude: tuple[str, ...] = ()
    include_merges: bool = False
    since: int | None = None
    until: int | None = None
    branch: str | None = None
    top_n: int | None = DEFAULT_TOP_N
    canvas_width: float = DEFAULT_CANVAS_WIDTH
    canvas_height: float = DEFAULT_CANVAS_HEIGHT
    colors: dict[CompetencyGroup, str] = field(default_factory=dict)
    out_dir: Path = Path("compviz-out")
    extra_rules: tuple[Rule, ...] = ()

    def validate(self) -> None:
        if self.top_n is not None and self.top_n < 1:
            raise UsageError(f"--top must be >= 1, got {self.top_n}")
        if self.canvas_width <= 0 or self.canvas_height <= 0:
            raise UsageError("canvas dimensions must be positive")
        merged = {**DEFAULT_COLORS, **self.colors}
        if len(set(merged.values())) != len(merged):
            raise UsageError("group colors must be pairwise distinct")

    def catalog(self) -> RuleCatalog:
        catalog = default_catalog()
        for rule in self.extra_rules:
            catalog = catalog.register(rule)
        return catalog

    def ensure_out_dir(self) -> Path:
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise UsageError(f"cannot create output directory {self.out_dir}: {exc}")
        return self.out_dir


def load_extra_rules(path: "Path | str") -> tuple[Rule, ...]:
    """Read user rule definitions from a JSON config file.

    Expected shape: {"rules": [{"id": ..., "element_name": ..., "level":
    ..., "description": ...}]}. Unknown levels are rejected.
    """
    path = Path(path)
    if not path.exists():
        raise UsageError(f"rules file does not exist: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
        entries = payload["rules"]
    except (json.JSONDecodeError, UnicodeDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot parse rules file {path}: {exc}")
    rules = []
    for entry in entries:
        try:
            level_name = entry["level"]
            try:
                level = Level[level_name]
            except KeyError:
                raise UsageError(
                    f"unknown level {level_name!r} in {path}; "
                    f"expected one of {', '.join(l.name for l in Level)}"
                )
            rules.append(
                Rule(
                    id=entry["id"],
                    element_name=entry.get("element_name", entry["id"]),
                    level=level,
                    description=entry.get("description", ""),
                )
            )
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed rule entry in {path}: {exc}")
    return tuple(rules)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    repo_path = Path(args.repo_path)
    colors: dict[CompetencyGroup, str] = {}
    if getattr(args, "color_ab", None):
        colors[CompetencyGroup.AB] = args.color_ab
    if getattr(args, "color_c1", None):
        colors[CompetencyGroup.C1_EFFECTIVE] = args.color_c1
    if getattr(args, "color_c2", None):
        colors[CompetencyGroup.C2_MASTERY] = args.color_c2
    config = RunConfig(
        repo_path=repo_path,
        repo_name=getattr(args, "name", None) or repo_path.resolve().name or "project",
        include=tuple(getattr(args, "include", None) or ()),
        exclude=tuple(getattr(args, "exclude", None) or ()),
        include_merges=getattr(args, "include_merges", False),
        since=getattr(args, "since", None),
        until=getattr(args, "until", None),
        branch=getattr(args, "branch", None),
        top_n=getattr(args, "top", DEFAULT_TOP_N),
        canvas_width=getattr(args, "width", DEFAULT_CANVAS_WIDTH),
        canvas_height=getattr(args, "height", DEFAULT_CANVAS_HEIGHT),
        colors=colors,
        out_dir=Path(getattr(args, "out", "compviz-out")),
        extra_rules=load_extra_rules(args.rules) if getattr(args, "rules", None) else (),
    )
    config.validate()
    return config


# ---------------------------------------------------------------- stages


def stage_analyze(config: RunConfig, fmt: str = "csv") -> Path:
    """Analyze the source tree and write the findings file."""
    if not config.repo_path.exists():
        raise FileNotFoundError(f"path does not exist: {config.repo_path}")
    report = analyze_path(
        config.repo_path,
        include=config.include or None,
        exclude=config.exclude or None,
        repository=config.repo_name,
        catalog=config.catalog(),
    )
    out = config.ensure_out_dir()
    if fmt == "json":
        target = out / FINDINGS_JSON
        write_findings_json(report.findings, target)
    else:
        target = out / FINDINGS_CSV
        write_findings_csv(report.findings, target)
    by_group = {group: 0 for group in CompetencyGroup}
    for finding in report.findings:
        by_group[finding.group] += 1
    groups = ", ".join(f"{g.display_name} {n}" for g, n in by_group.items())
    skipped = f", {len(report.files_skipped)} skipped" if report.files_skipped else ""
    _say(
        f"{_style(str(len(report.findings)), '32')} findings in "
        f"{report.files_analyzed} files{skipped} ({groups}) -> {target}"
    )
    for path, reason in report.files_skipped:
        print(f"skipped {path}: {reason}", file=sys.stderr)
    return target


def stage_mine(config: RunConfig) -> tuple[Path, Path]:
    """Mine commit history and write commit records plus contributor map."""
    records = mine(
        config.repo_path,
        include_merges=config.include_merges,
        since=config.since,
        until=config.until,
        branch=config.branch,
    )
    cmap = contributor_file_map(records)
    out = config.ensure_out_dir()
    commits_path = out / COMMITS_JSON
    map_path = out / CONTRIBUTOR_MAP_JSON
    write_commits_json(records, commits_path)
    write_contributor_map_json(cmap, map_path)
    _say(
        f"{_style(str(len(records)), '32')} commits from "
        f"{len(cmap.entries)} contributors -> {commits_path}, {map_path}"
    )
    return commits_path, map_path


def stage_treemap(
    findings_path: "Path | str",
    map_path: "Path | str | None",
    level: str,
    config: RunConfig,
) -> Path:
    """Build the requested hierarchy and write its SVG treemap."""
    findings = load_findings(findings_path)
    project = findings[0].repository if findings else config.repo_name
    if level == "contributor":
        if map_path is None:
            raise UsageError(
                "contributor-level treemaps need a contributor map; pass --map "
                "(produced by `compviz mine`)"
            )
        cmap = read_contributor_map_json(map_path)
        tree = contributor_level_tree(project, findings, cmap, top_n=config.top_n)
        target_name = TREEMAP_CONTRIBUTOR_SVG
        title = f"{project}: contributor-level competency"
    elif level == "file":
        tree = file_level_tree(project, findings)
        target_name = TREEMAP_FILE_SVG
        title = f"{project}: file-level competency"
    else:
        raise UsageError(f"unknown treemap level {level!r}; expected 'file' or 'contributor'")
    nodes = layout_tree(tree, config.canvas_width, config.canvas_height)
    svg = render_svg(
        nodes,
        width=config.canvas_width,
        height=config.canvas_height,
        colors=config.colors,
        title=title,
    )
    out = config.ensure_out_dir()
    target = out / target_name
    target.write_text(svg, encoding="utf-8")
    _say(f"treemap with {_style(str(len(nodes)), '32')} rectangles -> {target}")
    return target


def stage_report(
    findings_path: "Path | str",
    map_path: "Path | str | None",
    config: RunConfig,
) -> Path:
    """Write the Markdown frequency report."""
    findings = load_findings(findings_path)
    project = findings[0].repository if findings else config.repo_name
    cmap = read_contributor_map_json(map_path) if map_path is not None else None
    out = config.ensure_out_dir()
    target = out / REPORT_MD
    write_report_markdown(target, project, findings, cmap)
    _say(f"report -> {target}")
    return target


# ---------------------------------------------------------------- commands


def cmd_analyze(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    stage_analyze(config, fmt=args.format)
    return 0


def cmd_mine(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    stage_mine(config)
    return 0


def _viz_config(args: argparse.Namespace) -> RunConfig:
    # treemap/report operate on files, not a repository; reuse RunConfig
    # with a placeholder path for the shared knobs.
    args.repo_path = getattr(args, "repo_path", ".")
    return config_from_args(args)


def cmd_treemap(args: argparse.Namespace) -> int:
    config = _viz_config(args)
    stage_treemap(args.findings, args.map, args.level, config)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    config = _viz_config(args)
    stage_report(args.findings, args.map, config)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    findings_path = stage_analyze(config)
    _, map_path = stage_mine(config)
    stage_treemap(findings_path, None, "file", config)
    stage_treemap(findings_path, map_path, "contributor", config)
    stage_report(findings_path, map_path, config)
    return 0


# ---------------------------------------------------------------- parser


def _add_repo_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("repo_path", help="path to the project tree (a git clone)")
    parser.add_argument("--name", help="project label (default: directory name)")
    parser.add_argument("--rules", help="JSON file with extra rule definitions")


def _add_analyze_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--include",
        action="append",
        metavar="GLOB",
        help="file globs to analyze (default: **/*.py; repeatable)",
    )
    parser.add_argument(
        "--exclude",
        action="append",
        metavar="GLOB",
        help="file globs to skip (repeatable)",
    )


def _add_mine_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--include-merges",
        action="store_true",
        help="also count merge commits (diffed against the first parent)",
    )
    parser.add_argument("--since", type=int, help="earliest author timestamp (epoch seconds)")
    parser.add_argument("--until", type=int, help="latest author timestamp (epoch seconds)")
    parser.add_argument("--branch", help="branch to mine (default: current HEAD)")


def _add_viz_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--top",
        type=int,
        default=DEFAULT_TOP_N,
        help=f"contributors to show before folding into \"(others)\" (default {DEFAULT_TOP_N})",
    )
    parser.add_argument("--width", type=float, default=DEFAULT_CANVAS_WIDTH, help="canvas width in px")
    parser.add_argument("--height", type=float, default=DEFAULT_CANVAS_HEIGHT, help="canvas height in px")
    parser.add_argument("--color-ab", metavar="HEX", help="fill for the AB group")
    parser.add_argument("--color-c1", metavar="HEX", help="fill for C1 - Effective")
    parser.add_argument("--color-c2", metavar="HEX", help="fill for C2 - Mastery")


def _add_out_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out",
        default="compviz-out",
        help="directory for generated artifacts (default: compviz-out)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compviz",
        description=(
            "Detect competency-leveled Python elements, map git contributors to the "
            "files they touched, and render competency treemaps. Clone the repository "
            "yourself first; no network access is performed."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="detect elements and write findings.csv/.json")
    _add_repo_arguments(p)
    _add_analyze_arguments(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="findings file format")
    _add_out_argument(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("mine", help="mine git history into commits.json and contributor_map.json")
    _add_repo_arguments(p)
    _add_mine_arguments(p)
    _add_out_argument(p)
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("treemap", help="render a competency treemap SVG from a findings file")
    p.add_argument("--findings", required=True, help="findings file (CSV or JSON)")
    p.add_argument("--map", help="contributor map JSON (required for --level contributor)")
    p.add_argument("--level", choices=("file", "contributor"), default="file")
    p.add_argument("--name", help="project label fallback when the findings file is empty")
    _add_viz_arguments(p)
    _add_out_argument(p)
    p.set_defaults(func=cmd_treemap)

    p = sub.add_parser("report", help="write the Markdown frequency report")
    p.add_argument("--findings", required=True, help="findings file (CSV or JSON)")
    p.add_argument("--map", help="contributor map JSON (adds contributor statistics)")
    p.add_argument("--name", help="project label fallback when the findings file is empty")
    _add_out_argument(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("run", help="full pipeline: analyze, mine, both treemaps, report")
    _add_repo_arguments(p)
    _add_analyze_arguments(p)
    _add_mine_arguments(p)
    _add_viz_arguments(p)
    _add_out_argument(p)
    p.set_defaults(func=cmd_run)

    return parser


def main(argv: "list[str] | None" = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (
        UsageError,
        RepositoryError,
        MalformedFileError,
        DuplicateRuleError,
        FileNotFoundError,
        NotADirectoryError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
