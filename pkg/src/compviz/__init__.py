"""Competency analysis of Python source trees with treemap visualization.

Detects competency-leveled code elements, maps git contributors to the
files they touched, and renders the two hierarchies (project -> file ->
group, project -> contributor -> group) as squarified treemaps.
"""

__version__ = "0.1.0"

from .aggregate import (
    DEFAULT_TOP_N,
    CompetencyTree,
    FrequencyTable,
    SummaryRow,
    contributor_level_tree,
    file_frequency,
    file_level_tree,
    summary_report,
    summary_table,
)
from .analyzer import (
    DETECTABLE_ELEMENTS,
    AnalysisReport,
    analyze_path,
    analyze_source,
)
from .core import (
    DEFAULT_RULES,
    CompetencyGroup,
    DuplicateRuleError,
    Finding,
    Level,
    Rule,
    RuleCatalog,
    default_catalog,
    group_of,
)
from .miner import (
    CommitRecord,
    Contributor,
    ContributorFileMap,
    RepositoryError,
    canonicalize_email,
    contributor_file_map,
    mine,
)
from .treemap import (
    DEFAULT_COLORS,
    LayoutNode,
    Rect,
    layout_tree,
    render_svg,
    squarify,
)

__all__ = [
    "__version__",
    "AnalysisReport",
    "CommitRecord",
    "CompetencyGroup",
    "CompetencyTree",
    "Contributor",
    "ContributorFileMap",
    "DEFAULT_COLORS",
    "DEFAULT_RULES",
    "DEFAULT_TOP_N",
    "DETECTABLE_ELEMENTS",
    "DuplicateRuleError",
    "Finding",
    "FrequencyTable",
    "LayoutNode",
    "Level",
    "Rect",
    "RepositoryError",
    "Rule",
    "RuleCatalog",
    "SummaryRow",
    "analyze_path",
    "analyze_source",
    "canonicalize_email",
    "contributor_file_map",
    "contributor_level_tree",
    "default_catalog",
    "file_frequency",
    "file_level_tree",
    "group_of",
    "layout_tree",
    "mine",
    "render_svg",
    "squarify",
    "summary_report",
    "summary_table",
]
