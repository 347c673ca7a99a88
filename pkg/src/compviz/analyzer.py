"""AST-based detection of competency-leveled elements in Python sources.

Detection is purely syntactic: no name resolution, no import following.
Shadowing of built-ins is ignored, so ``print = log; print(x)`` still
counts as a print call. A file that fails to parse is reported as skipped
rather than failing a directory run.

Matching semantics per element id:

- ``print`` / ``open_function``: call expression whose callee is the bare
  name ``print`` / ``open``.
- ``if_statement``: every ``if`` node; each ``elif`` arm is its own node
  and counts separately, a plain ``else`` adds nothing.
- ``list``: list literal in load context; comprehensions and unpacking
  targets are not list literals.
- ``nested_list`` / ``list_with_dictionary``: list literal with at least
  one direct element that is a list / dict literal, one finding per outer
  literal (inner lists still count as ``list`` on their own).
- ``nested_dictionary``: dict literal with at least one direct value that
  is a dict literal, one per outer literal.
- ``with_statement``: one per ``with`` or ``async with`` statement.
- ``list_comprehension``: one per list-comprehension expression.
- ``dunder_dict_attribute``: any attribute access named ``__dict__``.
- ``dunder_slots``: class-body assignment whose target includes the name
  ``__slots__``, one per assignment statement.
- ``generator_function``: ``def``/``async def`` whose own body contains
  ``yield`` or ``yield from``; nested functions and lambdas are excluded.
- ``meta_class``: class with a ``metaclass=`` keyword or a class-body
  assignment to ``__metaclass__``, one per class.
- ``decorator_class``: class definition with at least one decorator.

Only element ids present in the supplied catalog are emitted, at the
level the catalog assigns them.
"""

from __future__ import annotations

import ast
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .core import Finding, RuleCatalog, default_catalog
from .paths import matches_any

#: Element ids this analyzer knows how to detect.
DETECTABLE_ELEMENTS = frozenset(
    {
        "print",
        "if_statement",
        "list",
        "open_function",
        "nested_list",
        "list_with_dictionary",
        "nested_dictionary",
        "with_statement",
        "list_comprehension",
        "dunder_dict_attribute",
        "dunder_slots",
        "generator_function",
        "meta_class",
        "decorator_class",
    }
)

DEFAULT_INCLUDE: tuple[str, ...] = ("**/*.py",)


@dataclass(frozen=True)
class AnalysisReport:
    """Findings for a source tree plus bookkeeping about skipped files."""

    findings: tuple[Finding, ...]
    files_analyzed: int
    files_skipped: tuple[tuple[str, str], ...]


def _finding_key(finding: Finding) -> tuple[str, int, int, str]:
    return (finding.file, finding.start_line, finding.displacement, finding.element)


def _own_body_yields(func: ast.FunctionDef | ast.AsyncFunctionDef) -> bool:
    # Walk the function body but stop at nested function/lambda boundaries;
    # a yield inside those belongs to the inner callable.
    stack: list[ast.AST] = list(func.body)
    while stack:
        node = stack.pop()
        if isinstance(node, (ast.Yield, ast.YieldFrom)):
            return True
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef, ast.Lambda)):
            continue
        stack.extend(ast.iter_child_nodes(node))
    return False


def _assignment_targets(stmt: ast.stmt) -> list[ast.expr]:
    if isinstance(stmt, ast.Assign):
        return list(stmt.targets)
    if isinstance(stmt, (ast.AnnAssign, ast.AugAssign)):
        return [stmt.target]
    return []


def _targets_name(stmt: ast.stmt, name: str) -> bool:
    for target in _assignment_targets(stmt):
        for node in ast.walk(target):
            if isinstance(node, ast.Name) and node.id == name:
                return True
    return False


def _declares_metaclass(node: ast.ClassDef) -> bool:
    if any(kw.arg == "metaclass" for kw in node.keywords):
        return True
    # Legacy style: __metaclass__ assigned directly in the class body.
    return any(_targets_name(stmt, "__metaclass__") for stmt in node.body)


class _ElementVisitor(ast.NodeVisitor):
    """Walks one module and collects findings for catalog-enabled rules."""

    def __init__(self, repository: str, file: str, catalog: RuleCatalog) -> None:
        self.repository = repository
        self.file = file
        self.catalog = catalog
        self.findings: list[Finding] = []
        self._class_stack: list[str] = []

    def _context(self) -> str:
        return ".".join(self._class_stack) if self._class_stack else "module"

    def _emit(self, element: str, node: ast.AST) -> None:
        rule = self.catalog.lookup(element)
        if rule is None:
            return
        self.findings.append(
            Finding(
                repository=self.repository,
                file=self.file,
                class_context=self._context(),
                start_line=node.lineno,
                end_line=node.end_lineno or node.lineno,
                displacement=node.col_offset,
                element=element,
                level=rule.level,
            )
        )

    def visit_Call(self, node: ast.Call) -> None:
        if isinstance(node.func, ast.Name):
            if node.func.id == "print":
                self._emit("print", node)
            elif node.func.id == "open":
                self._emit("open_function", node)
        self.generic_visit(node)

    def visit_If(self, node: ast.If) -> None:
        self._emit("if_statement", node)
        self.generic_visit(node)

    def visit_List(self, node: ast.List) -> None:
        if isinstance(node.ctx, ast.Load):
            self._emit("list", node)
            if any(isinstance(elt, ast.List) for elt in node.elts):
                self._emit("nested_list", node)
            if any(isinstance(elt, ast.Dict) for elt in node.elts):
                self._emit("list_with_dictionary", node)
        self.generic_visit(node)

    def visit_Dict(self, node: ast.Dict) -> None:
        if any(isinstance(value, ast.Dict) for value in node.values):
            self._emit("nested_dictionary", node)
        self.generic_visit(node)

    def visit_With(self, node: ast.With) -> None:
        self._emit("with_statement", node)
        self.generic_visit(node)

    def visit_AsyncWith(self, node: ast.AsyncWith) -> None:
        self._emit("with_statement", node)
        self.generic_visit(node)

    def visit_ListComp(self, node: ast.ListComp) -> None:
        self._emit("list_comprehension", node)
        self.generic_visit(node)

    def visit_Attribute(self, node: ast.Attribute) -> None:
        if node.attr == "__dict__":
            self._emit("dunder_dict_attribute", node)
        self.generic_visit(node)

    def _visit_function(self, node: ast.FunctionDef | ast.AsyncFunctionDef) -> None:
        if _own_body_yields(node):
            self._emit("generator_function", node)
        # Functions do not contribute to the class context chain.
        self.generic_visit(node)

    visit_FunctionDef = _visit_function
    visit_AsyncFunctionDef = _visit_function

    def visit_ClassDef(self, node: ast.ClassDef) -> None:
        # The class definition itself is located in the enclosing scope.
        if _declares_metaclass(node):
            self._emit("meta_class", node)
        if node.decorator_list:
            self._emit("decorator_class", node)
        self._class_stack.append(node.name)
        for stmt in node.body:
            if _targets_name(stmt, "__slots__"):
                self._emit("dunder_slots", stmt)
        self.generic_visit(node)
        self._class_stack.pop()


def analyze_source(
    source: str,
    file: str,
    repository: str,
    catalog: RuleCatalog | None = None,
) -> list[Finding]:
    """Analyze one module body and return its findings, sorted.

    Sort order is (file, start_line, displacement, element id). Raises
    SyntaxError, carrying line and column, when the source does not parse.
    """
    if catalog is None:
        catalog = default_catalog()
    tree = ast.parse(source, filename=file)
    visitor = _ElementVisitor(repository=repository, file=file, catalog=catalog)
    visitor.visit(tree)
    return sorted(visitor.findings, key=_finding_key)


def iter_source_files(
    root: Path,
    include: Sequence[str],
    exclude: Sequence[str],
) -> list[str]:
    """Deterministically list files under root matching the glob filters."""
    selected: list[str] = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for name in sorted(filenames):
            full = Path(dirpath) / name
            if not full.is_file():
                continue
            rel = full.relative_to(root).as_posix()
            if matches_any(rel, include) and not matches_any(rel, exclude):
                selected.append(rel)
    return selected


def analyze_path(
    root: "Path | str",
    include: "Iterable[str] | None" = None,
    exclude: "Iterable[str] | None" = None,
    repository: str | None = None,
    catalog: RuleCatalog | None = None,
) -> AnalysisReport:
    """Analyze every matching file under root.

    Unreadable, non-UTF-8, and unparsable files are recorded as skipped
    with a reason; a single bad file never aborts the run. A missing or
    unreadable root is fatal.
    """
    root = Path(root)
    if not root.exists():
        raise FileNotFoundError(f"analysis root does not exist: {root}")
    if not root.is_dir():
        raise NotADirectoryError(f"analysis root is not a directory: {root}")
    include_patterns = tuple(include) if include else DEFAULT_INCLUDE
    exclude_patterns = tuple(exclude) if exclude else ()
    if repository is None:
        repository = root.resolve().name or "project"
    if catalog is None:
        catalog = default_catalog()

    findings: list[Finding] = []
    skipped: list[tuple[str, str]] = []
    analyzed = 0
    for rel in iter_source_files(root, include_patterns, exclude_patterns):
        try:
            raw = (root / rel).read_bytes()
        except OSError as exc:
            skipped.append((rel, f"unreadable: {exc.strerror or exc}"))
            continue
        try:
            source = raw.decode("utf-8")
        except UnicodeDecodeError:
            skipped.append((rel, "not UTF-8"))
            continue
        try:
            findings.extend(analyze_source(source, rel, repository, catalog))
        except SyntaxError as exc:
            skipped.append(
                (rel, f"syntax error at line {exc.lineno or 0}, column {exc.offset or 0}")
            )
            continue
        analyzed += 1

    findings.sort(key=_finding_key)
    return AnalysisReport(
        findings=tuple(findings),
        files_analyzed=analyzed,
        files_skipped=tuple(skipped),
    )
