"""Competency levels, the three-group collapse, rules, and finding records.

The default catalog covers fourteen detectable Python elements ranging from
beginner constructs (``print``, ``if``) up to mastery-level ones
(metaclasses, decorated classes). Catalogs are immutable; extending one
produces a new catalog.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Level(enum.IntEnum):
    """Six-step proficiency scale, totally ordered A1 < A2 < ... < C2."""

    A1 = 1
    A2 = 2
    B1 = 3
    B2 = 4
    C1 = 5
    C2 = 6


class CompetencyGroup(enum.Enum):
    """Three-way collapse of the six levels used by reports and treemaps."""

    AB = "AB"
    C1_EFFECTIVE = "C1 - Effective"
    C2_MASTERY = "C2 - Mastery"

    @property
    def display_name(self) -> str:
        return self.value


_GROUP_OF_LEVEL = {
    Level.A1: CompetencyGroup.AB,
    Level.A2: CompetencyGroup.AB,
    Level.B1: CompetencyGroup.AB,
    Level.B2: CompetencyGroup.AB,
    Level.C1: CompetencyGroup.C1_EFFECTIVE,
    Level.C2: CompetencyGroup.C2_MASTERY,
}


def group_of(level: Level) -> CompetencyGroup:
    """Map a level to its competency group (A/B levels collapse into AB)."""
    return _GROUP_OF_LEVEL[level]


class DuplicateRuleError(ValueError):
    """A rule id was registered twice in the same catalog."""


@dataclass(frozen=True)
class Rule:
    """One detectable Python element and the level assigned to it."""

    id: str
    element_name: str
    level: Level
    description: str = ""


@dataclass(frozen=True)
class Finding:
    """One detected occurrence of a cataloged element at a source location.

    ``class_context`` is the dotted chain of enclosing class names, or the
    literal text ``"module"`` at module scope. ``displacement`` is the
    0-based column of the element's first character; line numbers are
    1-based and inclusive.
    """

    repository: str
    file: str
    class_context: str
    start_line: int
    end_line: int
    displacement: int
    element: str
    level: Level

    def __post_init__(self) -> None:
        if self.start_line < 1:
            raise ValueError(f"start_line must be >= 1, got {self.start_line}")
        if self.end_line < self.start_line:
            raise ValueError(
                f"end_line {self.end_line} precedes start_line {self.start_line}"
            )
        if self.displacement < 0:
            raise ValueError(f"displacement must be >= 0, got {self.displacement}")

    @property
    def group(self) -> CompetencyGroup:
        return group_of(self.level)


class RuleCatalog:
    """Ordered, immutable registry of rules with unique ids."""

    __slots__ = ("_rules", "_by_id")

    def __init__(self, rules: "tuple[Rule, ...] | list[Rule]" = ()) -> None:
        self._rules = tuple(rules)
        self._by_id: dict[str, Rule] = {}
        for rule in self._rules:
            if rule.id in self._by_id:
                raise DuplicateRuleError(f"duplicate rule id: {rule.id!r}")
            self._by_id[rule.id] = rule

    def lookup(self, rule_id: str) -> Rule | None:
        """Return the rule with the given id, or None when absent."""
        return self._by_id.get(rule_id)

    def register(self, rule: Rule) -> "RuleCatalog":
        """Return a new catalog with the rule appended.

        Raises DuplicateRuleError when the id is already present.
        """
        if rule.id in self._by_id:
            raise DuplicateRuleError(f"duplicate rule id: {rule.id!r}")
        return RuleCatalog(self._rules + (rule,))

    def __iter__(self):
        return iter(self._rules)

    def __len__(self) -> int:
        return len(self._rules)

    def __contains__(self, rule_id: str) -> bool:
        return rule_id in self._by_id

    def ids(self) -> tuple[str, ...]:
        return tuple(rule.id for rule in self._rules)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RuleCatalog):
            return NotImplemented
        return self._rules == other._rules

    def __repr__(self) -> str:
        return f"RuleCatalog({len(self._rules)} rules)"


DEFAULT_RULES: tuple[Rule, ...] = (
    Rule("print", "Print", Level.A1, "call whose callee is the bare name print"),
    Rule("if_statement", "If statement", Level.A1, "if statement; each elif arm counts separately"),
    Rule("list", "List", Level.A1, "list literal expression"),
    Rule("open_function", "Open function (files)", Level.A2, "call whose callee is the bare name open"),
    Rule("nested_list", "Nested list", Level.A2, "list literal with a direct list literal element"),
    Rule("list_with_dictionary", "List with a dictionary", Level.B1, "list literal with a direct dictionary literal element"),
    Rule("nested_dictionary", "Nested dictionary", Level.B1, "dictionary literal with a direct dictionary literal value"),
    Rule("with_statement", "with", Level.B1, "with statement, regardless of context manager count"),
    Rule("list_comprehension", "List comprehension", Level.B2, "list comprehension expression"),
    Rule("dunder_dict_attribute", "__dict__ attribute", Level.B2, "attribute access named __dict__"),
    Rule("dunder_slots", "__slots__", Level.C1, "class-body assignment targeting __slots__"),
    Rule("generator_function", "Generator function", Level.C1, "function whose own body yields"),
    Rule("meta_class", "Meta-class", Level.C2, "class with a metaclass keyword or __metaclass__ assignment"),
    Rule("decorator_class", "Decorator class", Level.C2, "class definition with at least one decorator"),
)


def default_catalog() -> RuleCatalog:
    """Return the built-in fourteen-rule catalog."""
    return RuleCatalog(DEFAULT_RULES)
