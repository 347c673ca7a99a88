"""Levels, grouping, catalog registry."""

import pytest

from compviz import (
    CompetencyGroup,
    DuplicateRuleError,
    Finding,
    Level,
    Rule,
    RuleCatalog,
    default_catalog,
    group_of,
)


class TestLevel:
    def test_exactly_six_members(self):
        assert [l.name for l in Level] == ["A1", "A2", "B1", "B2", "C1", "C2"]

    def test_total_order(self):
        ordered = sorted(Level, reverse=True)
        assert ordered[0] is Level.C2 and ordered[-1] is Level.A1
        assert Level.A1 < Level.A2 < Level.B1 < Level.B2 < Level.C1 < Level.C2


class TestGroupOf:
    def test_ab_levels(self):
        for level in (Level.A1, Level.A2, Level.B1, Level.B2):
            assert group_of(level) is CompetencyGroup.AB

    def test_c_levels(self):
        assert group_of(Level.C1) is CompetencyGroup.C1_EFFECTIVE
        assert group_of(Level.C2) is CompetencyGroup.C2_MASTERY

    def test_exhaustive_partition(self):
        groups = [group_of(level) for level in Level]
        assert groups.count(CompetencyGroup.AB) == 4
        assert groups.count(CompetencyGroup.C1_EFFECTIVE) == 1
        assert groups.count(CompetencyGroup.C2_MASTERY) == 1

    def test_display_names(self):
        assert CompetencyGroup.AB.display_name == "AB"
        assert CompetencyGroup.C1_EFFECTIVE.display_name == "C1 - Effective"
        assert CompetencyGroup.C2_MASTERY.display_name == "C2 - Mastery"


EXPECTED_LEVELS = {
    "print": Level.A1,
    "if_statement": Level.A1,
    "list": Level.A1,
    "open_function": Level.A2,
    "nested_list": Level.A2,
    "list_with_dictionary": Level.B1,
    "nested_dictionary": Level.B1,
    "with_statement": Level.B1,
    "list_comprehension": Level.B2,
    "dunder_dict_attribute": Level.B2,
    "dunder_slots": Level.C1,
    "generator_function": Level.C1,
    "meta_class": Level.C2,
    "decorator_class": Level.C2,
}


class TestDefaultCatalog:
    def test_has_fourteen_rules(self):
        assert len(default_catalog()) == 14

    def test_levels_match(self):
        catalog = default_catalog()
        for rule_id, level in EXPECTED_LEVELS.items():
            rule = catalog.lookup(rule_id)
            assert rule is not None, rule_id
            assert rule.level is level, rule_id

    def test_lookup_absent(self):
        catalog = default_catalog()
        assert catalog.lookup("") is None
        assert catalog.lookup("goroutine") is None

    def test_deterministic(self):
        assert tuple(default_catalog()) == tuple(default_catalog())

    def test_ids_unique(self):
        ids = default_catalog().ids()
        assert len(ids) == len(set(ids))


class TestRegister:
    def test_register_extends(self):
        extended = default_catalog().register(Rule("lambda", "Lambda", Level.B1))
        assert len(extended) == 15
        assert extended.lookup("lambda").level is Level.B1

    def test_original_unchanged(self):
        catalog = default_catalog()
        catalog.register(Rule("lambda", "Lambda", Level.B1))
        assert len(catalog) == 14
        assert catalog.lookup("lambda") is None

    def test_duplicate_rejected(self):
        with pytest.raises(DuplicateRuleError, match="print"):
            default_catalog().register(Rule("print", "Print", Level.A1))

    def test_register_into_empty(self):
        catalog = RuleCatalog().register(Rule("x", "X", Level.A1))
        assert catalog.lookup("x") is not None

    def test_constructor_rejects_duplicates(self):
        rule = Rule("x", "X", Level.A1)
        with pytest.raises(DuplicateRuleError):
            RuleCatalog([rule, rule])


class TestFinding:
    def test_group_property(self):
        finding = Finding("r", "f.py", "module", 1, 1, 0, "print", Level.A1)
        assert finding.group is CompetencyGroup.AB

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"start_line": 0},
            {"start_line": 3, "end_line": 2},
            {"displacement": -1},
        ],
    )
    def test_location_invariants(self, kwargs):
        base = dict(
            repository="r",
            file="f.py",
            class_context="module",
            start_line=1,
            end_line=1,
            displacement=0,
            element="print",
            level=Level.A1,
        )
        base.update(kwargs)
        with pytest.raises(ValueError):
            Finding(**base)
