"""Galois groups of admissible classes against the per-F_n catalogs."""

import pytest

from k3quot.core.abelian import parse_group_spec
from k3quot.core.classes import ClassId
from k3quot.engine.enumeration import MAX_N
from k3quot.engine.groups import (
    AG,
    CATALOG_KEYS,
    INFINITY,
    CatalogDiff,
    Provenance,
    admissible_ids,
    catalog_AG,
    catalog_AG_union,
    compare_catalogs,
    deduce_group,
    observed_catalog,
    parse_catalog_key,
)
from k3quot.engine.rules import Admissible, VerdictTable, final_verdict
from k3quot.errors import EmptyCatalog, GroupMismatch, NotAdmissible


def _groups(*labels):
    return frozenset(parse_group_spec(label) for label in labels)


class TestDeduceGroup:
    @pytest.mark.parametrize(
        ("class_id", "group", "provenance"),
        [
            ("F0-1", "Z3", Provenance.GENERIC),
            ("F0-53", "Z2^3", Provenance.CURATED),
            ("F12-266", "Z2xZ3", Provenance.CURATED),
            ("F2-167", "Z3", Provenance.GENERIC),
        ],
    )
    def test_examples(self, fixture, verdicts, class_id, group, provenance):
        deduced = deduce_group(ClassId.parse(class_id), fixture, verdicts)
        assert deduced.group == parse_group_spec(group)
        assert deduced.provenance is provenance

    def test_rejected_class(self, fixture, verdicts):
        with pytest.raises(NotAdmissible):
            deduce_group(ClassId.parse("F0-4"), fixture, verdicts)

    def test_admissible_ids_only_on_spectrum(self, fixture, verdicts):
        assert admissible_ids(5, fixture, verdicts) == []
        assert [str(c) for c in admissible_ids(12, fixture, verdicts)] == ["F12-266"]

    @pytest.mark.parametrize("n", range(MAX_N + 1))
    def test_agrees_with_curated_table(self, fixture, verdicts, n):
        for class_id in admissible_ids(n, fixture, verdicts):
            curated = final_verdict(class_id, fixture, verdicts)
            assert isinstance(curated, Admissible)
            assert deduce_group(class_id, fixture, verdicts).group == curated.group, str(class_id)

    def test_disagreement_raises(self, fixture):
        table = VerdictTable.parse("F0-1\tadmissible\tZ9\twrong\n")
        with pytest.raises(GroupMismatch) as excinfo:
            deduce_group(ClassId.parse("F0-1"), fixture, table)
        assert excinfo.value.forced == "Z3"
        assert excinfo.value.curated == "Z9"


class TestCatalogs:
    def test_examples(self):
        assert catalog_AG(12) == _groups("Z2xZ3")
        assert catalog_AG(8) == _groups("Z2xZ4")
        assert catalog_AG(5) == frozenset()

    def test_strict_lookup(self):
        with pytest.raises(EmptyCatalog):
            catalog_AG(5, strict=True)
        assert catalog_AG(6, strict=True) == _groups("Z3", "Z3^2", "Z2^2xZ3")

    def test_union_is_full_list(self):
        assert catalog_AG_union() == AG
        assert len(AG) == 25

    def test_keys(self):
        assert parse_catalog_key("inf") == INFINITY
        assert parse_catalog_key(" 4 ") == 4
        assert set(CATALOG_KEYS) == {0, 1, 2, 3, 4, 6, 8, 12, INFINITY}

    @pytest.mark.parametrize("n", range(MAX_N + 1))
    def test_observed_matches_catalog(self, fixture, verdicts, n):
        diff = compare_catalogs(n, fixture, verdicts)
        assert diff.matches, diff.to_dict()

    def test_union_over_all_bases(self, fixture, verdicts):
        computed = set(catalog_AG(INFINITY))
        for n in range(MAX_N + 1):
            computed |= observed_catalog(n, fixture, verdicts)
        assert computed == AG


class TestCatalogDiff:
    def test_missing_and_extra(self):
        diff = CatalogDiff(3, _groups("Z2", "Z3"), _groups("Z3", "Z4"))
        assert not diff.matches
        assert diff.missing == [parse_group_spec("Z4")]
        assert diff.extra == [parse_group_spec("Z2")]
        assert diff.to_dict()["missing"] == ["Z4"]
