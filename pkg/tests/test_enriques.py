"""Enriques quotients of the K3 covers."""

import pytest

from k3quot.core.abelian import parse_group_spec
from k3quot.core.classes import ClassId
from k3quot.engine.enriques import (
    AGE,
    catalog_AGE,
    catalog_AGE_union,
    check_enriques_consistency,
    compare_enriques_catalogs,
    enriques_candidate_ids,
    enriques_cover_order_check,
    enriques_verdict,
    generic_enriques_rules,
    is_candidate_shape,
)
from k3quot.engine.enumeration import MAX_N
from k3quot.engine.groups import INFINITY
from k3quot.engine.rules import Admissible, Rejected
from k3quot.errors import NotCandidate


def _cid(text):
    return ClassId.parse(text)


@pytest.fixture
def engine(fixture, verdicts, enriques_verdicts):
    return {"fixture": fixture, "table": verdicts, "enriques_table": enriques_verdicts}


class TestCandidates:
    def test_shape(self, fixture):
        assert is_candidate_shape(fixture[_cid("F4-249")])
        assert not is_candidate_shape(fixture[_cid("F12-266")])

    def test_examples(self, fixture, verdicts):
        assert _cid("F4-249") in enriques_candidate_ids(4, fixture, verdicts)
        assert _cid("F0-53") in enriques_candidate_ids(0, fixture, verdicts)
        assert enriques_candidate_ids(12, fixture, verdicts) == []

    def test_only_admissible_classes(self, fixture, verdicts):
        assert _cid("F0-4") not in enriques_candidate_ids(0, fixture, verdicts)


class TestVerdicts:
    def test_examples(self, engine):
        assert enriques_verdict(_cid("F0-53"), **engine) == Admissible(parse_group_spec("Z2^2"))
        assert enriques_verdict(_cid("F1-141"), **engine) == Admissible(parse_group_spec("Z4xZ8"))
        assert isinstance(enriques_verdict(_cid("F0-31"), **engine), Rejected)

    def test_transcription_correction(self, engine):
        assert enriques_verdict(_cid("F4-249"), **engine) == Admissible(parse_group_spec("Z2xZ4"))

    def test_not_candidate(self, engine):
        with pytest.raises(NotCandidate):
            enriques_verdict(_cid("F0-1"), **engine)

    def test_two_rank_rule(self):
        assert generic_enriques_rules(parse_group_spec("Z4")) == frozenset({"E-RANK"})
        assert generic_enriques_rules(parse_group_spec("Z2xZ4xZ8")) == frozenset()

    def test_rank_rule_rejections(self, engine):
        verdict = enriques_verdict(_cid("F4-237"), **engine)
        assert verdict == Rejected(frozenset({"E-RANK"}))

    def test_consistency(self, engine):
        assert check_enriques_consistency(**engine) == []

    def test_cover_order(self, engine):
        assert enriques_cover_order_check(**engine) == []


class TestCatalogs:
    def test_examples(self):
        assert catalog_AGE(4) == frozenset({parse_group_spec("Z2xZ4")})
        assert catalog_AGE(3) == frozenset()
        assert catalog_AGE(INFINITY) == frozenset(
            parse_group_spec(label) for label in ("Z2^2", "Z2^3", "Z2^4")
        )

    def test_union(self):
        assert catalog_AGE_union() == AGE

    @pytest.mark.parametrize("n", range(MAX_N + 1))
    def test_observed_matches_catalog(self, engine, n):
        diff = compare_enriques_catalogs(n, **engine)
        assert diff.matches, diff.to_dict()
