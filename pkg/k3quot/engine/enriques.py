"""Enriques quotients: X/G smooth where G contains a free involution.

A class is a candidate when it is K3-admissible and every branch index is a
power of two. The Enriques group H = G / (free involution) is curated in
``verdicts_enriques.tsv``; ``E-RANK`` rejects candidates whose K3 group has
too small a 2-part to contain a free involution alongside the stabilizers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

from k3quot.core.abelian import FiniteAbelianGroup, parse_group_spec
from k3quot.core.classes import BranchClass, ClassId, Fixture
from k3quot.engine.groups import (
    INFINITY,
    CatalogDiff,
    CatalogKey,
    admissible_ids,
    deduce_group,
)
from k3quot.engine.rules import (
    Admissible,
    Rejected,
    Undecided,
    Verdict,
    VerdictTable,
    default_fixture,
    default_verdicts,
    resolve_class,
)
from k3quot.errors import NotCandidate
from k3quot.settings import DataPaths

logger = logging.getLogger(__name__)

MIN_TWO_RANK = 3


def _catalog(*labels: str) -> frozenset[FiniteAbelianGroup]:
    return frozenset(parse_group_spec(label) for label in labels)


_AGE: dict[CatalogKey, frozenset[FiniteAbelianGroup]] = {
    INFINITY: _catalog("Z2^2", "Z2^3", "Z2^4"),
    0: _catalog("Z2^2", "Z2^3", "Z2^4", "Z4^2", "Z2xZ4", "Z2^2xZ4"),
    1: _catalog("Z2^2", "Z2^3", "Z2^4", "Z2xZ4", "Z2^2xZ4", "Z4xZ8"),
    2: _catalog("Z2^2", "Z2^3", "Z4^2", "Z2^2xZ4"),
    4: _catalog("Z2xZ4"),
}

AGE = _catalog("Z2^2", "Z2^3", "Z2^4", "Z4^2", "Z2xZ4", "Z2^2xZ4", "Z4xZ8")


def catalog_AGE(n: CatalogKey) -> frozenset[FiniteAbelianGroup]:  # noqa: N802
    return _AGE.get(n, frozenset())


def catalog_AGE_union() -> frozenset[FiniteAbelianGroup]:  # noqa: N802
    return frozenset().union(*_AGE.values())


def default_enriques_verdicts() -> VerdictTable:
    return VerdictTable.load(DataPaths.from_env().enriques_verdicts)


def _is_power_of_two(m: int) -> bool:
    return m >= 2 and m & (m - 1) == 0


def is_candidate_shape(branch: BranchClass) -> bool:
    return all(_is_power_of_two(m) for m in branch.multiplicities)


def enriques_candidate_ids(
    n: int, fixture: Optional[Fixture] = None, table: Optional[VerdictTable] = None
) -> list[ClassId]:
    if fixture is None:
        fixture = default_fixture()
    return [cid for cid in admissible_ids(n, fixture, table) if is_candidate_shape(fixture[cid])]


def enriques_candidates(
    n: int, fixture: Optional[Fixture] = None, table: Optional[VerdictTable] = None
) -> set[BranchClass]:
    if fixture is None:
        fixture = default_fixture()
    return {fixture[cid] for cid in enriques_candidate_ids(n, fixture, table)}


def generic_enriques_rules(k3_group: FiniteAbelianGroup) -> frozenset[str]:
    return frozenset({"E-RANK"}) if k3_group.p_rank(2) < MIN_TWO_RANK else frozenset()


def enriques_verdict(
    branch: Union[BranchClass, ClassId],
    fixture: Optional[Fixture] = None,
    table: Optional[VerdictTable] = None,
    enriques_table: Optional[VerdictTable] = None,
) -> Verdict:
    if fixture is None:
        fixture = default_fixture()
    class_id, resolved = resolve_class(branch, fixture)
    if class_id not in enriques_candidate_ids(class_id.n, fixture, table):
        raise NotCandidate(str(class_id))
    if enriques_table is None:
        enriques_table = default_enriques_verdicts()
    return enriques_table.get(class_id)


@dataclass(frozen=True)
class EnriquesIssue:
    class_id: ClassId
    message: str

    def __str__(self) -> str:
        return f"{self.class_id}: {self.message}"


def check_enriques_consistency(
    fixture: Optional[Fixture] = None,
    table: Optional[VerdictTable] = None,
    enriques_table: Optional[VerdictTable] = None,
) -> list[EnriquesIssue]:
    """Rows must match the candidates, and E-RANK must agree with the rows."""
    if fixture is None:
        fixture = default_fixture()
    if table is None:
        table = default_verdicts()
    if enriques_table is None:
        enriques_table = default_enriques_verdicts()
    issues: list[EnriquesIssue] = []
    candidates = {
        cid
        for n in sorted({cid.n for cid in fixture.ids()})
        for cid in enriques_candidate_ids(n, fixture, table)
    }
    for class_id in sorted(candidates):
        verdict = enriques_table.get(class_id)
        if isinstance(verdict, Undecided):
            issues.append(EnriquesIssue(class_id, "candidate without a verdict row"))
            continue
        k3_group = deduce_group(class_id, fixture, table).group
        fired = generic_enriques_rules(k3_group)
        if fired and not (isinstance(verdict, Rejected) and fired <= verdict.rules):
            issues.append(EnriquesIssue(class_id, f"E-RANK fires against {verdict}"))
    for class_id in sorted(enriques_table.rows):
        if class_id not in candidates:
            issues.append(EnriquesIssue(class_id, "verdict row for a non-candidate"))
    return issues


def enriques_cover_order_check(
    fixture: Optional[Fixture] = None,
    table: Optional[VerdictTable] = None,
    enriques_table: Optional[VerdictTable] = None,
) -> list[EnriquesIssue]:
    """Every Enriques-admissible class needs ``|G| == 2 * |H|``."""
    if enriques_table is None:
        enriques_table = default_enriques_verdicts()
    issues: list[EnriquesIssue] = []
    for class_id, row in sorted(enriques_table.rows.items()):
        if not isinstance(row.verdict, Admissible):
            continue
        k3_group = deduce_group(class_id, fixture, table).group
        if k3_group.order != 2 * row.verdict.group.order:
            issues.append(
                EnriquesIssue(
                    class_id,
                    f"|G| = {k3_group.order} for G = {k3_group}, "
                    f"but H = {row.verdict.group} has order {row.verdict.group.order}",
                )
            )
    return issues


def observed_enriques_catalog(
    n: int,
    fixture: Optional[Fixture] = None,
    table: Optional[VerdictTable] = None,
    enriques_table: Optional[VerdictTable] = None,
) -> frozenset[FiniteAbelianGroup]:
    groups = set()
    for class_id in enriques_candidate_ids(n, fixture, table):
        verdict = enriques_verdict(class_id, fixture, table, enriques_table)
        if isinstance(verdict, Admissible):
            groups.add(verdict.group)
    return frozenset(groups)


def compare_enriques_catalogs(
    n: int,
    fixture: Optional[Fixture] = None,
    table: Optional[VerdictTable] = None,
    enriques_table: Optional[VerdictTable] = None,
) -> CatalogDiff:
    diff = CatalogDiff(
        n, observed_enriques_catalog(n, fixture, table, enriques_table), catalog_AGE(n)
    )
    if not diff.matches:
        logger.warning("F_%s Enriques catalog differs from AG_n(E)", n)
    return diff
