"""Galois groups of admissible classes and the per-F_n group catalogs."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Optional, Union

from k3quot.core.abelian import FiniteAbelianGroup, parse_group_spec
from k3quot.core.classes import BranchClass, ClassId, Fixture
from k3quot.engine.rules import (
    Admissible,
    VerdictTable,
    default_fixture,
    default_verdicts,
    final_verdict,
    generic_group,
    resolve_class,
)
from k3quot.errors import EmptyCatalog, GroupMismatch, NotAdmissible

logger = logging.getLogger(__name__)

INFINITY = "inf"
CatalogKey = Union[int, str]


class Provenance(str, enum.Enum):
    GENERIC = "generic"
    CURATED = "curated"


def _catalog(*labels: str) -> frozenset[FiniteAbelianGroup]:
    return frozenset(parse_group_spec(label) for label in labels)


_AG: dict[CatalogKey, frozenset[FiniteAbelianGroup]] = {
    INFINITY: _catalog(
        "Z2", "Z2^2", "Z2^3", "Z2^4", "Z2^5", "Z4", "Z4^3",
        "Z2xZ3", "Z2xZ3^2", "Z2^3xZ3^2", "Z2^2xZ4",
    ),
    0: _catalog(
        "Z2", "Z2^2", "Z2^3", "Z2^4", "Z2^5", "Z3", "Z3^2", "Z3^3",
        "Z2xZ4", "Z2xZ4^2", "Z2^2xZ4", "Z2^3xZ4",
    ),
    1: _catalog(
        "Z2", "Z2^2", "Z2^3", "Z2^4", "Z2^5", "Z4^2", "Z2xZ3", "Z2xZ3^2", "Z2xZ3^3",
        "Z2xZ4", "Z2^2xZ4", "Z2^3xZ4", "Z2xZ3^2xZ4", "Z2xZ4xZ8",
    ),
    2: _catalog(
        "Z2", "Z2^2", "Z2^3", "Z2^4", "Z3", "Z3^2", "Z3^3", "Z2^2xZ3^2",
        "Z2xZ4", "Z2xZ4^2", "Z2^2xZ4", "Z2^3xZ4",
    ),
    3: _catalog("Z2xZ3", "Z2xZ3^2", "Z2^3xZ3", "Z2xZ3xZ4"),
    4: _catalog("Z2", "Z2^2", "Z2^3", "Z4", "Z2xZ3^2", "Z2xZ4", "Z2^2xZ4"),
    6: _catalog("Z3", "Z3^2", "Z2^2xZ3"),
    8: _catalog("Z2xZ4"),
    12: _catalog("Z2xZ3"),
}

CATALOG_KEYS: tuple[CatalogKey, ...] = (0, 1, 2, 3, 4, 6, 8, 12, INFINITY)

# the full list of groups acting with a smooth quotient
AG = _catalog(
    "Z2", "Z2^2", "Z2^3", "Z2^4", "Z2^5",
    "Z3", "Z3^2", "Z3^3",
    "Z4", "Z4^2", "Z4^3",
    "Z2xZ3", "Z2xZ3^2", "Z2xZ3^3", "Z2^2xZ3", "Z2^2xZ3^2", "Z2^3xZ3", "Z2^3xZ3^2",
    "Z2xZ4", "Z2xZ4^2", "Z2^2xZ4", "Z2^3xZ4",
    "Z2xZ3xZ4", "Z2xZ3^2xZ4",
    "Z2xZ4xZ8",
)


def parse_catalog_key(text: str) -> CatalogKey:
    lowered = text.strip().lower()
    if lowered in ("inf", "infinity", "p2"):
        return INFINITY
    return int(lowered)


def catalog_AG(n: CatalogKey, strict: bool = False) -> frozenset[FiniteAbelianGroup]:  # noqa: N802
    """Groups G with X/G = F_n (``INFINITY`` for P^2); empty where none exist."""
    catalog = _AG.get(n, frozenset())
    if strict and not catalog:
        raise EmptyCatalog(n)
    return catalog


def catalog_AG_union() -> frozenset[FiniteAbelianGroup]:  # noqa: N802
    return frozenset().union(*_AG.values())


@dataclass(frozen=True)
class DeducedGroup:
    group: FiniteAbelianGroup
    provenance: Provenance


def deduce_group(
    branch: Union[BranchClass, ClassId],
    fixture: Optional[Fixture] = None,
    table: Optional[VerdictTable] = None,
) -> DeducedGroup:
    class_id, resolved = resolve_class(branch, fixture)
    verdict = final_verdict(class_id, fixture, table)
    if not isinstance(verdict, Admissible):
        raise NotAdmissible(str(class_id))
    forced = generic_group(resolved)
    if forced is None:
        return DeducedGroup(verdict.group, Provenance.CURATED)
    if forced != verdict.group:
        raise GroupMismatch(str(class_id), str(forced), str(verdict.group))
    return DeducedGroup(forced, Provenance.GENERIC)


def admissible_ids(
    n: int, fixture: Optional[Fixture] = None, table: Optional[VerdictTable] = None
) -> list[ClassId]:
    if fixture is None:
        fixture = default_fixture()
    if table is None:
        table = default_verdicts()
    return [cid for cid in fixture.ids(n) if isinstance(table.get(cid), Admissible)]


def observed_catalog(
    n: int, fixture: Optional[Fixture] = None, table: Optional[VerdictTable] = None
) -> frozenset[FiniteAbelianGroup]:
    if fixture is None:
        fixture = default_fixture()
    if table is None:
        table = default_verdicts()
    return frozenset(
        deduce_group(cid, fixture, table).group for cid in admissible_ids(n, fixture, table)
    )


@dataclass(frozen=True)
class CatalogDiff:
    n: CatalogKey
    computed: frozenset[FiniteAbelianGroup]
    expected: frozenset[FiniteAbelianGroup]

    @property
    def missing(self) -> list[FiniteAbelianGroup]:
        return sorted(self.expected - self.computed)

    @property
    def extra(self) -> list[FiniteAbelianGroup]:
        return sorted(self.computed - self.expected)

    @property
    def matches(self) -> bool:
        return self.computed == self.expected

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "matches": self.matches,
            "computed": [g.label for g in sorted(self.computed)],
            "expected": [g.label for g in sorted(self.expected)],
            "missing": [g.label for g in self.missing],
            "extra": [g.label for g in self.extra],
        }


def compare_catalogs(
    n: int, fixture: Optional[Fixture] = None, table: Optional[VerdictTable] = None
) -> CatalogDiff:
    diff = CatalogDiff(n, observed_catalog(n, fixture, table), catalog_AG(n))
    if not diff.matches:
        logger.warning(
            "F_%s catalog differs: missing %s, extra %s",
            n,
            ", ".join(map(str, diff.missing)) or "-",
            ", ".join(map(str, diff.extra)) or "-",
        )
    return diff
