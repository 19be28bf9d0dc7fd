"""Branch divisor classes: canonical form, fixture parsing, canonical defect.

Fixture lines look like::

    F12-266 | n=12 | 6*(1,0) + 2*(1,12) + 3*(1,12)

``#`` starts a comment; blank lines are ignored.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Optional

from k3quot.core.picard import (
    DivisorClass,
    RationalDivisorClass,
    canonical_class,
    is_irreducible_class,
)
from k3quot.errors import InvalidComponent, ParseError, UnknownClass

logger = logging.getLogger(__name__)

_CLASS_ID_RE = re.compile(r"^F(\d+)-([A-Za-z0-9][A-Za-z0-9-]*)$")
_COMPONENT_RE = re.compile(r"^\s*(-?\d+)\s*\*\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$")
_AMBIENT_RE = re.compile(r"^\s*n\s*=\s*(\d+)\s*$")


@dataclass(frozen=True)
class ClassId:
    """``F<n>-<label>``, e.g. ``F2-167``, ``F0-67-1``, ``F1-99-a3``."""

    n: int
    label: str

    @classmethod
    def parse(cls, text: str) -> ClassId:
        match = _CLASS_ID_RE.match(text.strip())
        if not match:
            raise ParseError(f"malformed class id {text!r}")
        return cls(int(match.group(1)), match.group(2))

    @property
    def sort_key(self) -> tuple[int, int, str]:
        head = re.match(r"\d+", self.label)
        return (self.n, int(head.group()) if head else 10**6, self.label)

    def __lt__(self, other: ClassId) -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return f"F{self.n}-{self.label}"


@dataclass(frozen=True)
class BranchComponent:
    multiplicity: int
    cls: DivisorClass

    def __post_init__(self) -> None:
        if self.multiplicity < 2:
            raise InvalidComponent(
                f"multiplicity must be >= 2, got {self.multiplicity} on {self.cls}"
            )
        if not is_irreducible_class(self.cls):
            raise InvalidComponent(f"{self.cls} is not an irreducible class on F_{self.cls.n}")

    @property
    def weight(self) -> Fraction:
        """Ramification weight ``(b-1)/b``."""
        return Fraction(self.multiplicity - 1, self.multiplicity)

    @property
    def sort_key(self) -> tuple[int, int, int]:
        return (self.cls.a, self.cls.b, self.multiplicity)

    def __str__(self) -> str:
        return f"{self.multiplicity}*{self.cls}"


@dataclass(frozen=True)
class BranchClass:
    """Multiset of components on one F_n, stored sorted by (a, b, multiplicity)."""

    n: int
    components: tuple[BranchComponent, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for comp in self.components:
            if comp.cls.n != self.n:
                raise InvalidComponent(f"component {comp} is not on F_{self.n}")
        if self.n >= 1 and sum(1 for c in self.components if c.cls.is_section) > 1:
            raise InvalidComponent(f"F_{self.n} has a unique negative section")
        ordered = tuple(sorted(self.components, key=lambda c: c.sort_key))
        object.__setattr__(self, "components", ordered)

    @classmethod
    def of(cls, n: int, parts: Iterable[tuple[int, int, int]]) -> BranchClass:
        """Build from ``(multiplicity, a, b)`` triples."""
        return cls(n, tuple(BranchComponent(m, DivisorClass(n, a, b)) for m, a, b in parts))

    def __iter__(self) -> Iterator[BranchComponent]:
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    @property
    def multiplicities(self) -> list[int]:
        return [c.multiplicity for c in self.components]

    @property
    def key(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(c.sort_key for c in self.components)

    def swapped(self) -> BranchClass:
        return BranchClass(
            0, tuple(BranchComponent(c.multiplicity, c.cls.swapped()) for c in self.components)
        )

    def canonical(self) -> BranchClass:
        """On F_0 pick the smaller of the class and its ruling swap."""
        if self.n != 0:
            return self
        other = self.swapped()
        return other if other.key < self.key else self

    def counter(self) -> Counter[tuple[int, int, int]]:
        return Counter((c.multiplicity, c.cls.a, c.cls.b) for c in self.components)

    def __str__(self) -> str:
        return format_class(self)


def canonical_defect(branch: BranchClass) -> RationalDivisorClass:
    """``K + sum((b_i - 1)/b_i * B_i)``; zero for every numerical K3 branch class."""
    total = canonical_class(branch.n).to_rational()
    for comp in branch:
        total = total + comp.cls.to_rational().scaled(comp.weight)
    return total


def format_class(branch: BranchClass) -> str:
    return " + ".join(str(c) for c in branch.components)


def format_fixture_line(class_id: ClassId, branch: BranchClass) -> str:
    return f"{class_id} | n={branch.n} | {format_class(branch)}"


def parse_components(
    text: str, n: int, line: Optional[int] = None, offset: int = 0
) -> BranchClass:
    """Parse ``m*(a,b) + ...`` without canonicalizing the F_0 ruling."""
    parts: list[BranchComponent] = []
    column = offset
    if text.strip():
        for chunk in text.split("+"):
            match = _COMPONENT_RE.match(chunk)
            if not match:
                raise ParseError(f"bad component {chunk.strip()!r}", line, column + 1)
            mult, a, b = (int(g) for g in match.groups())
            parts.append(BranchComponent(mult, DivisorClass(n, a, b)))
            column += len(chunk) + 1
    return BranchClass(n, tuple(parts))


def parse_class(text: str, n: int) -> BranchClass:
    return parse_components(text, n).canonical()


def parse_fixture_line(text: str, line: Optional[int] = None) -> tuple[ClassId, BranchClass]:
    fields = text.split("|")
    if len(fields) != 3:
        raise ParseError("expected 'ID | n=<int> | components'", line, 1)
    raw_id, raw_n, raw_comps = fields
    try:
        class_id = ClassId.parse(raw_id)
    except ParseError as e:
        raise ParseError(str(e), line, 1) from e
    ambient = _AMBIENT_RE.match(raw_n)
    if not ambient:
        raise ParseError(f"bad ambient field {raw_n.strip()!r}", line, len(raw_id) + 2)
    n = int(ambient.group(1))
    if class_id.n != n:
        raise ParseError(f"{class_id} does not live on F_{n}", line, len(raw_id) + 2)
    offset = len(raw_id) + len(raw_n) + 2
    return class_id, parse_components(raw_comps, n, line, offset).canonical()


class Fixture:
    """Ordered ClassId -> BranchClass table loaded from the golden list."""

    def __init__(self, entries: Iterable[tuple[ClassId, BranchClass]]):
        self.classes: dict[ClassId, BranchClass] = {}
        self._by_key: dict[tuple[int, tuple], list[ClassId]] = {}
        for class_id, branch in entries:
            if class_id in self.classes:
                raise ParseError(f"duplicate class id {class_id}")
            self.classes[class_id] = branch
            self._by_key.setdefault((branch.n, branch.key), []).append(class_id)

    def __len__(self) -> int:
        return len(self.classes)

    def __contains__(self, class_id: object) -> bool:
        return class_id in self.classes

    def __getitem__(self, class_id: ClassId) -> BranchClass:
        try:
            return self.classes[class_id]
        except KeyError:
            raise UnknownClass(str(class_id)) from None

    def ids(self, n: Optional[int] = None) -> list[ClassId]:
        return sorted(cid for cid in self.classes if n is None or cid.n == n)

    def lookup(self, branch: BranchClass) -> Optional[ClassId]:
        """First fixture id whose class equals ``branch`` up to canonical form."""
        canon = branch.canonical()
        found = self._by_key.get((canon.n, canon.key))
        return found[0] if found else None

    def duplicates(self) -> list[list[ClassId]]:
        return [ids for ids in self._by_key.values() if len(ids) > 1]


def iter_fixture_lines(text: str) -> Iterator[tuple[ClassId, BranchClass]]:
    for line_num, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        yield parse_fixture_line(line, line_num)


@lru_cache(maxsize=8)
def load_fixture(path: Path) -> Fixture:
    fixture = Fixture(iter_fixture_lines(Path(path).read_text(encoding="utf-8")))
    for ids in fixture.duplicates():
        logger.warning("fixture classes coincide: %s", ", ".join(map(str, ids)))
    logger.debug("loaded %d classes from %s", len(fixture), path)
    return fixture


def duplicate_report(fixture: Fixture) -> list[list[ClassId]]:
    return fixture.duplicates()
