"""Exhaustive enumeration of branch classes with zero canonical defect.

On F_n the defect splits into two coordinates. The C-coordinate reads
``sum(w_i * a_i) = 2`` over horizontal components, so a horizontal part is
a weighted Egyptian-fraction solution over one of a handful of
a-partitions. The F-coordinate ``sum(w_i * b_i) = n + 2`` is closed by
fiber components once the horizontal b's are chosen.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from k3quot.core.classes import BranchClass, ClassId, Fixture, format_class
from k3quot.core.picard import DivisorClass, is_irreducible_class

logger = logging.getLogger(__name__)

MAX_N = 13

# sizes a_i of horizontal coefficients; each term w*a >= a/2 and the total is 2
_HORIZONTAL_PARTS: tuple[tuple[int, ...], ...] = (
    (1,),
    (2,),
    (1, 1),
    (3,),
    (2, 1),
    (1, 1, 1),
    (4,),
    (3, 1),
    (2, 2),
    (2, 1, 1),
    (1, 1, 1, 1),
)


def horizontal_parts() -> tuple[tuple[int, ...], ...]:
    return _HORIZONTAL_PARTS


def _weight(b: int) -> Fraction:
    return Fraction(b - 1, b)


def _canonical_solution(slots: Sequence[int], values: Sequence[int]) -> tuple[int, ...]:
    by_slot: dict[int, list[int]] = {}
    for slot, value in zip(slots, values):
        by_slot.setdefault(slot, []).append(value)
    for bucket in by_slot.values():
        bucket.sort(reverse=True)
    return tuple(by_slot[slot].pop() for slot in slots)


def solve_weighted_unit(target: Fraction, slots: Sequence[int]) -> set[tuple[int, ...]]:
    """All ``(b_j)`` with ``sum(m_j * (1 - 1/b_j)) == target`` and every ``b_j >= 2``.

    Solutions are aligned with ``slots``; values sitting in slots of equal
    weight are sorted ascending, so each multiset appears once.
    """
    target = Fraction(target)
    if target < 0 or any(m < 1 for m in slots):
        return set()
    if not slots:
        return {()} if target == 0 else set()

    solutions: set[tuple[int, ...]] = set()
    values = [0] * len(slots)

    # sum(m_j / b_j) must equal the reciprocal budget; terms are taken in
    # nonincreasing order, so each is at least budget / (free slots left)
    def place(budget: Fraction, free: list[int], ceiling: Optional[Fraction]) -> None:
        if not free:
            if budget == 0:
                solutions.add(_canonical_solution(slots, values))
            return
        if budget <= 0:
            return
        remaining = len(free)
        floor = budget / remaining
        for pos, j in enumerate(free):
            m = slots[j]
            for b in range(2, int(m * remaining / budget) + 1):
                term = Fraction(m, b)
                if ceiling is not None and term > ceiling:
                    continue
                if term < floor:
                    break
                values[j] = b
                place(budget - term, free[:pos] + free[pos + 1 :], term)
            values[j] = 0

    place(sum(slots) - target, list(range(len(slots))), None)
    return solutions


@dataclass(frozen=True)
class _Horizontal:
    multiplicity: int
    a: int


def _beta_choices(part: _Horizontal, n: int) -> Iterable[int]:
    if part.a == 1:
        yield 0
        start = max(n, 1)
    else:
        start = max(n * part.a, 1)
    yield from range(start, 2 * (n + 2) + 1)


def _fiber_closures(residual: Fraction) -> list[tuple[int, ...]]:
    if residual == 0:
        return [()]
    closures: list[tuple[int, ...]] = []
    # each fiber weight lies in [1/2, 1), so residual < k <= 2 * residual
    for k in range(int(residual) + 1, int(2 * residual) + 1):
        closures.extend(sorted(solve_weighted_unit(residual, (1,) * k)))
    return closures


def _assign_betas(
    n: int, horizontals: list[_Horizontal]
) -> Iterable[tuple[int, ...]]:
    budget = Fraction(n + 2)
    betas: list[int] = []

    def walk(i: int, used: Fraction) -> Iterable[tuple[int, ...]]:
        if i == len(horizontals):
            yield tuple(betas)
            return
        part = horizontals[i]
        same_as_previous = i > 0 and horizontals[i - 1] == part
        for beta in _beta_choices(part, n):
            if same_as_previous and beta < betas[i - 1]:
                continue
            spent = used + _weight(part.multiplicity) * beta
            if spent > budget:
                break
            betas.append(beta)
            yield from walk(i + 1, spent)
            betas.pop()

    yield from walk(0, Fraction(0))


def enumerate_branch_classes(n: int) -> set[BranchClass]:
    """Every branch class on F_n with zero canonical defect, in canonical form."""
    if n < 0:
        raise ValueError(f"Hirzebruch index must be >= 0, got {n}")
    found: set[BranchClass] = set()
    for part in _HORIZONTAL_PARTS:
        for mults in solve_weighted_unit(Fraction(2), part):
            horizontals = sorted(
                (_Horizontal(m, a) for m, a in zip(mults, part)),
                key=lambda h: (h.a, h.multiplicity),
            )
            for betas in _assign_betas(n, horizontals):
                sections = sum(1 for h, b in zip(horizontals, betas) if h.a == 1 and b == 0)
                if n >= 1 and sections > 1:
                    continue
                residual = Fraction(n + 2) - sum(
                    (_weight(h.multiplicity) * b for h, b in zip(horizontals, betas)),
                    Fraction(0),
                )
                if residual < 0:
                    continue
                triples = [(h.multiplicity, h.a, b) for h, b in zip(horizontals, betas)]
                if not all(is_irreducible_class(DivisorClass(n, a, b)) for _, a, b in triples):
                    continue
                for fibers in _fiber_closures(residual):
                    branch = BranchClass.of(n, triples + [(m, 0, 1) for m in fibers])
                    found.add(branch.canonical())
    logger.debug("F_%d: %d branch classes", n, len(found))
    return found


def sorted_classes(classes: Iterable[BranchClass]) -> list[BranchClass]:
    return sorted(classes, key=lambda b: (b.n, len(b), b.key))


def enumerate_range(ns: Iterable[int]) -> dict[int, list[BranchClass]]:
    return {n: sorted_classes(enumerate_branch_classes(n)) for n in ns}


@dataclass
class EnumerationDiff:
    n: int
    enumerated: int
    fixture: int
    missing_from_fixture: list[str] = field(default_factory=list)
    not_enumerated: list[ClassId] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return not self.missing_from_fixture and not self.not_enumerated

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "enumerated": self.enumerated,
            "fixture": self.fixture,
            "matches": self.matches,
            "missing_from_fixture": self.missing_from_fixture,
            "not_enumerated": [str(cid) for cid in self.not_enumerated],
        }


def compare_with_fixture(
    n: int, fixture: Fixture, enumerated: Optional[Iterable[BranchClass]] = None
) -> EnumerationDiff:
    classes = set(enumerate_branch_classes(n) if enumerated is None else enumerated)
    keys = {b.key for b in classes}
    fixture_ids = fixture.ids(n)
    fixture_keys = {fixture[cid].key for cid in fixture_ids}
    diff = EnumerationDiff(
        n=n,
        enumerated=len(classes),
        fixture=len(fixture_keys),
        missing_from_fixture=[
            format_class(b) for b in sorted_classes(classes) if b.key not in fixture_keys
        ],
        not_enumerated=[cid for cid in fixture_ids if fixture[cid].key not in keys],
    )
    if not diff.matches:
        logger.warning(
            "F_%d: %d enumerated classes missing from fixture, %d fixture classes not enumerated",
            n,
            len(diff.missing_from_fixture),
            len(diff.not_enumerated),
        )
    return diff

