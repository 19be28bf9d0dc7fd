"""Admissibility engine: numerical rejection rules over a curated verdict table.

Generic rules only ever reject. Whether a class is admissible, and with
which group, comes from the curated table (``verdicts.tsv``); the two
layers are cross-checked by :func:`check_consistency`.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import gcd
from pathlib import Path
from typing import Callable, Optional, Union

from k3quot.core.abelian import FiniteAbelianGroup, fenchel_abelian_p1, parse_group_spec
from k3quot.core.classes import BranchClass, BranchComponent, ClassId, Fixture, load_fixture
from k3quot.core.picard import divisible_by
from k3quot.errors import ParseError, UnknownClass
from k3quot.settings import DataPaths

logger = logging.getLogger(__name__)

# non-symplectic stabilizer orders that occur for these quotients
NON_SYMPLECTIC_ORDERS = frozenset({2, 3, 4, 6, 12})

# isolated fixed points: symplectic involution, order-3 non-symplectic map
SYMPLECTIC_INVOLUTION_FIXED_POINTS = 8
ORDER_3_ISOLATED_FIXED_POINTS = 3

ADHOC_PREFIX = "ADHOC-"


@dataclass(frozen=True)
class Rule:
    code: str
    citation: str


RULES: dict[str, Rule] = {
    rule.code: rule
    for rule in (
        Rule("L11", "Lemma thm:11: section meets only fibres with a non-abelian pattern"),
        Rule("L20", "Lemma thm:20: section normalization admits no abelian cover"),
        Rule("L22", "Lemma thm:22: even pair must meet in 8 points"),
        Rule("L27", "Lemma thm:27: triple pair must meet in 3 points"),
        Rule("L28", "Lemma thm:28: order equals a meeting multiplicity"),
        Rule("L29", "Lemma thm:29: double pair needs halvable classes"),
        Rule("L30", "Lemma thm:30: 2-3-6 triangle with large order-3 self-intersection"),
        Rule("L31", "Lemma thm:31: 2-4-4 triangle with order-2 curve meeting an order-4 curve more than once"),
        Rule("L32", "Lemma thm:32: even ruling meets an even meeting pair"),
        Rule("L33", "Lemma thm:33: coprime generating pair met by a non-coprime curve"),
        Rule("L34", "Lemma thm:34: double triangle with unhalvable opposite class"),
        Rule("L35", "Lemma thm:35: double triangle meeting in more than 4 points"),
        Rule("L36", "Lemma thm:36: even ruling pair with even transversal"),
        Rule("L37", "Lemma thm:37: even cross with even horizontal pair"),
        Rule("L38", "Lemma thm:38: unequal ruling multiplicities"),
        Rule("L39", "Lemma thm:39: even fibre meets an even horizontal pair"),
        Rule("L40", "Lemma thm:40: self-intersection parity against the order"),
        Rule("L41", "Lemma thm:41: even section meets an even horizontal pair"),
        Rule("T44", "Theorem thm:44: exceptional equation has no solution"),
        Rule("E-RANK", "Theorem thm:25: 2-part of the K3 group has rank below 3"),
    )
}

ADHOC_CITATION = "Theorem thm:2: fixed-locus argument for this class"


def rule_citation(code: str) -> str:
    if code.startswith(ADHOC_PREFIX):
        ClassId.parse(code[len(ADHOC_PREFIX) :])
        return ADHOC_CITATION
    try:
        return RULES[code].citation
    except KeyError:
        raise ParseError(f"unknown rule {code!r}") from None


@dataclass(frozen=True)
class Admissible:
    group: FiniteAbelianGroup

    def __str__(self) -> str:
        return f"admissible {self.group}"


@dataclass(frozen=True)
class Rejected:
    rules: frozenset[str]

    def __post_init__(self) -> None:
        if not self.rules:
            raise ValueError("a rejection needs at least one rule")

    def __str__(self) -> str:
        return "rejected " + ",".join(sorted(self.rules))


@dataclass(frozen=True)
class Undecided:
    def __str__(self) -> str:
        return "undecided"


Verdict = Union[Admissible, Rejected, Undecided]


def _is_ruling(comp: BranchComponent) -> bool:
    return comp.cls.is_section or comp.cls.is_fiber


def _meet(x: BranchComponent, y: BranchComponent) -> int:
    return x.cls.dot(y.cls)


def _all_even(comps: Iterable[BranchComponent]) -> bool:
    return all(c.multiplicity % 2 == 0 for c in comps)


def _section_normalization(branch: BranchClass) -> set[str]:
    """Branch indices met by the unique section must be a Fenchel pattern on P^1."""
    sections = [c for c in branch if c.cls.is_section]
    if branch.n < 1 or len(sections) != 1:
        return set()
    section = sections[0]
    pattern: list[int] = []
    only_fibers = True
    for comp in branch:
        if comp is section:
            continue
        d = _meet(section, comp)
        if d:
            only_fibers = only_fibers and comp.cls.is_fiber
            pattern.extend([comp.multiplicity] * d)
    if pattern and fenchel_abelian_p1(pattern) is None:
        return {"L11" if only_fibers else "L20"}
    return set()


def _meeting_pair(branch: BranchClass) -> set[str]:
    if len(branch) != 2:
        return set()
    x, y = branch.components
    d = _meet(x, y)
    if not d:
        return set()
    fired = set()
    even = x.multiplicity % 2 == 0 and y.multiplicity % 2 == 0
    if even and d != SYMPLECTIC_INVOLUTION_FIXED_POINTS:
        fired.add("L22")
    if x.multiplicity == 3 and y.multiplicity == 3 and d != ORDER_3_ISOLATED_FIXED_POINTS:
        fired.add("L27")
    if (
        x.multiplicity == 2
        and y.multiplicity == 2
        and not (divisible_by(x.cls, 2) and divisible_by(y.cls, 2))
    ):
        fired.add("L29")
    return fired


def _triangle(branch: BranchClass) -> set[str]:
    comps = branch.components
    if len(comps) != 3 or not all(_meet(x, y) for x, y in combinations(comps, 2)):
        return set()
    fired = set()
    mults = sorted(branch.multiplicities)
    if mults == [2, 3, 6]:
        triple = next(c for c in comps if c.multiplicity == 3)
        if triple.cls.self_intersection >= 2:
            fired.add("L30")
    elif mults == [2, 4, 4]:
        double = next(c for c in comps if c.multiplicity == 2)
        if any(_meet(double, c) != 1 for c in comps if c.multiplicity == 4):
            fired.add("L31")
    elif mults == [2, 2, 2]:
        for i, comp in enumerate(comps):
            x, y = (c for j, c in enumerate(comps) if j != i)
            d = _meet(x, y)
            if d == 4 and not divisible_by(comp.cls, 2):
                fired.add("L34")
            if d > 4:
                fired.add("L35")
    return fired


def _quadric_patterns(branch: BranchClass) -> set[str]:
    if branch.n != 0:
        return set()
    comps = branch.components
    sections = [c for c in comps if c.cls.is_section]
    fibers = [c for c in comps if c.cls.is_fiber]
    others = [c for c in comps if not _is_ruling(c)]
    fired = set()
    if len(comps) == 3 and _all_even(comps):
        for i, ruling in enumerate(comps):
            if not _is_ruling(ruling):
                continue
            x, y = (c for j, c in enumerate(comps) if j != i)
            if _meet(x, y) and _meet(ruling, x) and _meet(ruling, y):
                fired.add("L32")
    if len(comps) == 4 and len(others) == 1:
        h = others[0]
        for pair, single in ((sections, fibers), (fibers, sections)):
            if (
                len(pair) == 2
                and len(single) == 1
                and (pair[0].multiplicity * pair[1].multiplicity) % 2 == 0
                and h.multiplicity % 2 == 0
                and single[0].multiplicity % 2 == 0
            ):
                fired.add("L36")
    if len(comps) == 4 and len(sections) == 1 and len(fibers) == 1 and len(others) == 2:
        if (
            _all_even(sections + fibers)
            and (others[0].multiplicity * others[1].multiplicity) % 2 == 0
        ):
            fired.add("L37")
    if len(comps) == 5 and len(sections) == 2 and len(fibers) == 2 and len(others) == 1:
        if (
            sections[0].multiplicity != sections[1].multiplicity
            or fibers[0].multiplicity != fibers[1].multiplicity
        ):
            fired.add("L38")
    return fired


def _horizontal_pairs(branch: BranchClass) -> set[str]:
    if branch.n < 1 or not _all_even(branch):
        return set()
    sections = [c for c in branch if c.cls.is_section]
    fibers = [c for c in branch if c.cls.is_fiber]
    others = [c for c in branch if not _is_ruling(c)]
    if len(others) != 2:
        return set()
    fired = set()
    if len(sections) <= 1 and len(fibers) == 1 and _meet(*others):
        fired.add("L39")
    if len(sections) == 1 and not fibers and all(_meet(sections[0], h) for h in others):
        fired.add("L41")
    return fired


def _order_rules(branch: BranchClass, order: int) -> set[str]:
    comps = branch.components
    fired = set()
    for i, comp in enumerate(comps):
        if comp.multiplicity == order and any(
            _meet(comp, other) for j, other in enumerate(comps) if j != i
        ):
            fired.add("L28")
    for comp in comps:
        scaled = Fraction(order * comp.cls.self_intersection, comp.multiplicity**2)
        if scaled.denominator != 1 or scaled.numerator % 2:
            fired.add("L40")
    for i, j in combinations(range(len(comps)), 2):
        bi, bj = comps[i].multiplicity, comps[j].multiplicity
        if not _meet(comps[i], comps[j]) or gcd(bi, bj) != 1 or bi * bj != order:
            continue
        for k, third in enumerate(comps):
            if k in (i, j):
                continue
            for s in (comps[i], comps[j]):
                if _meet(s, third) and gcd(s.multiplicity, third.multiplicity) != 1:
                    fired.add("L33")
    return fired


_SHAPE_RULES: tuple[Callable[[BranchClass], set[str]], ...] = (
    _section_normalization,
    _meeting_pair,
    _triangle,
    _quadric_patterns,
    _horizontal_pairs,
)


def generic_group(branch: BranchClass) -> Optional[FiniteAbelianGroup]:
    """Group forced by the stabilizers: one curve, or two curves that meet."""
    comps = branch.components
    if len(comps) == 1:
        return FiniteAbelianGroup.of(comps[0].multiplicity)
    if len(comps) == 2 and _meet(*comps):
        return FiniteAbelianGroup.of(comps[0].multiplicity, comps[1].multiplicity)
    return None


def fired_rules(branch: BranchClass, group_order: Optional[int] = None) -> frozenset[str]:
    fired: set[str] = set()
    for shape_rule in _SHAPE_RULES:
        fired |= shape_rule(branch)
    if group_order is not None:
        fired |= _order_rules(branch, group_order)
    return frozenset(fired)


def apply_generic_rules(branch: BranchClass, group_order: Optional[int] = None) -> Verdict:
    """Rejected if any numerical rule fires, otherwise Undecided.

    Rules that need ``|G|`` (L28, L33, L40) run only when ``group_order`` is given.
    """
    fired = fired_rules(branch, group_order)
    return Rejected(fired) if fired else Undecided()


def tentative_order(branch: BranchClass) -> Optional[int]:
    group = generic_group(branch)
    return group.order if group is not None else None


def solve_exceptional_equation(
    weights: Sequence[Fraction],
    level: int,
    allowed_orders: Iterable[int] = NON_SYMPLECTIC_ORDERS,
    exclusivity_groups: Iterable[Iterable[int]] = (),
) -> set[tuple[tuple[int, ...], int]]:
    """Solve ``level + (beta-1)/beta == sum(w_j * a_j)`` over nonnegative integers.

    Indices inside an exclusivity group (0-based) take values 0 or 1 with at
    most one of them nonzero; ungrouped coefficients are free. ``beta``
    ranges over ``allowed_orders`` and 1.
    """
    if level not in (1, 2):
        raise ValueError(f"level must be 1 or 2, got {level}")
    weights = [Fraction(w) for w in weights]
    if any(not (Fraction(1, 2) <= w < 1) for w in weights):
        raise ValueError("weights must lie in [1/2, 1)")
    groups = [sorted(set(g)) for g in exclusivity_groups]
    grouped = {i for g in groups for i in g}
    if any(i < 0 or i >= len(weights) for i in grouped):
        raise ValueError("exclusivity group index out of range")
    betas = set(allowed_orders) | {1}
    ceiling = level + 1

    group_choices = [[None, *g] for g in groups]
    free = [i for i in range(len(weights)) if i not in grouped]
    free_ranges = [range(int(ceiling / weights[i]) + 1) for i in free]

    solutions: set[tuple[tuple[int, ...], int]] = set()
    for picks in product(*group_choices):
        for counts in product(*free_ranges):
            coeffs = [0] * len(weights)
            for index in picks:
                if index is not None:
                    coeffs[index] = 1
            for index, count in zip(free, counts):
                coeffs[index] = count
            total = sum((w * a for w, a in zip(weights, coeffs)), Fraction(0))
            excess = total - level
            if not (0 <= excess < 1):
                continue
            beta = 1 / (1 - excess)
            if beta.denominator == 1 and int(beta) in betas:
                solutions.add((tuple(coeffs), int(beta)))
    return solutions


@dataclass(frozen=True)
class VerdictRow:
    class_id: ClassId
    verdict: Verdict
    citation: str


@dataclass
class VerdictTable:
    rows: dict[ClassId, VerdictRow] = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str) -> VerdictTable:
        table = cls()
        for line_num, raw in enumerate(text.splitlines(), 1):
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            fields = raw.split("\t")
            if len(fields) != 4:
                raise ParseError("expected 4 tab-separated fields", line_num)
            raw_id, kind, payload, citation = (f.strip() for f in fields)
            class_id = ClassId.parse(raw_id)
            if class_id in table.rows:
                raise ParseError(f"duplicate verdict for {class_id}", line_num)
            verdict: Verdict
            if kind == "admissible":
                verdict = Admissible(parse_group_spec(payload))
            elif kind == "rejected":
                codes = frozenset(code.strip() for code in payload.split(",") if code.strip())
                for code in codes:
                    rule_citation(code)
                verdict = Rejected(codes)
            elif kind == "undecided":
                verdict = Undecided()
            else:
                raise ParseError(f"unknown verdict {kind!r}", line_num)
            table.rows[class_id] = VerdictRow(class_id, verdict, citation)
        return table

    @classmethod
    def load(cls, path: Path) -> VerdictTable:
        return _load_table(Path(path))

    def __contains__(self, class_id: object) -> bool:
        return class_id in self.rows

    def __getitem__(self, class_id: ClassId) -> VerdictRow:
        try:
            return self.rows[class_id]
        except KeyError:
            raise UnknownClass(str(class_id)) from None

    def get(self, class_id: ClassId) -> Verdict:
        row = self.rows.get(class_id)
        return row.verdict if row else Undecided()


@lru_cache(maxsize=8)
def _load_table(path: Path) -> VerdictTable:
    table = VerdictTable.parse(path.read_text(encoding="utf-8"))
    logger.debug("loaded %d verdict rows from %s", len(table.rows), path)
    return table


def default_fixture() -> Fixture:
    return load_fixture(DataPaths.from_env().fixtures)


def default_verdicts() -> VerdictTable:
    return VerdictTable.load(DataPaths.from_env().verdicts)


def resolve_class(
    branch: Union[BranchClass, ClassId], fixture: Optional[Fixture] = None
) -> tuple[ClassId, BranchClass]:
    if fixture is None:
        fixture = default_fixture()
    if isinstance(branch, ClassId):
        return branch, fixture[branch]
    class_id = fixture.lookup(branch)
    if class_id is None:
        raise UnknownClass(str(branch))
    return class_id, fixture[class_id]


def final_verdict(
    branch: Union[BranchClass, ClassId],
    fixture: Optional[Fixture] = None,
    table: Optional[VerdictTable] = None,
) -> Verdict:
    class_id, resolved = resolve_class(branch, fixture)
    if table is None:
        table = default_verdicts()
    curated = table.get(class_id)
    generic = apply_generic_rules(resolved, tentative_order(resolved))
    if isinstance(generic, Rejected) and not (
        isinstance(curated, Rejected) and generic.rules <= curated.rules
    ):
        logger.warning("%s: generic rules %s contradict curated %s", class_id, generic, curated)
    return curated


@dataclass(frozen=True)
class ConsistencyIssue:
    class_id: ClassId
    message: str

    def __str__(self) -> str:
        return f"{self.class_id}: {self.message}"


def check_consistency(
    fixture: Optional[Fixture] = None, table: Optional[VerdictTable] = None
) -> list[ConsistencyIssue]:
    """Every generic rejection must appear in the curated rejection."""
    if fixture is None:
        fixture = default_fixture()
    if table is None:
        table = default_verdicts()
    issues: list[ConsistencyIssue] = []
    for class_id in fixture.ids():
        branch = fixture[class_id]
        if class_id not in table:
            issues.append(ConsistencyIssue(class_id, "no curated verdict"))
            continue
        curated = table[class_id].verdict
        order = (
            curated.group.order if isinstance(curated, Admissible) else tentative_order(branch)
        )
        generic = apply_generic_rules(branch, order)
        if not isinstance(generic, Rejected):
            continue
        if isinstance(curated, Admissible):
            issues.append(
                ConsistencyIssue(class_id, f"generic {generic} against curated {curated}")
            )
        elif isinstance(curated, Rejected):
            missing = generic.rules - curated.rules
            if missing:
                issues.append(
                    ConsistencyIssue(
                        class_id, "curated rejection lacks " + ",".join(sorted(missing))
                    )
                )
        else:
            issues.append(ConsistencyIssue(class_id, f"generic {generic} but curated undecided"))
    for class_id in table.rows:
        if class_id not in fixture:
            issues.append(ConsistencyIssue(class_id, "verdict row for unknown class"))
    return issues
