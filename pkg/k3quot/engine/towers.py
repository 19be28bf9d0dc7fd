"""Cover towers over Hirzebruch surfaces.

A plan is a sequence of steps read in pullback order: base changes of the
P^1 base first, then cyclic covers (or fiber products of them) branched
along components of the pulled-back branch divisor, plus asserted steps
for covers that live above the Hirzebruch level. Verification tracks each
branch component as ``(multiplicity, a, b, e)`` where ``e`` is the
ramification already absorbed over it.

A cyclic cover of degree k branched along ``sum(D_i)`` exists when the
class ``sum(D_i / e_i) / k`` lies in the lattice spanned by Pic and the
classes ``D / e`` of every component ramified so far.

Plans are stored as YAML under ``data/plans`` so they can carry comments.
The document model is the one ``k3q plan --format json`` emits via
``model_dump``; since YAML parses JSON, a plan file may also be plain JSON.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from k3quot.core.abelian import parse_group_spec
from k3quot.core.classes import BranchClass, ClassId, Fixture, canonical_defect, parse_components
from k3quot.core.lattices import in_row_lattice
from k3quot.core.picard import DivisorClass
from k3quot.engine.rules import (
    Admissible,
    VerdictTable,
    default_fixture,
    default_verdicts,
    final_verdict,
)
from k3quot.errors import InvalidComponent, K3QuotError, NotAdmissible, ParseError, PlanError
from k3quot.settings import DataPaths

logger = logging.getLogger(__name__)

Ruling = Literal["C", "F"]


class _Step(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class BaseChangeCyclic(_Step):
    kind: Literal["base_change_cyclic"] = "base_change_cyclic"
    degree: int = Field(ge=2)
    ruling: Ruling = "F"
    branched: list[int] = Field(min_length=2, max_length=2)


class BaseChangeKlein(_Step):
    kind: Literal["base_change_klein"] = "base_change_klein"
    ruling: Ruling = "F"
    branched: list[int] = Field(min_length=3, max_length=3)

    @property
    def degree(self) -> int:
        return 4


class CyclicCover(_Step):
    kind: Literal["cyclic_cover"] = "cyclic_cover"
    degree: int = Field(ge=2)
    branch: str


class CoverFactor(_Step):
    degree: int = Field(ge=2)
    branch: str


class FiberProduct(_Step):
    kind: Literal["fiber_product"] = "fiber_product"
    covers: list[CoverFactor] = Field(min_length=2)

    @property
    def degree(self) -> int:
        return prod(c.degree for c in self.covers)


class AssertedStep(_Step):
    kind: Literal["asserted"] = "asserted"
    degree: int = Field(ge=2)
    citation: str = Field(min_length=1)


CoverStep = Annotated[
    Union[BaseChangeCyclic, BaseChangeKlein, CyclicCover, FiberProduct, AssertedStep],
    Field(discriminator="kind"),
]


class CoverPlan(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    class_id: str
    group: str
    provenance: Literal["curated", "curated-interpolated"] = "curated"
    branch: str
    from_: Optional[str] = Field(default=None, alias="from")
    steps: list[CoverStep] = Field(default_factory=list)
    lineage: list[str] = Field(default_factory=list)

    @property
    def degree(self) -> int:
        return prod(step.degree for step in self.steps)

    @property
    def ambient(self) -> int:
        return ClassId.parse(self.class_id).n


class PlanReport(BaseModel):
    class_id: str
    status: Literal["PASS", "FAIL", "PASS-WITH-ASSERTIONS"]
    failed_step: Optional[int] = None
    reason: Optional[str] = None
    assertions: list[str] = Field(default_factory=list)
    degree: int
    group: str
    group_order: int
    steps: int

    @property
    def ok(self) -> bool:
        return self.status != "FAIL"


def pullback_class(cls: DivisorClass, degree: int, ruling: Ruling = "F") -> DivisorClass:
    """Pull back along a degree-``degree`` base change of the ``ruling`` fibration.

    For the F ruling this is ``p*C_n = C_{mn}`` and ``p*F_n = m F_{mn}``.
    """
    if ruling == "F":
        return DivisorClass(cls.n * degree, cls.a, degree * cls.b)
    if cls.n != 0:
        raise PlanError("the C ruling only exists on F_0")
    return DivisorClass(0, degree * cls.a, cls.b)


@dataclass
class _Tracked:
    multiplicity: int
    a: int
    b: int
    ramification: int = 1

    def label(self) -> str:
        return f"{self.multiplicity}*({self.a},{self.b})"


class _StepFailure(Exception):
    pass


def _format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class _Walker:
    def __init__(self, n: int, branch: BranchClass):
        self.n = n
        self.tracked = [_Tracked(c.multiplicity, c.cls.a, c.cls.b) for c in branch]
        self.absorbed: list[_Tracked] = []
        self.covered = False
        self.degree = 1

    def _check_defect(self) -> None:
        try:
            pulled = BranchClass.of(
                self.n, [(t.multiplicity, t.a, t.b) for t in self.tracked]
            )
        except InvalidComponent as e:
            raise _StepFailure(f"pulled-back branch is not a branch class: {e}") from e
        if not canonical_defect(pulled).is_zero:
            raise _StepFailure(f"canonical defect {canonical_defect(pulled)} after base change")

    def base_change(self, degree: int, ruling: Ruling, branched: list[int], klein: bool) -> None:
        if self.covered:
            raise _StepFailure("base change after a cover")
        if ruling == "C" and self.n != 0:
            raise _StepFailure(f"F_{self.n} has no C ruling")
        fiber = (0, 1) if ruling == "F" else (1, 0)
        index = 2 if klein else degree
        preimages = degree // index
        used: set[int] = set()
        pulled: list[_Tracked] = []
        for mult in branched:
            j = next(
                (
                    i
                    for i, t in enumerate(self.tracked)
                    if i not in used and t.multiplicity == mult and (t.a, t.b) == fiber
                ),
                None,
            )
            if j is None:
                raise _StepFailure(f"no branched fibre {mult}*{fiber} in the branch")
            if mult % index:
                raise _StepFailure(f"fibre multiplicity {mult} not divisible by {index}")
            used.add(j)
            if mult // index > 1:
                pulled.extend(_Tracked(mult // index, *fiber) for _ in range(preimages))
        for i, t in enumerate(self.tracked):
            if i in used:
                continue
            if (t.a, t.b) == fiber:
                pulled.extend(_Tracked(t.multiplicity, t.a, t.b) for _ in range(degree))
            else:
                image = pullback_class(DivisorClass(self.n, t.a, t.b), degree, ruling)
                pulled.append(_Tracked(t.multiplicity, image.a, image.b))
        self.tracked = pulled
        self.n = self.n * degree if ruling == "F" else 0
        self.degree *= degree
        self._check_defect()

    def _lattice(self) -> list[tuple[Fraction, Fraction]]:
        gens = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
        for t in [*self.tracked, *self.absorbed]:
            if t.ramification > 1:
                gens.append((Fraction(t.a, t.ramification), Fraction(t.b, t.ramification)))
        return gens

    def cover(self, factors: list[tuple[int, str]]) -> None:
        gens = self._lattice()
        marked: set[int] = set()
        updates: list[tuple[int, int]] = []
        for k, text in factors:
            try:
                comps = parse_components(text, self.n)
            except K3QuotError as e:
                raise _StepFailure(f"bad cover branch {text!r}: {e}") from e
            vx = vy = Fraction(0)
            for comp in comps:
                candidates = sorted(
                    (
                        (t.ramification, i)
                        for i, t in enumerate(self.tracked)
                        if i not in marked
                        and t.multiplicity == comp.multiplicity
                        and (t.a, t.b) == (comp.cls.a, comp.cls.b)
                    ),
                )
                if not candidates:
                    raise _StepFailure(f"component {comp} is not in the current branch")
                _, j = candidates[0]
                t = self.tracked[j]
                if t.multiplicity % k:
                    raise _StepFailure(f"multiplicity of {t.label()} not divisible by {k}")
                vx += Fraction(t.a, t.ramification)
                vy += Fraction(t.b, t.ramification)
                marked.add(j)
                updates.append((j, k))
            if not in_row_lattice(gens, (vx / k, vy / k)):
                raise _StepFailure(
                    f"class ({_format_fraction(vx)},{_format_fraction(vy)}) not divisible by {k}"
                )
        for j, k in updates:
            self.tracked[j].multiplicity //= k
            self.tracked[j].ramification *= k
        self.absorbed.extend(t for t in self.tracked if t.multiplicity == 1)
        self.tracked = [t for t in self.tracked if t.multiplicity > 1]
        self.covered = True
        self.degree *= prod(k for k, _ in factors)


def verify_plan(plan: CoverPlan) -> PlanReport:
    """Walk the steps of a resolved plan (see :func:`plan_tower`)."""
    if plan.from_ is not None:
        raise PlanError(f"{plan.class_id}: resolve the parent plan {plan.from_} first")
    group = parse_group_spec(plan.group)
    report = {
        "class_id": plan.class_id,
        "group": group.label,
        "group_order": group.order,
        "steps": len(plan.steps),
    }
    walker = _Walker(plan.ambient, parse_components(plan.branch, plan.ambient))
    assertions: list[str] = []

    def failed(step: Optional[int], reason: str) -> PlanReport:
        logger.info("%s: plan fails at step %s: %s", plan.class_id, step, reason)
        return PlanReport(
            status="FAIL",
            failed_step=step,
            reason=reason,
            assertions=assertions,
            degree=walker.degree,
            **report,
        )

    for index, step in enumerate(plan.steps, 1):
        try:
            if isinstance(step, BaseChangeCyclic):
                walker.base_change(step.degree, step.ruling, step.branched, klein=False)
            elif isinstance(step, BaseChangeKlein):
                walker.base_change(4, step.ruling, step.branched, klein=True)
            elif isinstance(step, CyclicCover):
                walker.cover([(step.degree, step.branch)])
            elif isinstance(step, FiberProduct):
                walker.cover([(c.degree, c.branch) for c in step.covers])
            else:
                walker.degree *= step.degree
                assertions.append(f"step {index}: {step.citation}")
        except _StepFailure as e:
            return failed(index, str(e))

    original = parse_components(plan.branch, plan.ambient)
    if not canonical_defect(original).is_zero:
        return failed(None, f"branch {plan.branch} has nonzero canonical defect")
    if walker.tracked:
        left = " + ".join(t.label() for t in walker.tracked)
        return failed(None, f"branch components left unramified: {left}")
    if walker.degree != group.order:
        return failed(None, f"degree {walker.degree} does not match |{group.label}| = {group.order}")
    status = "PASS-WITH-ASSERTIONS" if assertions else "PASS"
    return PlanReport(status=status, assertions=assertions, degree=walker.degree, **report)


def load_plan(path: Path) -> CoverPlan:
    try:
        document = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        return CoverPlan.model_validate(document)
    except (yaml.YAMLError, ValidationError) as e:
        raise PlanError(f"{path}: {e}") from e


@lru_cache(maxsize=4)
def load_plans(directory: Path) -> dict[str, CoverPlan]:
    plans: dict[str, CoverPlan] = {}
    for path in sorted(Path(directory).glob("*.yaml")):
        plan = load_plan(path)
        if plan.class_id in plans:
            raise PlanError(f"two plans for {plan.class_id}")
        plans[plan.class_id] = plan
    logger.debug("loaded %d plans from %s", len(plans), directory)
    return plans


def default_plans() -> dict[str, CoverPlan]:
    return load_plans(DataPaths.from_env().plans)


def _flatten(class_id: str, plans: dict[str, CoverPlan], seen: tuple[str, ...] = ()) -> CoverPlan:
    if class_id in seen:
        raise PlanError(f"plan cycle through {class_id}")
    try:
        plan = plans[class_id]
    except KeyError:
        raise PlanError(f"no plan for {class_id}") from None
    if plan.from_ is None:
        return plan
    parent = _flatten(plan.from_, plans, (*seen, class_id))
    return plan.model_copy(
        update={
            "from_": None,
            "steps": [*plan.steps, *parent.steps],
            "lineage": [plan.from_, *parent.lineage],
        }
    )


def plan_tower(
    class_id: ClassId,
    fixture: Optional[Fixture] = None,
    table: Optional[VerdictTable] = None,
    plans: Optional[dict[str, CoverPlan]] = None,
) -> CoverPlan:
    """The curated plan for ``class_id`` with parent plans spliced in."""
    if fixture is None:
        fixture = default_fixture()
    if table is None:
        table = default_verdicts()
    if plans is None:
        plans = default_plans()
    verdict = final_verdict(class_id, fixture, table)
    if not isinstance(verdict, Admissible):
        raise NotAdmissible(str(class_id))
    plan = _flatten(str(class_id), plans)
    try:
        written = parse_components(plan.branch, class_id.n)
    except ParseError as e:
        raise PlanError(f"{class_id}: {e}") from e
    if written.canonical() != fixture[class_id]:
        raise PlanError(f"{class_id}: plan branch {plan.branch} is not the fixture class")
    if parse_group_spec(plan.group) != verdict.group:
        raise PlanError(f"{class_id}: plan group {plan.group} is not {verdict.group}")
    return plan


def verify_all(
    fixture: Optional[Fixture] = None,
    table: Optional[VerdictTable] = None,
    plans: Optional[dict[str, CoverPlan]] = None,
) -> list[PlanReport]:
    if plans is None:
        plans = default_plans()
    return [
        verify_plan(plan_tower(ClassId.parse(class_id), fixture, table, plans))
        for class_id in sorted(plans, key=lambda c: ClassId.parse(c).sort_key)
    ]
