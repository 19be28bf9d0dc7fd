"""Batch command-line front end.

Exit codes: 0 when the report was produced and agrees with the shipped
data, 1 when a completed computation found a discrepancy, 2 on usage or
data errors.
"""

from __future__ import annotations

import json
import logging
import sys
from collections.abc import Callable, Sequence
from fractions import Fraction
from typing import Any, Optional

import click

from k3quot import __version__
from k3quot.cli.tables import Column, render_table
from k3quot.core.abelian import FiniteAbelianGroup, fenchel_abelian_p1, parse_group_spec
from k3quot.core.classes import (
    BranchClass,
    ClassId,
    Fixture,
    canonical_defect,
    duplicate_report,
    format_class,
    format_fixture_line,
    load_fixture,
)
from k3quot.core.lattices import SymplecticReport, check_all_symplectic_tables, check_symplectic_tables
from k3quot.engine.enriques import (
    AGE,
    catalog_AGE,
    check_enriques_consistency,
    compare_enriques_catalogs,
    enriques_candidate_ids,
    enriques_cover_order_check,
    enriques_verdict,
    observed_enriques_catalog,
)
from k3quot.engine.enumeration import (
    MAX_N,
    compare_with_fixture,
    enumerate_branch_classes,
    sorted_classes,
)
from k3quot.engine.groups import (
    AG,
    INFINITY,
    CatalogDiff,
    catalog_AG,
    compare_catalogs,
    deduce_group,
    observed_catalog,
)
from k3quot.engine.rules import (
    NON_SYMPLECTIC_ORDERS,
    Admissible,
    Rejected,
    apply_generic_rules,
    check_consistency,
    default_fixture,
    default_verdicts,
    final_verdict,
    rule_citation,
    solve_exceptional_equation,
    tentative_order,
)
from k3quot.engine.towers import (
    AssertedStep,
    BaseChangeCyclic,
    BaseChangeKlein,
    CoverPlan,
    CyclicCover,
    FiberProduct,
    PlanReport,
    plan_tower,
    verify_all,
    verify_plan,
)
from k3quot.errors import EmptyCatalog, K3QuotError, PlanError
from k3quot.settings import DataPaths

LOG_FORMAT = "%(name)s:%(levelname)s:%(message)s"
_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)

OK = 0
DISCREPANCY = 1
USAGE = 2

_format_option = click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json"]),
    default="text",
    show_default=True,
)


def _table_options(func: Callable[..., int]) -> Callable[..., int]:
    """``-p/--parsable`` and ``--noheader`` for commands that print a text table."""
    func = click.option("--noheader", is_flag=True, help="Omit the header and dash rows.")(func)
    return click.option("-p", "--parsable", is_flag=True, help="Join cells with |.")(func)


def _emit_json(payload: Any) -> None:
    click.echo(json.dumps(payload, indent=2))


def _class_id(_ctx, _param, value: Optional[str]) -> Optional[ClassId]:
    if value is None:
        return None
    try:
        return ClassId.parse(value)
    except K3QuotError as e:
        raise click.BadParameter(str(e)) from e


def _int_list(_ctx, _param, value: Optional[str]) -> Optional[list[int]]:
    if value is None:
        return None
    try:
        return [int(token) for token in value.split(",") if token.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}") from None


def _fraction_list(_ctx, _param, value: str) -> list[Fraction]:
    try:
        return [Fraction(token.strip()) for token in value.split(",") if token.strip()]
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"expected comma-separated fractions, got {value!r}") from None


def _index_groups(_ctx, _param, value: Optional[str]) -> list[list[int]]:
    """``1,2;3,4`` (1-based on the command line) to 0-based index lists."""
    if not value:
        return []
    groups: list[list[int]] = []
    for chunk in value.split(";"):
        try:
            indices = [int(token) for token in chunk.split(",") if token.strip()]
        except ValueError:
            raise click.BadParameter(f"bad index group {chunk!r}") from None
        if any(i < 1 for i in indices):
            raise click.BadParameter("indices start at 1")
        groups.append([i - 1 for i in indices])
    return groups


@click.group()
@click.option("-v", "--verbose", count=True, help="Repeat for more log output.")
@click.version_option(version=__version__, prog_name="k3q")
def cli(verbose: int) -> None:
    """Branch divisors of abelian K3 covers of Hirzebruch surfaces."""
    logging.basicConfig(format=LOG_FORMAT)
    logging.getLogger("k3quot").setLevel(_LEVELS[min(verbose, len(_LEVELS) - 1)])


def _fixture(fixtures: Optional[str] = None) -> Fixture:
    if fixtures is None:
        return default_fixture()
    return load_fixture(DataPaths.from_env(fixtures).fixtures)


@cli.command("enumerate")
@click.option("--n", "n", type=click.IntRange(min=0), help="Hirzebruch index.")
@click.option("--all", "all_", is_flag=True, help=f"Every n from 0 to {MAX_N}.")
@_format_option
@_table_options
@click.option("--fixtures", type=click.Path(exists=True, dir_okay=False), help="Golden list.")
def enumerate_cmd(
    n: Optional[int],
    all_: bool,
    fmt: str,
    parsable: bool,
    noheader: bool,
    fixtures: Optional[str],
) -> int:
    """Enumerate branch classes with zero canonical defect and diff against the fixture."""
    if (n is None) == (not all_):
        raise click.UsageError("give exactly one of --n or --all")
    fixture = _fixture(fixtures)
    ns = range(MAX_N + 1) if all_ else [n]
    payload = []
    code = OK
    for k in ns:
        classes = sorted_classes(enumerate_branch_classes(k))
        diff = compare_with_fixture(k, fixture, classes)
        if not diff.matches:
            code = DISCREPANCY
        named = sorted(
            ((fixture.lookup(b), b) for b in classes),
            key=lambda pair: (pair[0] is None, pair[0].sort_key if pair[0] else (), pair[1].key),
        )
        payload.append((k, named, diff))

    if fmt == "json":
        documents = [
            {
                "n": k,
                "classes": [
                    {
                        "id": str(cid) if cid else None,
                        "class": format_class(b),
                        "line": format_fixture_line(cid, b) if cid else None,
                    }
                    for cid, b in named
                ],
                "diff": diff.to_dict(),
            }
            for k, named, diff in payload
        ]
        _emit_json(documents if all_ else documents[0])
        return code

    for k, named, diff in payload:
        if not all_:
            rows = [[str(cid) if cid else "-", format_class(b)] for cid, b in named]
            columns = [Column("ID", -8), Column("CLASS", -20)]
            click.echo(render_table(columns, rows, parsable, noheader))
        status = "match" if diff.matches else "DIFF"
        click.echo(f"F_{k}: {diff.enumerated} enumerated, {diff.fixture} in fixture, {status}")
        for text in diff.missing_from_fixture:
            click.echo(f"  not in fixture: {text}")
        for cid in diff.not_enumerated:
            click.echo(f"  not enumerated: {cid}")
    return code


def _verdict_row(class_id: ClassId, fixture: Fixture) -> dict[str, str]:
    branch = fixture[class_id]
    verdict = final_verdict(class_id, fixture)
    row = {"ID": str(class_id), "CLASS": format_class(branch), "VERDICT": "undecided"}
    if isinstance(verdict, Admissible):
        deduced = deduce_group(class_id, fixture)
        row.update(VERDICT="admissible", GROUP=deduced.group.label, BASIS=deduced.provenance.value)
    elif isinstance(verdict, Rejected):
        codes = sorted(verdict.rules)
        row.update(
            VERDICT="rejected",
            RULES=",".join(codes),
            BASIS="; ".join(rule_citation(code) for code in codes),
        )
    return row


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=0), help="Hirzebruch index.")
@click.option("--check", is_flag=True, help="Cross-check generic rules against curated verdicts.")
@_format_option
@_table_options
def classify(n: Optional[int], check: bool, fmt: str, parsable: bool, noheader: bool) -> int:
    """Verdict table for the fixture classes on F_n."""
    if (n is None) == (not check):
        raise click.UsageError("give exactly one of --n or --check")
    fixture = default_fixture()
    if check:
        issues = [
            *check_consistency(fixture),
            *check_enriques_consistency(fixture),
            *enriques_cover_order_check(fixture),
        ]
        if fmt == "json":
            _emit_json({"issues": [str(issue) for issue in issues]})
        else:
            for issue in issues:
                click.echo(str(issue))
            click.echo(f"{len(fixture)} classes checked, {len(issues)} issues")
        return DISCREPANCY if issues else OK

    rows = [_verdict_row(cid, fixture) for cid in fixture.ids(n)]
    admissible = [row["ID"] for row in rows if row["VERDICT"] == "admissible"]
    if fmt == "json":
        _emit_json({"n": n, "classes": rows, "admissible": admissible})
        return OK
    columns = [
        Column("ID", -8),
        Column("CLASS", -20),
        Column("VERDICT", -10),
        Column("GROUP", -6),
        Column("RULES", -6),
        Column("BASIS", -40, truncate=True),
    ]
    click.echo(render_table(columns, rows, parsable, noheader))
    click.echo(f"F_{n}: {len(rows)} classes, {len(admissible)} admissible")
    return OK


def _labels(groups: Sequence[FiniteAbelianGroup]) -> str:
    return ", ".join(g.label for g in groups) or "-"


def _union_diff(target: str) -> CatalogDiff:
    if target == "k3":
        computed = set(catalog_AG(INFINITY))
        for k in range(MAX_N + 1):
            computed |= observed_catalog(k)
        return CatalogDiff("all", frozenset(computed), AG)
    computed = set(catalog_AGE(INFINITY))
    for k in range(MAX_N + 1):
        computed |= observed_enriques_catalog(k)
    return CatalogDiff("all", frozenset(computed), AGE)


@cli.command()
@click.option("--target", type=click.Choice(["k3", "enriques"]), default="k3", show_default=True)
@click.option("--n", "n", type=click.IntRange(min=0), help="Hirzebruch index.")
@click.option("--strict", is_flag=True, help="Fail when no catalog exists for --n.")
@_format_option
@_table_options
def catalog(
    target: str, n: Optional[int], strict: bool, fmt: str, parsable: bool, noheader: bool
) -> int:
    """Compare the groups of admissible classes with the published catalogs."""
    compare = compare_catalogs if target == "k3" else compare_enriques_catalogs
    if n is not None:
        expected = catalog_AG(n) if target == "k3" else catalog_AGE(n)
        if strict and not expected:
            raise EmptyCatalog(n)
        diffs = [compare(n)]
    else:
        diffs = [*(compare(k) for k in range(MAX_N + 1)), _union_diff(target)]

    code = OK if all(d.matches for d in diffs) else DISCREPANCY
    if fmt == "json":
        _emit_json({"target": target, "catalogs": [d.to_dict() for d in diffs]})
        return code
    rows = [
        {
            "N": str(d.n),
            "STATUS": "match" if d.matches else "DIFF",
            "GROUPS": _labels(sorted(d.computed)),
            "MISSING": _labels(d.missing),
            "EXTRA": _labels(d.extra),
        }
        for d in diffs
    ]
    columns = [
        Column("N", 3),
        Column("STATUS", -6),
        Column("GROUPS", -10),
        Column("MISSING", -7),
        Column("EXTRA", -5),
    ]
    click.echo(render_table(columns, rows, parsable, noheader))
    return code


def _lattice_rows(reports: Sequence[SymplecticReport]) -> list[list[str]]:
    return [
        [
            r.group.label,
            r.root_spec,
            str(r.rank),
            str(r.tabulated_rank),
            str(r.det_abs),
            str(r.index),
            str(r.consistency_value),
            r.tabulated_discriminant.label,
            r.status,
        ]
        for r in reports
    ]


@cli.command()
@click.option("--group", "group_spec", help="Group spec such as Z2^3 or Z2xZ4.")
@click.option("--check-all", is_flag=True, help="Check every tabulated group.")
@_format_option
@_table_options
def lattice(
    group_spec: Optional[str], check_all: bool, fmt: str, parsable: bool, noheader: bool
) -> int:
    """Check root lattice ranks and determinants against the symplectic tables."""
    if (group_spec is None) == (not check_all):
        raise click.UsageError("give exactly one of --group or --check-all")
    if check_all:
        reports = check_all_symplectic_tables()
    else:
        reports = [check_symplectic_tables(parse_group_spec(group_spec))]
    code = OK if all(r.consistent for r in reports) else DISCREPANCY
    if fmt == "json":
        _emit_json([r.to_dict() for r in reports])
        return code
    columns = [
        Column("GROUP", -6),
        Column("E_G", -14),
        Column("RANK", 4),
        Column("M_G", 3),
        Column("|DET|", 5),
        Column("R", 2),
        Column("DET/R^2", 7),
        Column("DISC M_G", -8),
        Column("STATUS", -11),
    ]
    click.echo(render_table(columns, _lattice_rows(reports), parsable, noheader))
    return code


def describe_step(step: Any) -> str:
    if isinstance(step, BaseChangeCyclic):
        return (
            f"cyclic base change of degree {step.degree} along the {step.ruling} ruling, "
            f"branched fibres {step.branched}"
        )
    if isinstance(step, BaseChangeKlein):
        return f"Klein base change along the {step.ruling} ruling, branched fibres {step.branched}"
    if isinstance(step, CyclicCover):
        return f"cyclic cover of degree {step.degree} branched along {step.branch}"
    if isinstance(step, FiberProduct):
        return "fibre product of " + " and ".join(
            f"degree {c.degree} along {c.branch}" for c in step.covers
        )
    if isinstance(step, AssertedStep):
        return f"asserted cover of degree {step.degree}: {step.citation}"
    raise TypeError(step)


def _echo_plan(plan: CoverPlan) -> None:
    click.echo(f"{plan.class_id}: {plan.group} ({plan.provenance})")
    click.echo(f"  branch {plan.branch}")
    if plan.lineage:
        click.echo("  through " + " -> ".join(plan.lineage))
    for index, step in enumerate(plan.steps, 1):
        click.echo(f"  {index}. {describe_step(step)}")


def _echo_report(report: PlanReport) -> None:
    line = f"{report.class_id}: {report.status} (degree {report.degree}, |G| = {report.group_order})"
    if report.failed_step is not None:
        line += f" at step {report.failed_step}"
    click.echo(line)
    if report.reason:
        click.echo(f"  {report.reason}")
    for assertion in report.assertions:
        click.echo(f"  assumed {assertion}")


@cli.command()
@click.option("--class", "class_id", callback=_class_id, help="Class id such as F1-77.")
@click.option("--verify", is_flag=True, help="Walk the plan and check every step.")
@click.option("--all", "all_", is_flag=True, help="Verify every shipped plan.")
@_format_option
@_table_options
def plan(
    class_id: Optional[ClassId],
    verify: bool,
    all_: bool,
    fmt: str,
    parsable: bool,
    noheader: bool,
) -> int:
    """Show (and verify) the cover tower realizing an admissible class."""
    if (class_id is None) == (not all_):
        raise click.UsageError("give exactly one of --class or --all")
    if all_:
        reports = verify_all()
        code = OK if all(r.ok for r in reports) else DISCREPANCY
        if fmt == "json":
            _emit_json([r.model_dump() for r in reports])
            return code
        rows = [
            [r.class_id, r.status, r.group, str(r.degree), str(r.failed_step or ""), r.reason or ""]
            for r in reports
        ]
        columns = [
            Column("ID", -8),
            Column("STATUS", -6),
            Column("GROUP", -6),
            Column("DEGREE", 6),
            Column("STEP", 4),
            Column("REASON", -6),
        ]
        click.echo(render_table(columns, rows, parsable, noheader))
        return code

    tower = plan_tower(class_id)
    report = verify_plan(tower) if verify else None
    code = DISCREPANCY if report is not None and not report.ok else OK
    if fmt == "json":
        document: dict[str, Any] = {"plan": tower.model_dump(mode="json", exclude={"from_"})}
        if report is not None:
            document["report"] = report.model_dump(mode="json")
        _emit_json(document)
        return code
    _echo_plan(tower)
    if report is not None:
        _echo_report(report)
    return code


@cli.command()
@click.option("--mults", required=True, callback=_int_list, help="Branch indices, e.g. 2,2,2.")
def fenchel(mults: list[int]) -> int:
    """Abelian Galois group of a cover of P^1 with these branch indices."""
    try:
        group = fenchel_abelian_p1(mults)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--mults") from e
    click.echo(group.label if group is not None else "none")
    return OK


def _plan_status(class_id: ClassId) -> str:
    try:
        return verify_plan(plan_tower(class_id)).status
    except PlanError as e:
        return f"no plan ({e})"


@cli.command()
@click.option("--class", "class_id", required=True, callback=_class_id, help="Class id.")
def show(class_id: ClassId) -> int:
    """Everything known about one fixture class."""
    fixture = default_fixture()
    branch: BranchClass = fixture[class_id]
    click.echo(format_fixture_line(class_id, branch))
    click.echo(f"canonical defect: {canonical_defect(branch)}")
    click.echo(f"generic rules: {apply_generic_rules(branch, tentative_order(branch))}")
    verdict = final_verdict(class_id, fixture)
    click.echo(f"curated: {verdict} ({default_verdicts()[class_id].citation})")
    if isinstance(verdict, Admissible):
        deduced = deduce_group(class_id, fixture)
        click.echo(f"group: {deduced.group} ({deduced.provenance.value})")
        click.echo(f"plan: {_plan_status(class_id)}")
        if class_id in enriques_candidate_ids(class_id.n, fixture):
            click.echo(f"enriques: {enriques_verdict(class_id, fixture)}")
    return OK


@cli.command()
def duplicates() -> int:
    """Fixture classes that coincide after canonicalization."""
    report = duplicate_report(default_fixture())
    for ids in report:
        click.echo(" = ".join(str(cid) for cid in ids))
    if not report:
        click.echo("no duplicates")
    return DISCREPANCY if report else OK


@cli.command()
@click.option("--weights", required=True, callback=_fraction_list, help="e.g. 1/2,2/3,5/6.")
@click.option("--level", type=click.IntRange(1, 2), required=True)
@click.option(
    "--orders",
    callback=_int_list,
    default=",".join(str(m) for m in sorted(NON_SYMPLECTIC_ORDERS)),
    show_default=True,
    help="Allowed stabilizer orders.",
)
@click.option("--groups", callback=_index_groups, help="Exclusive indices, 1-based: 1,2;3,4.")
@_table_options
def exceptional(
    weights: list[Fraction],
    level: int,
    orders: list[int],
    groups: list[list[int]],
    parsable: bool,
    noheader: bool,
) -> int:
    """Solve the exceptional-curve equation sum(w_j a_j) = level + (beta-1)/beta."""
    try:
        solutions = solve_exceptional_equation(weights, level, orders, groups)
    except ValueError as e:
        raise click.BadParameter(str(e)) from e
    if not solutions:
        click.echo("no solutions")
        return OK
    rows = [[",".join(map(str, coeffs)), str(beta)] for coeffs, beta in sorted(solutions)]
    columns = [Column("COEFFICIENTS", -12), Column("BETA", 4)]
    click.echo(render_table(columns, rows, parsable, noheader))
    return OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code instead of exiting."""
    try:
        result = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="k3q",
            standalone_mode=False,
        )
    except click.ClickException as e:
        e.show()
        return USAGE
    except click.Abort:
        click.echo("Aborted!", err=True)
        return USAGE
    except K3QuotError as e:
        click.echo(f"error: {e}", err=True)
        return USAGE
    return result if isinstance(result, int) else OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
