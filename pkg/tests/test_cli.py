"""End-to-end checks of the ``k3q`` command line through ``run(argv)``."""

import json

import pytest

from k3quot.cli.main import run
from k3quot.settings import FIXTURES_ENV


def _json(capsys):
    return json.loads(capsys.readouterr().out)


class TestEnumerate:
    def test_json_single_class(self, capsys):
        assert run(["enumerate", "--n", "12", "--format", "json"]) == 0
        doc = _json(capsys)
        assert [c["id"] for c in doc["classes"]] == ["F12-266"]
        assert doc["classes"][0]["line"].startswith("F12-266 | n=12 | ")
        assert doc["diff"]["matches"] is True

    def test_text(self, capsys):
        assert run(["enumerate", "--n", "7"]) == 0
        out = capsys.readouterr().out
        assert "F7-309" in out
        assert "F_7: 1 enumerated, 1 in fixture, match" in out

    def test_empty_base(self, capsys):
        assert run(["enumerate", "--n", "10"]) == 0
        assert "F_10: 0 enumerated, 0 in fixture, match" in capsys.readouterr().out

    def test_needs_n_or_all(self, capsys):
        assert run(["enumerate"]) == 2
        assert "--n or --all" in capsys.readouterr().err

    def test_custom_fixture_discrepancy(self, tmp_path, capsys):
        path = tmp_path / "classes.txt"
        path.write_text("F0-1 | n=0 | 3*(3,3)\n")
        assert run(["enumerate", "--n", "12", "--fixtures", str(path)]) == 1
        assert "not in fixture: 6*(1,0) + 2*(1,12) + 3*(1,12)" in capsys.readouterr().out

    def test_all_json_is_reproducible(self, capsys):
        assert run(["enumerate", "--all", "--format", "json"]) == 0
        first = capsys.readouterr().out
        assert run(["enumerate", "--all", "--format", "json"]) == 0
        assert capsys.readouterr().out == first
        assert [doc["n"] for doc in json.loads(first)] == list(range(14))


class TestClassify:
    def test_all_rejected_base(self, capsys):
        assert run(["classify", "--n", "5"]) == 0
        out = capsys.readouterr().out
        assert "F_5: 6 classes, 0 admissible" in out

    def test_json(self, capsys):
        assert run(["classify", "--n", "12", "--format", "json"]) == 0
        doc = _json(capsys)
        assert doc["admissible"] == ["F12-266"]
        assert doc["classes"][0]["GROUP"] == "Z2xZ3"

    def test_rejections_carry_citations(self, capsys):
        assert run(["classify", "--n", "0", "--format", "json"]) == 0
        rows = {row["ID"]: row for row in _json(capsys)["classes"]}
        assert rows["F0-4"]["RULES"] == "L22"
        assert rows["F0-4"]["BASIS"] == "Lemma thm:22: even pair must meet in 8 points"

    def test_parsable(self, capsys):
        assert run(["classify", "--n", "12", "--parsable"]) == 0
        assert capsys.readouterr().out.splitlines() == [
            "ID|CLASS|VERDICT|GROUP|RULES|BASIS",
            "F12-266|6*(1,0) + 2*(1,12) + 3*(1,12)|admissible|Z2xZ3||curated",
            "F_12: 1 classes, 1 admissible",
        ]

    def test_noheader(self, capsys):
        assert run(["classify", "--n", "12", "--noheader"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("F12-266 ")
        assert len(lines) == 2

    def test_consistency_check(self, capsys):
        assert run(["classify", "--check"]) == 0
        assert "0 issues" in capsys.readouterr().out

    def test_fixture_from_environment(self, tmp_path, monkeypatch, capsys):
        path = tmp_path / "only266.txt"
        path.write_text("F12-266 | n=12 | 6*(1,0) + 2*(1,12) + 3*(1,12)\n")
        monkeypatch.setenv(FIXTURES_ENV, str(path))
        assert run(["classify", "--n", "0"]) == 0
        assert "F_0: 0 classes" in capsys.readouterr().out


class TestCatalog:
    def test_single_base(self, capsys):
        assert run(["catalog", "--target", "k3", "--n", "12", "--format", "json"]) == 0
        doc = _json(capsys)
        assert doc["catalogs"][0]["computed"] == ["Z2xZ3"]

    def test_every_base(self, capsys):
        assert run(["catalog"]) == 0
        assert "DIFF" not in capsys.readouterr().out

    def test_enriques(self, capsys):
        assert run(["catalog", "--target", "enriques", "--format", "json"]) == 0
        doc = _json(capsys)
        assert all(c["matches"] for c in doc["catalogs"])
        assert doc["catalogs"][4]["computed"] == ["Z2xZ4"]

    def test_strict_empty_catalog(self, capsys):
        assert run(["catalog", "--n", "5", "--strict"]) == 2
        assert "no group catalog" in capsys.readouterr().err


class TestLattice:
    def test_check_all(self, capsys):
        assert run(["lattice", "--check-all", "--format", "json"]) == 1
        statuses = [row["status"] for row in _json(capsys)]
        assert statuses.count("CONSISTENT") == 13
        assert statuses.count("DISCREPANCY") == 1

    def test_single_group(self, capsys):
        assert run(["lattice", "--group", "z2^2"]) == 0
        assert "A1^12" in capsys.readouterr().out

    def test_bad_group(self, capsys):
        assert run(["lattice", "--group", "Q8"]) == 2
        assert "Q8" in capsys.readouterr().err


class TestPlan:
    def test_verify(self, capsys):
        assert run(["plan", "--class", "F1-77", "--verify"]) == 0
        out = capsys.readouterr().out
        assert "through F6-256" in out
        assert "F1-77: PASS (degree 18, |G| = 18)" in out

    def test_json(self, capsys):
        assert run(["plan", "--class", "F4-237", "--verify", "--format", "json"]) == 0
        doc = _json(capsys)
        assert [s["kind"] for s in doc["plan"]["steps"]] == ["cyclic_cover", "cyclic_cover"]
        assert doc["report"]["status"] == "PASS"

    def test_all(self, capsys):
        assert run(["plan", "--all", "--format", "json"]) == 0
        reports = _json(capsys)
        assert len(reports) == 77
        assert {r["status"] for r in reports} == {"PASS", "PASS-WITH-ASSERTIONS"}

    def test_rejected_class(self, capsys):
        assert run(["plan", "--class", "F0-4"]) == 2
        assert "no abelian K3 cover" in capsys.readouterr().err

    def test_malformed_id(self):
        assert run(["plan", "--class", "266"]) == 2


class TestSmallCommands:
    @pytest.mark.parametrize(
        ("mults", "expected"), [("2,2,2", "Z2^2"), ("5,5", "Z5"), ("3,4", "none")]
    )
    def test_fenchel(self, capsys, mults, expected):
        assert run(["fenchel", "--mults", mults]) == 0
        assert capsys.readouterr().out.strip() == expected

    def test_fenchel_bad_multiplicity(self):
        assert run(["fenchel", "--mults", "1,2"]) == 2

    def test_show(self, capsys):
        assert run(["show", "--class", "F4-249"]) == 0
        out = capsys.readouterr().out
        assert "canonical defect: (0,0)" in out
        assert "group: Z2^2xZ4" in out
        assert "enriques: admissible Z2xZ4" in out

    def test_duplicates(self, capsys):
        assert run(["duplicates"]) == 0
        assert "no duplicates" in capsys.readouterr().out

    def test_exceptional(self, capsys):
        argv = ["exceptional", "--weights", "2/3,1/2,1/2", "--level", "1"]
        assert run([*argv, "--orders", "2,3,6", "--groups", "2,3"]) == 0
        lines = capsys.readouterr().out.splitlines()[2:]
        assert [line.split() for line in lines] == [["2,0,1", "6"], ["2,1,0", "6"]]

    @pytest.mark.parametrize(
        ("flags", "expected"),
        [
            (["--noheader"], ["2,0,1" + " " * 11 + "6", "2,1,0" + " " * 11 + "6"]),
            (["-p"], ["COEFFICIENTS|BETA", "2,0,1|6", "2,1,0|6"]),
            (["-p", "--noheader"], ["2,0,1|6", "2,1,0|6"]),
        ],
    )
    def test_exceptional_table_modes(self, capsys, flags, expected):
        argv = ["exceptional", "--weights", "2/3,1/2,1/2", "--level", "1", "--orders", "2,3,6"]
        assert run([*argv, "--groups", "2,3", *flags]) == 0
        assert capsys.readouterr().out.splitlines() == expected

    def test_exceptional_without_solutions(self, capsys):
        argv = ["exceptional", "--weights", "1/2,3/4,3/4,2/3,2/3,2/3", "--level", "1"]
        assert run([*argv, "--orders", "2,3,4,6,12", "--groups", "1,2,3;4,5,6"]) == 0
        assert capsys.readouterr().out.strip() == "no solutions"

    def test_unknown_command(self, capsys):
        assert run(["frobnicate"]) == 2
        assert "No such command" in capsys.readouterr().err

    def test_version(self, capsys):
        assert run(["--version"]) == 0
        assert "k3q" in capsys.readouterr().out
