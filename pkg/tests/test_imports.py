"""Test that all main modules can be imported successfully."""


def test_core_modules_import():
    from k3quot.core.abelian import FiniteAbelianGroup
    from k3quot.core.classes import BranchClass
    from k3quot.core.lattices import IntegerLattice
    from k3quot.core.picard import DivisorClass

    assert FiniteAbelianGroup.of(2, 2).order == 4
    assert BranchClass is not None
    assert IntegerLattice is not None
    assert DivisorClass(0, 1, 0).a == 1


def test_engine_modules_import():
    from k3quot.engine import enriques, enumeration, groups, rules, towers

    for module in (enriques, enumeration, groups, rules, towers):
        assert module.logger.name == module.__name__


def test_cli_import():
    from k3quot.cli.main import cli, main, run

    assert callable(main)
    assert callable(run)
    assert "plan" in cli.commands
