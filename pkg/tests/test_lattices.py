"""Smith normal form, root lattices and the symplectic tables."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import ImmutableMatrix, Matrix, diag, eye

from k3quot.core.abelian import parse_group_spec
from k3quot.core.lattices import (
    SYMPLECTIC_TABLE,
    IntegerLattice,
    check_all_symplectic_tables,
    check_symplectic_tables,
    discriminant_group,
    in_row_lattice,
    parse_root_spec,
    root_lattice,
    smith_normal_form,
)
from k3quot.errors import DegenerateLattice, InvalidKind, NotTabulated


@st.composite
def integer_matrices(draw):
    rows = draw(st.integers(min_value=1, max_value=4))
    cols = draw(st.integers(min_value=1, max_value=4))
    entries = st.integers(min_value=-9, max_value=9)
    return Matrix([[draw(entries) for _ in range(cols)] for _ in range(rows)])


class TestSmithNormalForm:
    def test_identity(self):
        d, _, _ = smith_normal_form(eye(3))
        assert d == eye(3)

    def test_coprime_diagonal(self):
        d, _, _ = smith_normal_form(diag(2, 3))
        assert d == diag(1, 6)

    def test_a2_gram(self):
        d, _, _ = smith_normal_form(Matrix([[-2, 1], [1, -2]]))
        assert d == diag(1, 3)

    @settings(max_examples=500, deadline=None)
    @given(integer_matrices())
    def test_identities(self, m):
        d, u, v = smith_normal_form(m)
        assert u * m * v == d
        assert abs(u.det()) == 1
        assert abs(v.det()) == 1
        diagonal = [d[i, i] for i in range(min(d.rows, d.cols))]
        for i in range(d.rows):
            for j in range(d.cols):
                if i != j:
                    assert d[i, j] == 0
        assert all(x >= 0 for x in diagonal)
        nonzero = [x for x in diagonal if x]
        assert diagonal[: len(nonzero)] == nonzero
        assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
        if m.is_square:
            assert abs(m.det()) == abs(d.det())


class TestRowLattice:
    gens = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)), (Fraction(1, 2), Fraction(1, 2))]

    def test_member(self):
        assert in_row_lattice(self.gens, (Fraction(1, 2), Fraction(3, 2)))

    def test_non_member(self):
        assert not in_row_lattice(self.gens, (Fraction(1, 2), Fraction(0)))

    def test_integer_lattice_only(self):
        assert not in_row_lattice(self.gens[:2], (Fraction(1, 2), Fraction(1, 2)))


class TestRootLattices:
    def test_a1(self):
        lat = root_lattice("A", 1)
        assert lat.gram == ImmutableMatrix([[-2]])
        assert lat.det == -2

    def test_a2(self):
        lat = root_lattice("A", 2)
        assert lat.gram == ImmutableMatrix([[-2, 1], [1, -2]])
        assert lat.det == 3

    def test_hyperbolic_plane(self):
        assert root_lattice("U").det == -1

    @pytest.mark.parametrize(("k", "det"), [(6, 3), (7, -2), (8, 1)])
    def test_exceptional(self, k, det):
        lat = root_lattice("E", k)
        assert lat.det == det
        assert lat.is_even

    @pytest.mark.parametrize("k", range(1, 8))
    def test_a_k_discriminant_is_cyclic(self, k):
        assert discriminant_group(root_lattice("A", k)).invariant_factors == (k + 1,)

    def test_d4(self):
        assert discriminant_group(root_lattice("D", 4)).as_group() == parse_group_spec("Z2^2")

    def test_unknown_kind(self):
        with pytest.raises(InvalidKind):
            root_lattice("D", 3)
        with pytest.raises(InvalidKind):
            parse_root_spec("B2")

    def test_parse_spec(self):
        lat = parse_root_spec("A3^4+A1^2")
        assert lat.rank == 14
        assert abs(lat.det) == 4**4 * 2**2


class TestDiscriminantGroup:
    def test_a1_power(self):
        disc = discriminant_group(parse_root_spec("A1^8"))
        assert disc.as_group() == parse_group_spec("Z2^8")
        assert disc.order == 256

    def test_z8_lattice(self):
        assert discriminant_group(parse_root_spec("A7^2+A3+A1")).order == 512

    def test_unimodular(self):
        assert discriminant_group(root_lattice("U")).order == 1

    def test_degenerate(self):
        with pytest.raises(DegenerateLattice):
            discriminant_group(IntegerLattice(ImmutableMatrix([[0, 0], [0, 0]])))

    def test_asymmetric_gram(self):
        with pytest.raises(ValueError):
            IntegerLattice(ImmutableMatrix([[0, 1], [2, 0]]))


class TestSymplecticTables:
    def test_z2(self):
        report = check_symplectic_tables(parse_group_spec("Z2"))
        assert (report.rank, report.det_abs, report.index) == (8, 256, 2)
        assert report.consistency_value == 64
        assert report.status == "CONSISTENT"

    def test_z4_squared(self):
        report = check_symplectic_tables(parse_group_spec("Z4^2"))
        assert report.det_abs == 4096
        assert report.consistency_value == 16
        assert report.consistent

    def test_z2_z4_discrepancy(self):
        report = check_symplectic_tables(parse_group_spec("Z2xZ4"))
        assert report.det_abs == 4096
        assert report.consistency_value == 64
        assert report.tabulated_discriminant.order == 144
        assert report.rank_ok
        assert report.status == "DISCREPANCY"

    def test_all_rows(self):
        reports = check_all_symplectic_tables()
        assert len(reports) == len(SYMPLECTIC_TABLE) == 14
        assert all(r.rank_ok for r in reports)
        flagged = [r.group.label for r in reports if not r.consistent]
        assert flagged == ["Z2xZ4"]

    def test_untabulated_group(self):
        with pytest.raises(NotTabulated):
            check_symplectic_tables(parse_group_spec("Z9"))

    def test_report_dict(self):
        data = check_symplectic_tables(parse_group_spec("Z3")).to_dict()
        assert data["group"] == "Z3"
        assert data["det_over_index_squared"] == "81"
        assert data["status"] == "CONSISTENT"
