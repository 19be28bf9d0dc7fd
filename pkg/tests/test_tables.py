"""Fixed-width report tables.

Every padded cell is followed by one space, the dash row matches the
column widths, and over-wide cells in truncating columns become
``value[:width-1] + '+'``.
"""

from k3quot.cli.tables import Column, fit_columns, render_header, render_row, render_table

ID = Column("ID", -4)
N = Column("N", 3)
BASIS = Column("BASIS", -6, truncate=True)


class TestRenderHeader:
    def test_name_and_dash_rows(self):
        assert render_header([ID, N]) == ["ID     N", "---- ---"]

    def test_parsable(self):
        assert render_header([ID, N], parsable=True) == ["ID|N"]

    def test_name_clipped_without_plus(self):
        assert render_header([Column("VeryLongName", 4)])[0] == "Very"


class TestRenderRow:
    def test_alignment(self):
        assert render_row(["F0-1", "7"], [ID, N]) == "F0-1   7"

    def test_truncating_column(self):
        assert render_row(["L22,L27"], [BASIS]) == "L22,L+"

    def test_exact_width_not_truncated(self):
        assert render_row(["L22,L2"], [BASIS]) == "L22,L2"

    def test_other_columns_overflow(self):
        assert render_row(["F12-266", "1"], [ID, N]) == "F12-266   1"

    def test_parsable(self):
        assert render_row(["F0-1", "7"], [ID, N], parsable=True) == "F0-1|7"


class TestFitColumns:
    def test_widen_to_longest_cell(self):
        fitted = fit_columns([Column("GROUP", -3)], [["Z2^2xZ4"]])
        assert fitted == [Column("GROUP", -7)]

    def test_widen_to_header(self):
        fitted = fit_columns([Column("STATUS", 2)], [["ok"]])
        assert fitted == [Column("STATUS", 6)]

    def test_truncating_column_kept(self):
        assert fit_columns([BASIS], [["a very long citation"]]) == [BASIS]


class TestRenderTable:
    def test_dict_rows_missing_keys_blank(self):
        table = render_table([Column("ID", -3), Column("GROUP", -5)], [{"ID": "F0-1"}])
        assert table.splitlines() == ["ID   GROUP", "---- -----", "F0-1"]

    def test_noheader(self):
        assert render_table([ID, N], [["F0-1", "7"]], noheader=True) == "F0-1   7"

    def test_parsable_skips_fitting(self):
        table = render_table([ID, N], [{"ID": "F12-266", "N": "12"}], parsable=True)
        assert table == "ID|N\nF12-266|12"

    def test_empty(self):
        assert render_table([ID], []) == "ID\n----"
