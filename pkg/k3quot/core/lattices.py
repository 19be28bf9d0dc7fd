"""Integer lattices, Smith normal form and discriminant groups.

Root lattices use the negative-definite convention: ``A_1 = [[-2]]``.
The symplectic table lists, for each abelian group G acting symplectically
on a K3 surface, the root lattice E_G spanned by the exceptional curves of
X/G, the index r_G of E_G in its primitive closure M_G, and the tabulated
rank and discriminant group of M_G.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod
from typing import Optional

from sympy import ImmutableMatrix, Matrix, diag, eye, zeros

from k3quot.core.abelian import FiniteAbelianGroup, parse_group_spec
from k3quot.errors import DegenerateLattice, InvalidKind, NotTabulated

logger = logging.getLogger(__name__)

_ROOT_TOKEN_RE = re.compile(r"^([ADEU])(\d*)(?:\^(\d+))?$")


def _as_rows(m: Matrix) -> list[list[int]]:
    return [[int(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, U, V)`` with ``U * m * V == D``.

    ``D`` is diagonal with nonnegative entries ``d_1 | d_2 | ...``; ``U`` and
    ``V`` are unimodular. Pivots are taken at the smallest nonzero absolute
    value of the remaining block.
    """
    a = _as_rows(m)
    rows, cols = m.rows, m.cols
    left = _as_rows(eye(rows))
    right = _as_rows(eye(cols))

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in a:
            row[dst] += q * row[src]
        for row in right:
            row[dst] += q * row[src]

    for s in range(min(rows, cols)):
        while True:
            pivot: Optional[tuple[int, int]] = None
            for i in range(s, rows):
                for j in range(s, cols):
                    if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(s, pivot[0])
            swap_cols(s, pivot[1])
            p = a[s][s]
            for i in range(s + 1, rows):
                if a[i][s]:
                    add_row(i, s, -(a[i][s] // p))
            for j in range(s + 1, cols):
                if a[s][j]:
                    add_col(j, s, -(a[s][j] // p))
            if any(a[i][s] for i in range(s + 1, rows)) or any(
                a[s][j] for j in range(s + 1, cols)
            ):
                continue
            stray = next(
                (
                    i
                    for i in range(s + 1, rows)
                    for j in range(s + 1, cols)
                    if a[i][j] % p
                ),
                None,
            )
            if stray is None:
                break
            add_row(s, stray, 1)
        if a[s][s] < 0:
            a[s] = [-x for x in a[s]]
            left[s] = [-x for x in left[s]]

    return Matrix(a), Matrix(left), Matrix(right)


def in_row_lattice(generators: Sequence[Sequence[Fraction]], vector: Sequence[Fraction]) -> bool:
    """Whether ``vector`` is an integer combination of the rational ``generators``."""
    if not generators:
        return all(x == 0 for x in vector)
    scale = lcm(*(Fraction(x).denominator for row in [*generators, vector] for x in row))
    gens = Matrix([[int(Fraction(x) * scale) for x in row] for row in generators])
    target = Matrix([[int(Fraction(x) * scale) for x in vector]])
    d, _, v = smith_normal_form(gens)
    image = target * v
    for j in range(image.cols):
        pivot = d[j, j] if j < d.rows else 0
        if pivot == 0:
            if image[0, j] != 0:
                return False
        elif image[0, j] % pivot:
            return False
    return True


@dataclass(frozen=True)
class DiscriminantGroup:
    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    def as_group(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup.of(*self.invariant_factors)

    def __str__(self) -> str:
        return self.as_group().label


@dataclass(frozen=True)
class IntegerLattice:
    gram: ImmutableMatrix
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.gram.is_square or self.gram != self.gram.T:
            raise ValueError("Gram matrix must be square and symmetric")

    @property
    def rank(self) -> int:
        return self.gram.rows

    @property
    def det(self) -> int:
        return int(self.gram.det()) if self.rank else 1

    @property
    def is_even(self) -> bool:
        return all(self.gram[i, i] % 2 == 0 for i in range(self.rank))

    def direct_sum(self, other: IntegerLattice) -> IntegerLattice:
        return IntegerLattice(
            ImmutableMatrix(diag(self.gram, other.gram)), self.labels + other.labels
        )

    __add__ = direct_sum

    def __mul__(self, k: int) -> IntegerLattice:
        return direct_sum([self] * k)


def direct_sum(lattices: Sequence[IntegerLattice]) -> IntegerLattice:
    if not lattices:
        return IntegerLattice(ImmutableMatrix(zeros(0, 0)))
    grams = [lat.gram for lat in lattices]
    labels = tuple(label for lat in lattices for label in lat.labels)
    return IntegerLattice(ImmutableMatrix(diag(*grams)), labels)


def _dynkin(size: int, edges: Sequence[tuple[int, int]], name: str) -> IntegerLattice:
    gram = -2 * eye(size)
    for i, j in edges:
        gram[i, j] = gram[j, i] = 1
    return IntegerLattice(ImmutableMatrix(gram), tuple(f"{name}.{i + 1}" for i in range(size)))


def root_lattice(kind: str, k: Optional[int] = None) -> IntegerLattice:
    """``A_k`` (k>=1), ``D_k`` (k>=4), ``E_6``/``E_7``/``E_8`` or the hyperbolic plane ``U``."""
    kind = kind.upper()
    if kind == "U":
        return IntegerLattice(ImmutableMatrix([[0, 1], [1, 0]]), ("U.e", "U.f"))
    if kind == "A" and k is not None and k >= 1:
        return _dynkin(k, [(i, i + 1) for i in range(k - 1)], f"A{k}")
    if kind == "D" and k is not None and k >= 4:
        return _dynkin(k, [(i, i + 1) for i in range(k - 2)] + [(k - 3, k - 1)], f"D{k}")
    if kind == "E" and k in (6, 7, 8):
        # Bourbaki numbering: chain 1-3-4-5-..., node 2 hangs off node 4
        edges = [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, k - 1)]
        return _dynkin(k, edges, f"E{k}")
    raise InvalidKind(f"{kind}{k if k is not None else ''}")


def parse_root_spec(text: str) -> IntegerLattice:
    """Parse ``A3^4+A1^2``, ``A7^2 + A3 + A1``, ``U+E8^2``."""
    parts: list[IntegerLattice] = []
    for token in re.split(r"[+\s]+", text.strip()):
        if not token:
            continue
        match = _ROOT_TOKEN_RE.match(token.upper())
        if not match:
            raise InvalidKind(token)
        kind, index, count = match.groups()
        lattice = root_lattice(kind, int(index) if index else None)
        parts.extend([lattice] * int(count or 1))
    return direct_sum(parts)


def discriminant_group(lattice: IntegerLattice) -> DiscriminantGroup:
    if lattice.rank == 0:
        return DiscriminantGroup(())
    if lattice.det == 0:
        raise DegenerateLattice(f"lattice of rank {lattice.rank} is degenerate")
    d, _, _ = smith_normal_form(Matrix(lattice.gram))
    factors = tuple(int(abs(d[i, i])) for i in range(lattice.rank) if abs(d[i, i]) > 1)
    return DiscriminantGroup(factors)


@dataclass(frozen=True)
class SymplecticRow:
    root_spec: str
    index: int
    rank: int
    discriminant: str


SYMPLECTIC_TABLE: dict[str, SymplecticRow] = {
    "Z2": SymplecticRow("A1^8", 2, 8, "Z2^6"),
    "Z3": SymplecticRow("A2^6", 3, 12, "Z3^4"),
    "Z4": SymplecticRow("A3^4+A1^2", 4, 14, "Z2^2xZ4^2"),
    "Z5": SymplecticRow("A4^4", 5, 16, "Z5^2"),
    "Z6": SymplecticRow("A5^2+A2^2+A1^2", 6, 16, "Z6^2"),
    "Z7": SymplecticRow("A6^3", 7, 18, "Z7"),
    "Z8": SymplecticRow("A7^2+A3+A1", 8, 18, "Z2xZ4"),
    "Z2^2": SymplecticRow("A1^12", 4, 12, "Z2^8"),
    "Z2^3": SymplecticRow("A1^14", 8, 14, "Z2^8"),
    "Z2^4": SymplecticRow("A1^15", 16, 15, "Z2^7"),
    # printed as (Z/2+Z/6)^2; order 144 disagrees with det/r^2 = 64
    "Z2xZ4": SymplecticRow("A3^4+A1^4", 8, 16, "Z2^2xZ6^2"),
    "Z2xZ6": SymplecticRow("A5^3+A1^3", 12, 18, "Z2xZ6"),
    "Z3^2": SymplecticRow("A2^8", 9, 16, "Z3^4"),
    "Z4^2": SymplecticRow("A3^6", 16, 18, "Z4^2"),
}


@dataclass(frozen=True)
class SymplecticReport:
    group: FiniteAbelianGroup
    root_spec: str
    rank: int
    tabulated_rank: int
    det_abs: int
    index: int
    tabulated_discriminant: FiniteAbelianGroup
    consistency_value: Fraction

    @property
    def rank_ok(self) -> bool:
        return self.rank == self.tabulated_rank

    @property
    def consistent(self) -> bool:
        return self.rank_ok and self.consistency_value == self.tabulated_discriminant.order

    @property
    def status(self) -> str:
        return "CONSISTENT" if self.consistent else "DISCREPANCY"

    def to_dict(self) -> dict:
        return {
            "group": self.group.label,
            "root_lattice": self.root_spec,
            "rank": self.rank,
            "tabulated_rank": self.tabulated_rank,
            "det_abs": self.det_abs,
            "index": self.index,
            "det_over_index_squared": str(self.consistency_value),
            "tabulated_discriminant": self.tabulated_discriminant.label,
            "tabulated_discriminant_order": self.tabulated_discriminant.order,
            "status": self.status,
        }


def _table_row(group: FiniteAbelianGroup) -> SymplecticRow:
    for label, row in SYMPLECTIC_TABLE.items():
        if parse_group_spec(label) == group:
            return row
    raise NotTabulated(group.label)


def check_symplectic_tables(group: FiniteAbelianGroup) -> SymplecticReport:
    row = _table_row(group)
    lattice = parse_root_spec(row.root_spec)
    disc = discriminant_group(lattice)
    report = SymplecticReport(
        group=group,
        root_spec=row.root_spec,
        rank=lattice.rank,
        tabulated_rank=row.rank,
        det_abs=disc.order,
        index=row.index,
        tabulated_discriminant=parse_group_spec(row.discriminant),
        consistency_value=Fraction(disc.order, row.index**2),
    )
    if not report.consistent:
        logger.info(
            "%s: |det E_G|/r^2 = %s but tabulated discriminant has order %d",
            group,
            report.consistency_value,
            report.tabulated_discriminant.order,
        )
    return report


def check_all_symplectic_tables() -> list[SymplecticReport]:
    return [check_symplectic_tables(parse_group_spec(label)) for label in SYMPLECTIC_TABLE]
