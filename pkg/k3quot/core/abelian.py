"""Finite abelian groups up to isomorphism."""

from __future__ import annotations

import re
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from math import prod
from typing import Optional

from sympy import factorint

from k3quot.errors import InvalidGroupSpec

_FACTOR_RE = re.compile(r"^z(\d+)(?:\^(\d+))?$")


def _prime_powers(orders: Iterable[int]) -> list[int]:
    powers: list[int] = []
    for order in orders:
        powers.extend(p**e for p, e in factorint(order).items())
    return powers


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Stored in invariant-factor form ``d_1 | d_2 | ... | d_k`` with every ``d_i >= 2``.

    Construct through :meth:`of` so that ``of(2, 2, 4) == of(4, 2, 2)``.
    """

    factors: tuple[int, ...] = ()

    @classmethod
    def of(cls, *orders: int) -> FiniteAbelianGroup:
        if any(o < 1 for o in orders):
            raise InvalidGroupSpec(f"cyclic orders must be positive: {orders}")
        by_prime: dict[int, list[int]] = {}
        for power in _prime_powers(o for o in orders if o > 1):
            prime = next(iter(factorint(power)))
            by_prime.setdefault(prime, []).append(power)
        width = max((len(v) for v in by_prime.values()), default=0)
        invariant = [1] * width
        for powers in by_prime.values():
            for slot, power in enumerate(sorted(powers, reverse=True)):
                invariant[width - 1 - slot] *= power
        return cls(tuple(invariant))

    @classmethod
    def trivial(cls) -> FiniteAbelianGroup:
        return cls(())

    def direct_sum(self, other: FiniteAbelianGroup) -> FiniteAbelianGroup:
        return FiniteAbelianGroup.of(*self.factors, *other.factors)

    __add__ = direct_sum

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def is_cyclic(self) -> bool:
        return len(self.factors) <= 1

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def primary_decomposition(self) -> list[int]:
        """Prime-power cyclic orders, ascending."""
        return sorted(_prime_powers(self.factors))

    def p_rank(self, p: int) -> int:
        """Number of cyclic p-primary summands."""
        return sum(1 for q in self.primary_decomposition() if q % p == 0)

    def sylow(self, p: int) -> FiniteAbelianGroup:
        return FiniteAbelianGroup.of(*(q for q in self.primary_decomposition() if q % p == 0))

    @property
    def label(self) -> str:
        if not self.factors:
            return "1"
        counts = Counter(self.primary_decomposition())
        return "x".join(
            f"Z{q}" if k == 1 else f"Z{q}^{k}" for q, k in sorted(counts.items())
        )

    def __str__(self) -> str:
        return self.label

    def __lt__(self, other: FiniteAbelianGroup) -> bool:
        return (self.order, self.factors) < (other.order, other.factors)


def parse_group_spec(text: str) -> FiniteAbelianGroup:
    """Parse ``Z2^3``, ``Z2xZ4``, ``z2^2xz4`` or ``1``/``trivial``."""
    spec = re.sub(r"\s+", "", text).lower()
    if spec in ("1", "0", "trivial"):
        return FiniteAbelianGroup.trivial()
    if not spec:
        raise InvalidGroupSpec(text)
    orders: list[int] = []
    for token in re.split(r"[x+*]", spec):
        match = _FACTOR_RE.match(token)
        if not match:
            raise InvalidGroupSpec(text)
        order = int(match.group(1))
        count = int(match.group(2) or 1)
        if order < 2 or count < 1:
            raise InvalidGroupSpec(text)
        orders.extend([order] * count)
    return FiniteAbelianGroup.of(*orders)


def cyclic(m: int) -> FiniteAbelianGroup:
    return FiniteAbelianGroup.of(m)


def fenchel_abelian_p1(multiplicities: Iterable[int]) -> Optional[FiniteAbelianGroup]:
    """Abelian Galois group of a cover of P^1 branched with these indices, if any.

    Only ``{m, m}`` (cyclic of order m) and ``{2, 2, 2}`` (Klein four) admit one.
    """
    mults = sorted(multiplicities)
    if any(m < 2 for m in mults):
        raise ValueError(f"branch multiplicities must be >= 2: {mults}")
    if len(mults) == 2 and mults[0] == mults[1]:
        return cyclic(mults[0])
    if mults == [2, 2, 2]:
        return FiniteAbelianGroup.of(2, 2)
    return None

