"""Orbifold-style inequality checks with exact rational arithmetic.

The bound compares ((K+D)^+)^2 against three times the Euler characteristic
of the open part corrected by reciprocal local group orders of the
contracted contractible components.  Only cyclic contributions (chains)
are supported; fork components would need non-cyclic group orders, which
no check here requires.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .barks import ContractibilityClass, chain_determinant
from .trees import WeightedTree, build_tree, determinant


class UnsupportedComponentError(ValueError):
    """A contractible component whose local group order is not implemented."""


_FORKS = {
    ContractibilityClass.FORK_22N,
    ContractibilityClass.FORK_233,
    ContractibilityClass.FORK_234,
    ContractibilityClass.FORK_235,
}


def local_group_order(det: int, cls: ContractibilityClass) -> int:
    """Order of the local fundamental group of the contracted component.

    Chains contract to cyclic quotient points of order d(chain); forks are
    rejected rather than guessed.
    """
    if cls is ContractibilityClass.ADMISSIBLE_CHAIN:
        if det < 2:
            raise ValueError(f"chain determinant {det} is impossible")
        return det
    if cls in _FORKS:
        raise UnsupportedComponentError(f"{cls.value}: non-cyclic group order unsupported")
    raise ValueError("component is not contractible")


@dataclass(frozen=True)
class BMYInstance:
    chi_open: int
    components: tuple[tuple[int, ContractibilityClass], ...]
    p_squared: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p_squared", Fraction(self.p_squared))
        for det, cls in self.components:
            if cls is not ContractibilityClass.NOT_CONTRACTIBLE and det < 2:
                raise ValueError(f"determinant {det} below 2 for a contractible component")


@dataclass(frozen=True)
class BMYReport:
    lhs: Fraction
    rhs: Fraction
    holds: bool
    slack: Fraction


def check_bmy(instance: BMYInstance) -> BMYReport:
    """Exact evaluation of ((K+D)^+)^2 <= 3(chi + sum 1/|G_i|)."""
    recip = sum(
        (Fraction(1, local_group_order(det, cls)) for det, cls in instance.components),
        Fraction(0),
    )
    rhs = 3 * (instance.chi_open + recip)
    lhs = instance.p_squared
    return BMYReport(lhs=lhs, rhs=rhs, holds=lhs <= rhs, slack=rhs - lhs)


def enumerate_quotient_orders(gamma: int, dmax: int = 12) -> list[tuple[int, int]]:
    """All (d1, d2) with d_i >= 2 and 1/d1 + 1/d2 + 1/gamma >= 1.

    Only the window 6 <= gamma <= 8 is meaningful here; the solution set
    is stable once dmax >= 12 because 1/d1 + 1/d2 >= 1 - 1/6 pins both
    entries below that.
    """
    if not 6 <= gamma <= 8:
        raise ValueError(f"gamma = {gamma} outside [6, 8]")
    out = []
    for d1 in range(2, dmax + 1):
        for d2 in range(2, dmax + 1):
            if Fraction(1, d1) + Fraction(1, d2) + Fraction(1, gamma) >= 1:
                out.append((d1, d2))
    return out


def unit_fraction_triples(dmax: int = 60) -> list[tuple[int, int, int]]:
    """Ordered triples 2 <= d1 <= d2 <= d3 with 1/d1 + 1/d2 + 1/d3 = 1."""
    out = []
    for d1 in range(2, dmax + 1):
        for d2 in range(d1, dmax + 1):
            for d3 in range(d2, dmax + 1):
                if Fraction(1, d1) + Fraction(1, d2) + Fraction(1, d3) == 1:
                    out.append((d1, d2, d3))
    return out


def fork_22n_determinant(center_weight: int, long_twig_weights: Sequence[int]) -> int:
    """Determinant of a fork with two (-2)-tips, centre of the given weight,
    and a long twig ordered from the centre outward.

    Closed form: 4 (n (b-1) - n') with b = -centre weight, n the long-twig
    determinant and n' the determinant with the centre-adjacent component
    removed.
    """
    b = -center_weight
    n = chain_determinant(long_twig_weights)
    n_sub = chain_determinant(long_twig_weights[1:])
    return 4 * (n * (b - 1) - n_sub)


def build_fork_22n(center_weight: int, long_twig_weights: Sequence[int]) -> WeightedTree:
    """The fork realizing :func:`fork_22n_determinant`, for cross-checking."""
    weights = {0: center_weight, 1: -2, 2: -2}
    edges = [(0, 1), (0, 2)]
    prev = 0
    for i, w in enumerate(long_twig_weights, start=3):
        weights[i] = w
        edges.append((prev, i))
        prev = i
    return build_tree(weights, edges)
