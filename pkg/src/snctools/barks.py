"""Twigs, capacities, barks, and contractibility classification.

A twig is a chain hanging off the configuration: it starts at a tip and
runs through degree-2 vertices, stopping before a branching vertex or the
E-component (twigs never contain E).  The capacity of an admissible chain
and the bark supported on the maximal twigs are the exact rational
invariants driving all the inequalities in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .trees import (
    InvalidSubsetError,
    Tag,
    WeightedTree,
    determinant,
    negative_definite,
)


class AdmissibilityError(ValueError):
    """A chain with a component of weight > -2 where admissibility is required."""


@dataclass(frozen=True)
class Chain:
    """An ordered path of vertex ids; ``ids[0]`` is the tip."""

    ids: tuple[int, ...]

    def __post_init__(self):
        if not self.ids:
            raise ValueError("empty chain")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("repeated vertex in chain")

    @property
    def tip(self) -> int:
        return self.ids[0]

    def validate_in(self, tree: WeightedTree) -> None:
        for v in self.ids:
            if not tree.has_vertex(v):
                raise InvalidSubsetError(f"unknown vertex {v}")
        for a, b in zip(self.ids, self.ids[1:]):
            if tree.edge_multiplicity(a, b) == 0:
                raise ValueError(f"chain vertices {a},{b} are not adjacent")

    def weights(self, tree: WeightedTree) -> tuple[int, ...]:
        self.validate_in(tree)
        return tuple(tree.weight(v) for v in self.ids)


def chain_determinant(weights: Sequence[int]) -> int:
    """det(-Q) of a chain with the given weights, by the tridiagonal
    recurrence d(b1..bs) = (-b1) d(b2..bs) - d(b3..bs)."""
    d_next, d_next2 = 1, 0  # d of empty tail, d one past the end
    for b in reversed(weights):
        d_next, d_next2 = (-b) * d_next - d_next2, d_next
    return d_next


def capacity(tree: WeightedTree, chain: Chain | Sequence[int]) -> Fraction:
    """d(R2+...+Rs)/d(R) for an admissible chain R with tip R1."""
    if not isinstance(chain, Chain):
        chain = Chain(tuple(chain))
    weights = chain.weights(tree)
    return capacity_of_weights(weights)


def capacity_of_weights(weights: Sequence[int]) -> Fraction:
    if any(w > -2 for w in weights):
        raise AdmissibilityError(f"chain {list(weights)} is not admissible")
    value = Fraction(chain_determinant(weights[1:]), chain_determinant(weights))
    assert 0 < value < 1
    return value


def maximal_twigs(tree: WeightedTree) -> tuple[Chain, ...]:
    """All maximal twigs, each ordered tip-first, sorted by tip id.

    The walk from a tip continues through degree-2 vertices and stops
    before a branching vertex or E.  E itself is never a twig vertex.
    """
    e = tree.e_id
    twigs = []
    for v in tree.ids:
        if v == e or tree.degree(v) != 1:
            continue
        ids = [v]
        prev, cur = v, tree.neighbors(v)[0]
        while cur != e and tree.degree(cur) == 2:
            ids.append(cur)
            a, b = tree.neighbors(cur)
            nxt = b if a == prev else a
            prev, cur = cur, nxt
            if nxt == v:  # safety: should be unreachable in a valid tree
                break
        twigs.append(Chain(tuple(ids)))
    return tuple(sorted(twigs, key=lambda c: c.tip))


@dataclass(frozen=True)
class DivisorQ:
    """Rational divisor supported on tree vertices, exact coefficients."""

    coefficients: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        coeffs = tuple(sorted((int(v), Fraction(c)) for v, c in self.coefficients))
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(v for v, c in self.coefficients if c != 0)

    def coefficient(self, v: int) -> Fraction:
        for u, c in self.coefficients:
            if u == v:
                return c
        return Fraction(0)

    def validate_in(self, tree: WeightedTree) -> None:
        for v, _ in self.coefficients:
            if not tree.has_vertex(v):
                raise InvalidSubsetError(f"unknown vertex {v}")

    def dot_vertex(self, tree: WeightedTree, v: int) -> Fraction:
        self.validate_in(tree)
        total = self.coefficient(v) * tree.weight(v)
        for u in tree.neighbors(v):
            total += self.coefficient(u)
        return total

    def self_intersection(self, tree: WeightedTree) -> Fraction:
        self.validate_in(tree)
        total = Fraction(0)
        for v, c in self.coefficients:
            total += c * c * tree.weight(v)
        for a, b in tree.edges:
            total += 2 * self.coefficient(a) * self.coefficient(b)
        return total


def _twig_coefficients(weights: Sequence[int]) -> list[Fraction]:
    """Coefficients x solving Q x = (-1, 0, ..., 0) on one admissible twig.

    Classical closed form: x_i = d(R_{i+1}..R_k) / d(R_1..R_k); the tip
    coefficient is the capacity of the twig.
    """
    d_all = chain_determinant(weights)
    return [Fraction(chain_determinant(weights[i + 1:]), d_all) for i in range(len(weights))]


def bark_divisor(tree: WeightedTree) -> DivisorQ:
    """The rational divisor Bk supported on the maximal twigs with
    Bk . R = (K+T) . R for every twig component R.

    Requires a connected, NC-minimal, non-contractible configuration with
    admissible twigs; raises otherwise.
    """
    if not tree.ids:
        raise ValueError("empty configuration")
    if not tree.is_connected(tree.ids):
        raise ValueError("configuration must be connected")
    e = tree.e_id
    for v in tree.d_ids():
        if tree.weight(v) == -1 and tree.degree(v) <= 2:
            raise ValueError("configuration is not NC-minimal")
    if e is None and classify_contractible(tree, tree.ids) is not ContractibilityClass.NOT_CONTRACTIBLE:
        raise ValueError("contractible configurations carry no bark")
    if e is None and tree.is_chain(tree.ids):
        raise ValueError("a bare chain has no well-defined bark here")

    coeffs: list[tuple[int, Fraction]] = []
    for twig in maximal_twigs(tree):
        weights = twig.weights(tree)
        if any(w > -2 for w in weights):
            raise AdmissibilityError(
                f"maximal twig {twig.ids} with weights {list(weights)} is not admissible"
            )
        xs = _twig_coefficients(weights)
        coeffs.extend(zip(twig.ids, xs))
    bark = DivisorQ(tuple(coeffs))

    # defining equations, checked exactly; failure is a genuine bug
    for twig in maximal_twigs(tree):
        for i, v in enumerate(twig.ids):
            rhs = Fraction(-1) if i == 0 else Fraction(0)
            assert bark.dot_vertex(tree, v) == rhs
    return bark


# -- contractibility ---------------------------------------------------------


class ContractibilityClass(Enum):
    ADMISSIBLE_CHAIN = "AdmissibleChain"
    FORK_22N = "Fork22n"
    FORK_233 = "Fork233"
    FORK_234 = "Fork234"
    FORK_235 = "Fork235"
    NOT_CONTRACTIBLE = "NotContractible"


_FORK_CLASSES = {
    (2, 3, 3): ContractibilityClass.FORK_233,
    (2, 3, 4): ContractibilityClass.FORK_234,
    (2, 3, 5): ContractibilityClass.FORK_235,
}


def _fork_branches(tree: WeightedTree, sub: set[int]) -> tuple[int, list[list[int]]] | None:
    """Centre and branches if the subset is a fork with exactly 3 branches."""
    centres = [v for v in sub if tree.induced_degree(v, sub) >= 3]
    if len(centres) != 1 or tree.induced_degree(centres[0], sub) != 3:
        return None
    centre = centres[0]
    rest = sub - {centre}
    branches = []
    for comp in tree.connected_components(rest):
        ids = sorted(comp)
        if any(tree.induced_degree(v, comp) > 2 for v in ids):
            return None
        branches.append(ids)
    if len(branches) != 3:
        return None
    return centre, branches


def classify_contractible(tree: WeightedTree, subset: Iterable[int]) -> ContractibilityClass:
    """Decide whether the subset is the resolution graph of a quotient
    singularity: an admissible chain, or a negative-definite fork whose
    branch determinants form {2,2,n}, {2,3,3}, {2,3,4} or {2,3,5}."""
    sub = set(tree.check_subset(subset))
    if not sub:
        raise InvalidSubsetError("empty subset")
    if not tree.is_connected(sub):
        raise ValueError("subset must be connected")

    if all(tree.induced_degree(v, sub) <= 2 for v in sub):
        if all(tree.weight(v) <= -2 for v in sub) and tree.is_chain(sub):
            result = ContractibilityClass.ADMISSIBLE_CHAIN
            assert negative_definite(tree, sub)
            return result
        return ContractibilityClass.NOT_CONTRACTIBLE

    fork = _fork_branches(tree, sub)
    if fork is None:
        return ContractibilityClass.NOT_CONTRACTIBLE
    _, branches = fork
    if any(tree.weight(v) > -2 for br in branches for v in br):
        return ContractibilityClass.NOT_CONTRACTIBLE
    dets = tuple(sorted(determinant(tree, br) for br in branches))
    if dets[0] == 2 and dets[1] == 2:
        result = ContractibilityClass.FORK_22N
    elif dets in _FORK_CLASSES:
        result = _FORK_CLASSES[dets]
    else:
        return ContractibilityClass.NOT_CONTRACTIBLE
    if not negative_definite(tree, sub):
        return ContractibilityClass.NOT_CONTRACTIBLE
    return result


class FujitaZeroClass(Enum):
    CHAIN = "ChainType"
    TWO_BRANCH_FOUR_TIPS = "TwoBranchFourTips"
    FINITE_FORK = "FiniteFork"
    NO_MATCH = "NoMatch"


def classify_fujita_zero(tree: WeightedTree, subset: Iterable[int]) -> FujitaZeroClass:
    """Match the subset against the shapes a boundary component with trivial
    positive part can have: a chain; a tree with exactly two branching
    vertices whose four maximal twigs are (-2)-tips; or a fork with branch
    determinants (d1,d2,d3) satisfying 1/d1+1/d2+1/d3 = 1."""
    sub = set(tree.check_subset(subset))
    if not sub:
        raise InvalidSubsetError("empty subset")
    if not tree.is_connected(sub):
        raise ValueError("subset must be connected")

    degrees = {v: tree.induced_degree(v, sub) for v in sub}
    branching = [v for v in sub if degrees[v] >= 3]
    if not branching and tree.is_chain(sub):
        return FujitaZeroClass.CHAIN

    if len(branching) == 2:
        tips = [v for v in sub if degrees[v] == 1]
        if len(tips) == 4 and all(degrees[v] <= 3 for v in branching):
            # twig of each tip must be the tip alone, of weight -2
            ok = all(
                tree.weight(v) == -2
                and next(u for u in tree.neighbors(v) if u in sub) in branching
                for v in tips
            )
            if ok:
                return FujitaZeroClass.TWO_BRANCH_FOUR_TIPS
        return FujitaZeroClass.NO_MATCH

    if len(branching) == 1:
        fork = _fork_branches(tree, sub)
        if fork is None:
            return FujitaZeroClass.NO_MATCH
        _, branches = fork
        if any(tree.weight(v) > -2 for br in branches for v in br):
            return FujitaZeroClass.NO_MATCH
        dets = sorted(determinant(tree, br) for br in branches)
        if sum(Fraction(1, d) for d in dets) == 1:
            return FujitaZeroClass.FINITE_FORK
        return FujitaZeroClass.NO_MATCH

    return FujitaZeroClass.NO_MATCH
