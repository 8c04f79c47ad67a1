"""Branch data at infinity as gcd-descending pair sequences.

A branch is encoded by pairs (c, p): c is the current contact with the
curve hosting the centre, p the branch multiplicity driving the next block
of blowups.  Validity means c_{i+1} = gcd(c_i, p_i) and the last gcd is 1.
The multiplicity sequence of one pair is the subtractive Euclidean
remainder sequence of (c, p).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence


class BoundaryConventionError(ValueError):
    """The cross term at the separation step is not defined by the data
    (the common pairs exhaust one of the two sequences)."""


@dataclass(frozen=True)
class HNPair:
    c: int
    p: int

    def __post_init__(self):
        if not (self.c >= self.p >= 1):
            raise ValueError(f"pair ({self.c},{self.p}) must satisfy c >= p >= 1")


@dataclass(frozen=True)
class HNSequence:
    pairs: tuple[HNPair, ...]

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("a branch needs at least one pair")
        for cur, nxt in zip(self.pairs, self.pairs[1:]):
            if gcd(cur.c, cur.p) != nxt.c:
                raise ValueError(
                    f"gcd({cur.c},{cur.p}) = {gcd(cur.c, cur.p)} but next c is {nxt.c}"
                )
        last = self.pairs[-1]
        if gcd(last.c, last.p) != 1:
            raise ValueError(f"sequence incomplete: gcd({last.c},{last.p}) != 1")

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[int]]) -> "HNSequence":
        return cls(tuple(HNPair(int(c), int(p)) for c, p in pairs))

    @property
    def h(self) -> int:
        return len(self.pairs)

    @property
    def c1(self) -> int:
        return self.pairs[0].c

    @property
    def p1(self) -> int:
        return self.pairs[0].p

    def p_sum(self) -> int:
        return sum(q.p for q in self.pairs)

    def cp_sum(self) -> int:
        return sum(q.c * q.p for q in self.pairs)

    def is_tangent(self) -> bool:
        """Tangent to the host line: first contact exceeds the multiplicity."""
        return self.c1 > self.p1


def pair_multiplicities(c: int, p: int) -> list[int]:
    """Subtractive Euclidean remainder sequence of one pair."""
    a, b = c, p
    out = []
    while b > 0:
        out.append(b)
        a, b = max(a - b, b), min(a - b, b)
    return out


def multiplicity_sequence(seq: HNSequence) -> tuple[int, ...]:
    out: list[int] = []
    for q in seq.pairs:
        out.extend(pair_multiplicities(q.c, q.p))
    return tuple(out)


@dataclass(frozen=True)
class BranchPair:
    """Two branches, either at distinct points of the line at infinity or at
    a common point with ``s`` common pairs (equal ratios and equal branch
    locations through step s, violated at step s+1)."""

    first: HNSequence
    second: HNSequence
    same_point: bool = False
    s: int = 0

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("s must be non-negative")
        if self.s > 0 and not self.same_point:
            raise ValueError("common pairs require a common point")
        if self.s > min(self.first.h, self.second.h):
            raise ValueError("s exceeds a sequence length")
        for i in range(self.s):
            a, b = self.first.pairs[i], self.second.pairs[i]
            if a.c * b.p != b.c * a.p:
                raise ValueError(f"pair {i + 1} is declared common but ratios differ")

    @property
    def d(self) -> int:
        return self.first.c1 + self.second.c1

    def separation_is_boundary(self) -> bool:
        """True when the common pairs exhaust one sequence entirely."""
        return self.same_point and self.s >= min(self.first.h, self.second.h)

    @classmethod
    def from_json_dict(cls, data) -> "BranchPair":
        branches = data["branches"]
        if len(branches) != 2:
            raise ValueError("exactly two branches expected")
        return cls(
            HNSequence.from_pairs(branches[0]["pairs"]),
            HNSequence.from_pairs(branches[1]["pairs"]),
            bool(data.get("samePoint", False)),
            int(data.get("s", 0)),
        )


def joint_multiplicities(bp: BranchPair) -> tuple[int, int]:
    """Sum and sum of squares of the multiplicities of all centres
    infinitely near the common point.

    The sum is c1 + sum(p) - 1 per branch; the squares pick up a cross
    term 2 min(pt_{s+1} c_{s+1}, p_{s+1} ct_{s+1}) at the separation step.
    """
    if not bp.same_point:
        raise ValueError("joint multiplicities need a common point")
    if bp.separation_is_boundary():
        raise BoundaryConventionError(
            "cross term undefined: common pairs exhaust one branch"
        )
    a, b, s = bp.first, bp.second, bp.s
    total = (a.c1 + a.p_sum() - 1) + (b.c1 + b.p_sum() - 1)
    squares = 0
    for i in range(s):
        squares += (a.pairs[i].p + b.pairs[i].p) * (a.pairs[i].c + b.pairs[i].c)
    squares += sum(q.c * q.p for q in a.pairs[s:])
    squares += sum(q.c * q.p for q in b.pairs[s:])
    cross = 2 * min(
        b.pairs[s].p * a.pairs[s].c,
        a.pairs[s].p * b.pairs[s].c,
    )
    return total, squares + cross


def gamma_prime_a(bp: BranchPair) -> int:
    """gamma' from the canonical-degree count: sum(p) + sum(pt) - 2d."""
    return bp.first.p_sum() + bp.second.p_sum() - 2 * bp.d


def gamma_prime_b(bp: BranchPair) -> int:
    """gamma' from the self-intersection count: sum(m^2) - d^2.

    At a common point the cross term of :func:`joint_multiplicities`
    enters; at distinct points the branches contribute independently.
    """
    if bp.same_point:
        _, squares = joint_multiplicities(bp)
    else:
        squares = bp.first.cp_sum() + bp.second.cp_sum()
    return squares - bp.d * bp.d


@dataclass(frozen=True)
class DerivedParams:
    d: int
    alpha: Optional[int]
    alpha_tilde: Optional[int]
    alpha0: Optional[int]
    beta: int
    big_p: int
    big_p_tilde: int
    k: Optional[int]
    l: Optional[int]
    subdegree_inequality: Optional[bool]  # alpha0 * d < P + Pt


def _alpha_of(seq: HNSequence) -> Optional[int]:
    if seq.h < 2:
        return None
    c2 = seq.pairs[1].c
    diff = seq.c1 - seq.p1
    assert diff % c2 == 0, "gcd structure guarantees divisibility"
    return diff // c2


def derived_params(bp: BranchPair) -> DerivedParams:
    a, b = bp.first, bp.second
    alpha = _alpha_of(a)
    alpha_t = _alpha_of(b)
    alpha0 = min(alpha, alpha_t) if alpha is not None and alpha_t is not None else None
    big_p = sum(q.p for q in a.pairs[1:])
    big_pt = sum(q.p for q in b.pairs[1:])
    k = l = None
    if a.h >= 2:
        c2 = a.pairs[1].c
        k, l = a.c1 // c2, a.p1 // c2
    ineq = None
    if alpha0 is not None:
        ineq = alpha0 * bp.d < big_p + big_pt
    return DerivedParams(
        d=bp.d,
        alpha=alpha,
        alpha_tilde=alpha_t,
        alpha0=alpha0,
        beta=a.c1 - a.p1 - b.c1,
        big_p=big_p,
        big_p_tilde=big_pt,
        k=k,
        l=l,
        subdegree_inequality=ineq,
    )


def leading_repeats(seq: HNSequence) -> tuple[int, int]:
    """(run of (c2,c2)-pairs from index 2, run of (c1,c1)-pairs from index 1).

    The first count is the repeat parameter of a tangent branch, the second
    (minus one) the repeat parameter of a transversal branch.
    """
    from_two = 0
    if seq.h >= 2:
        c2 = seq.pairs[1].c
        for q in seq.pairs[1:]:
            if (q.c, q.p) == (c2, c2):
                from_two += 1
            else:
                break
    from_one = 0
    c1 = seq.c1
    for q in seq.pairs:
        if (q.c, q.p) == (c1, c1):
            from_one += 1
        else:
            break
    return from_two, from_one
