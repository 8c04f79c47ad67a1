"""Seeded randomized identity checks shared by the CLI and the test suite.

Each check pits two independent computations against each other: simulated
multiplicities against their closed forms, the incremental blow-down
counter against a from-scratch recomputation, barks against capacity sums,
and the fraction-free determinant against naive rational elimination.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from . import trees
from .barks import bark_divisor, capacity, maximal_twigs
from .hn import HNPair, HNSequence, multiplicity_sequence
from .trees import BlowKind, WeightedTree, blow_down, blow_up, build_tree, kk_plus_t

DEFAULT_SEED = 1105


# -- random generators --------------------------------------------------------


def random_hn_sequence(rng: random.Random, c_max: int = 50) -> HNSequence:
    """Valid pair sequence built bottom-up along the gcd chain."""
    h = rng.randint(1, 4)
    c_next = 1
    pairs: list[HNPair] = []
    for _ in range(h):
        for _ in range(50):
            v = rng.randint(1, max(2, c_max // max(c_next, 1)))
            u = rng.randint(1, v)
            if gcd(u, v) == 1 and c_next * v <= c_max:
                pairs.append(HNPair(c_next * v, c_next * u))
                c_next *= v
                break
        else:
            break
    pairs.reverse()
    if not pairs or gcd(pairs[-1].c, pairs[-1].p) != 1:
        return HNSequence((HNPair(1, 1),))
    return HNSequence(tuple(pairs))


def random_hn_tail(rng: random.Random, c_top: int, max_pairs: int = 5) -> list[HNPair]:
    """Valid pair chain starting at contact ``c_top`` and descending to gcd 1."""
    pairs: list[HNPair] = []
    c = c_top
    while True:
        if c == 1:
            pairs.append(HNPair(1, 1))
            if rng.random() < 0.7 or len(pairs) >= max_pairs:
                break
            continue
        if len(pairs) >= max_pairs:
            p = 1  # force descent to gcd 1
        else:
            p = rng.randint(1, c)
        pairs.append(HNPair(c, p))
        c = gcd(c, p)
        if c == 1 and (rng.random() < 0.8 or len(pairs) >= max_pairs):
            break
    if gcd(pairs[-1].c, pairs[-1].p) != 1:
        pairs.append(HNPair(gcd(pairs[-1].c, pairs[-1].p), 1))
    return pairs


def random_branch_pair(rng: random.Random, c_max: int = 30):
    """Random valid two-branch datum: distinct points, or a common point
    with a literal common prefix of pairs."""
    from .hn import BranchPair

    if rng.random() < 0.5:
        first = HNSequence(tuple(random_hn_tail(rng, rng.randint(1, c_max))))
        second = HNSequence(tuple(random_hn_tail(rng, rng.randint(1, c_max))))
        return BranchPair(first, second, same_point=False, s=0)
    first = HNSequence(tuple(random_hn_tail(rng, rng.randint(1, c_max))))
    s = rng.randint(0, first.h - 1)
    prefix = list(first.pairs[:s])
    start = gcd(prefix[-1].c, prefix[-1].p) if s else rng.randint(1, c_max)
    tail = random_hn_tail(rng, start)
    second = HNSequence(tuple(prefix + tail))
    return BranchPair(first, second, same_point=True, s=s)


def random_tree(
    rng: random.Random,
    n: int,
    weight_range: tuple[int, int] = (-6, 1),
) -> WeightedTree:
    weights = {i: rng.randint(*weight_range) for i in range(n)}
    edges = [(i, rng.randrange(i)) for i in range(1, n)]
    return build_tree(weights, edges)


def random_nc_minimal_tree(rng: random.Random, n: int) -> WeightedTree:
    """Random tree that is NC-minimal with admissible twigs: branching
    vertices may carry any weight <= -1, the rest stay <= -2."""
    tree = random_tree(rng, n)
    deltas = {}
    for v in tree.ids:
        if tree.degree(v) >= 3:
            w = rng.randint(-5, -1)
        else:
            w = rng.randint(-6, -2)
        deltas[v] = w - tree.weight(v)
    return tree.with_weight_deltas(deltas)


# -- oracles -------------------------------------------------------------------


def det_fraction_oracle(matrix: list[list[int]]) -> int:
    """Naive Gaussian elimination over Fractions (independent of Bareiss)."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if m[i][k] != 0), None)
        if pivot is None:
            return 0
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    assert det.denominator == 1
    return int(det)


# -- the four check suites -----------------------------------------------------


@dataclass
class CheckReport:
    name: str
    cases: int
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "pass" if self.ok else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"[{status}] {self.name}: {self.cases} cases{extra}"


def check_multiplicity_formulas(seed: int = DEFAULT_SEED, cases: int = 1000, c_max: int = 50) -> CheckReport:
    rng = random.Random(seed)
    for _ in range(cases):
        seq = random_hn_sequence(rng, c_max)
        mu = multiplicity_sequence(seq)
        if sum(mu) != seq.c1 + seq.p_sum() - 1:
            return CheckReport("multiplicity sums", cases, False, f"{seq}")
        if sum(m * m for m in mu) != seq.cp_sum():
            return CheckReport("multiplicity squares", cases, False, f"{seq}")
    return CheckReport("multiplicity formulas", cases, True)


def check_rewrite_counter(seed: int = DEFAULT_SEED, cases: int = 500, max_vertices: int = 20) -> CheckReport:
    rng = random.Random(seed + 1)
    for _ in range(cases):
        tree = random_tree(rng, rng.randint(2, max_vertices // 2))
        counter = kk_plus_t(tree, tree.ids)
        for _ in range(rng.randint(5, 25)):
            ops = []
            if len(tree.ids) < max_vertices:
                ops.extend(["vertex", "free"])
                if tree.edges:
                    ops.append("edge")
            contractible = [
                v
                for v in tree.ids
                if tree.weight(v) == -1
                and tree.degree(v) <= 2
                and len(set(tree.neighbors(v))) == tree.degree(v)
                and len(tree.ids) > 1
            ]
            if contractible:
                ops.extend(["down"] * 3)
            if not ops:
                break
            op = rng.choice(ops)
            if op == "edge":
                tree, kind, _ = blow_up(tree, edge=rng.choice(tree.edges))
            elif op == "vertex":
                tree, kind, _ = blow_up(tree, vertex=rng.choice(tree.ids))
            elif op == "free":
                tree, kind, _ = blow_up(tree, free=True)
            else:
                v = rng.choice(contractible)
                before = counter
                tree, kind = blow_down(tree, v)
                delta = trees.kk_blow_down_delta(kind)
                if kind is BlowKind.SPROUTING and delta != 1:
                    return CheckReport("sprouting delta", cases, False)
                if kind is BlowKind.SUBDIVISIONAL and delta != 0:
                    return CheckReport("subdivisional delta", cases, False)
                counter = before + delta
                if counter != kk_plus_t(tree, tree.ids):
                    return CheckReport("counter recomputation", cases, False, f"after blow-down of {v}")
                continue
            counter += trees.kk_blow_up_delta(kind)
            if counter != kk_plus_t(tree, tree.ids):
                return CheckReport("counter recomputation", cases, False, f"after {op} blow-up")
    return CheckReport("blow-down bookkeeping", cases, True)


def check_bark_capacities(seed: int = DEFAULT_SEED, cases: int = 200, max_vertices: int = 12) -> CheckReport:
    from .barks import ContractibilityClass, classify_contractible

    rng = random.Random(seed + 2)
    done = 0
    while done < cases:
        tree = random_nc_minimal_tree(rng, rng.randint(3, max_vertices))
        if tree.is_chain(tree.ids):
            continue
        if classify_contractible(tree, tree.ids) is not ContractibilityClass.NOT_CONTRACTIBLE:
            continue
        bark = bark_divisor(tree)
        total = sum((capacity(tree, t) for t in maximal_twigs(tree)), Fraction(0))
        if bark.self_intersection(tree) != -total:
            return CheckReport("bark self-intersection", cases, False, tree.to_json())
        done += 1
    return CheckReport("bark = -(capacity sum)", cases, True)


def check_determinants(seed: int = DEFAULT_SEED, cases: int = 500, max_vertices: int = 12) -> CheckReport:
    from .barks import chain_determinant
    from .trees import determinant, intersection_matrix

    rng = random.Random(seed + 3)
    for _ in range(cases):
        tree = random_tree(rng, rng.randint(1, max_vertices), (-9, 3))
        sub = [v for v in tree.ids if rng.random() < 0.8]
        q = intersection_matrix(tree, sub)
        neg = [[-x for x in row] for row in q]
        if determinant(tree, sub) != det_fraction_oracle(neg):
            return CheckReport("determinant oracle", cases, False, tree.to_json())
        weights = [rng.randint(-9, -2) for _ in range(rng.randint(0, 12))]
        chain = trees.chain_tree(weights)
        if chain_determinant(weights) != determinant(chain, chain.ids):
            return CheckReport("chain recurrence", cases, False, str(weights))
    return CheckReport("determinant cross-checks", cases, True)


def run_all(seed: int = DEFAULT_SEED, max_vertices: int = 20) -> list[CheckReport]:
    return [
        check_multiplicity_formulas(seed),
        check_rewrite_counter(seed, max_vertices=max_vertices),
        check_bark_capacities(seed, max_vertices=max(6, max_vertices // 2)),
        check_determinants(seed, max_vertices=max(6, max_vertices // 2)),
    ]
