import itertools
import random
from fractions import Fraction

import pytest

from snctools.barks import (
    AdmissibilityError,
    Chain,
    ContractibilityClass,
    FujitaZeroClass,
    bark_divisor,
    capacity,
    capacity_of_weights,
    chain_determinant,
    classify_contractible,
    classify_fujita_zero,
    maximal_twigs,
)
from snctools.selfcheck import random_nc_minimal_tree
from snctools.trees import Tag, build_tree, chain_tree, negative_definite


def test_capacity_single_minus3():
    assert capacity(chain_tree([-3]), [0]) == Fraction(1, 3)


def test_capacity_eleven_minus2():
    tree = chain_tree([-2] * 11)
    assert capacity(tree, tree.ids) == Fraction(11, 12)


def test_capacity_tau_twos_closed_form():
    for tau in range(1, 12):
        assert capacity_of_weights([-2] * tau) == Fraction(tau, tau + 1)


def test_capacity_orientation_matters():
    tree = chain_tree([-2, -5])
    assert capacity(tree, [0, 1]) == Fraction(5, 9)
    assert capacity(tree, [1, 0]) == Fraction(2, 9)


def test_capacity_requires_admissible():
    with pytest.raises(AdmissibilityError):
        capacity(chain_tree([-1, -2]), [0, 1])


def test_capacity_tip_bound_exhaustive():
    # e(R) >= 1/k with -k the tip weight, all chains of length <= 8
    for length in range(1, 9):
        for weights in itertools.product(range(-6, -1), repeat=length):
            e = capacity_of_weights(weights)
            assert Fraction(1, -weights[0]) <= e < 1


def test_maximal_twigs_skip_e_and_branching():
    tree = build_tree(
        {0: -2, 1: -2, 2: -3, 3: -2, 4: -2, 5: 5, 6: -2, 7: -2},
        [(0, 1), (1, 2), (2, 4), (4, 5), (2, 7), (3, 5), (3, 6)],
        {5: Tag.E},
    )
    twigs = maximal_twigs(tree)
    # tip 0 walks through 1 and stops before the branching vertex 2;
    # tip 6 walks through 3 and stops before E; tip 7 is a bare twig
    assert tuple(t.ids for t in twigs) == ((0, 1), (6, 3), (7,))


def test_bark_no_twigs_is_zero():
    tree = build_tree(
        {0: -2, 1: -2, 2: 5},
        [(0, 1), (1, 2), (0, 2)],
        {2: Tag.E},
    )
    bark = bark_divisor(tree)
    assert bark.support == ()
    assert bark.self_intersection(tree) == 0


def test_bark_single_minus2_tip():
    tree = build_tree(
        {0: -2, 1: -3, 2: -2, 3: -2, 4: 9},
        [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)],
        {4: Tag.E},
    )
    bark = bark_divisor(tree)
    assert bark.coefficient(0) == Fraction(1, 2)
    assert bark.self_intersection(tree) == Fraction(-1, 2)


def test_bark_published_twig_pair():
    # twigs: one -3 tip and one chain of eleven -2, hanging off a core
    weights = {0: -3}
    edges = []
    for i in range(1, 12):
        weights[i] = -2
        edges.append((i, i + 1) if i < 11 else (11, 12))
    edges = [(i, i + 1) for i in range(1, 11)]
    weights[12] = -4  # branching core
    weights[13] = -4
    weights[14] = 9
    edges += [(0, 12), (11, 12), (12, 13), (13, 14), (14, 12)]
    tree = build_tree(weights, edges, {14: Tag.E})
    # twig 0 is the -3 tip, twig 1..11 the -2 chain ending at the core
    twigs = maximal_twigs(tree)
    assert {t.ids for t in twigs} == {(0,), (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11)}
    bark = bark_divisor(tree)
    assert bark.self_intersection(tree) == -(Fraction(1, 3) + Fraction(11, 12))
    assert bark.self_intersection(tree) == Fraction(-5, 4)


def test_bark_equals_capacity_sum_on_random_trees():
    rng = random.Random(31)
    done = 0
    while done < 50:
        tree = random_nc_minimal_tree(rng, rng.randint(4, 12))
        if tree.is_chain(tree.ids):
            continue
        if classify_contractible(tree, tree.ids) is not ContractibilityClass.NOT_CONTRACTIBLE:
            continue
        bark = bark_divisor(tree)
        total = sum((capacity(tree, t) for t in maximal_twigs(tree)), Fraction(0))
        assert bark.self_intersection(tree) == -total
        done += 1


def test_bark_rejects_non_minimal():
    tree = chain_tree([-1, -2, -3])
    with pytest.raises(ValueError):
        bark_divisor(tree)


def test_classify_chain_all_minus2():
    tree = chain_tree([-2] * 6)
    assert classify_contractible(tree, tree.ids) is ContractibilityClass.ADMISSIBLE_CHAIN


def test_classify_single_zero_vertex():
    tree = build_tree({0: 0})
    assert classify_contractible(tree, [0]) is ContractibilityClass.NOT_CONTRACTIBLE


def test_classify_fork_235():
    tree = build_tree(
        {0: -2, 1: -2, 2: -3, 3: -5},
        [(0, 1), (0, 2), (0, 3)],
    )
    assert classify_contractible(tree, tree.ids) is ContractibilityClass.FORK_235
    assert negative_definite(tree, tree.ids)


def test_classify_fork_22n():
    tree = build_tree(
        {0: -2, 1: -2, 2: -2, 3: -3, 4: -2},
        [(0, 1), (0, 2), (0, 3), (3, 4)],
    )
    assert classify_contractible(tree, tree.ids) is ContractibilityClass.FORK_22N


def test_classify_fork_negative_definiteness_decides():
    # three -2 branches around a -1 centre match {2,2,2} but fail definiteness
    tree = build_tree({0: -1, 1: -2, 2: -2, 3: -2}, [(0, 1), (0, 2), (0, 3)])
    assert classify_contractible(tree, tree.ids) is ContractibilityClass.NOT_CONTRACTIBLE


def test_classify_disconnected_rejected():
    tree = build_tree({0: -2, 1: -2})
    with pytest.raises(ValueError):
        classify_contractible(tree, [0, 1])


def test_classified_implies_negative_definite():
    rng = random.Random(37)
    for _ in range(200):
        n = rng.randint(1, 7)
        tree = random_nc_minimal_tree(rng, n)
        sub = sorted(tree.ids)
        cls = classify_contractible(tree, sub)
        if cls is not ContractibilityClass.NOT_CONTRACTIBLE:
            assert negative_definite(tree, sub)


def test_fujita_any_chain():
    for weights in ([-2], [0, -3], [-2, -1, -7]):
        tree = chain_tree(weights)
        assert classify_fujita_zero(tree, tree.ids) is FujitaZeroClass.CHAIN


def test_fujita_finite_fork_333():
    tree = build_tree(
        {0: -2, 1: -3, 2: -3, 3: -3},
        [(0, 1), (0, 2), (0, 3)],
    )
    assert classify_fujita_zero(tree, tree.ids) is FujitaZeroClass.FINITE_FORK


def test_fujita_fork_236_via_chain_branch():
    # branch determinants 2, 3, 6 with the 6 realized by a chain
    tree = build_tree(
        {0: -3, 1: -2, 2: -3, 3: -2, 4: -4},
        [(0, 1), (0, 2), (0, 3), (3, 4)],
    )
    assert chain_determinant([-2, -4]) == 7  # not this one
    assert chain_determinant([-2, -3]) == 5
    tree = build_tree(
        {0: -3, 1: -2, 2: -3, 3: -6},
        [(0, 1), (0, 2), (0, 3)],
    )
    assert classify_fujita_zero(tree, tree.ids) is FujitaZeroClass.FINITE_FORK


def test_fujita_two_branch_four_tips():
    tree = build_tree(
        {0: -3, 1: -3, 2: -2, 3: -2, 4: -2, 5: -2},
        [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)],
    )
    assert classify_fujita_zero(tree, tree.ids) is FujitaZeroClass.TWO_BRANCH_FOUR_TIPS


def test_fujita_no_match():
    tree = build_tree(
        {0: -2, 1: -2, 2: -2, 3: -7},
        [(0, 1), (0, 2), (0, 3)],
    )
    assert classify_fujita_zero(tree, tree.ids) is FujitaZeroClass.NO_MATCH


def test_chain_type_rejects_validation():
    tree = chain_tree([-2, -2, -2])
    chain = Chain((0, 2))
    with pytest.raises(ValueError):
        chain.validate_in(tree)
