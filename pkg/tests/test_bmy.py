import random
from fractions import Fraction

import pytest

from snctools.barks import ContractibilityClass
from snctools.bmy import (
    BMYInstance,
    UnsupportedComponentError,
    build_fork_22n,
    check_bmy,
    enumerate_quotient_orders,
    fork_22n_determinant,
    local_group_order,
    unit_fraction_triples,
)
from snctools.trees import determinant

CHAIN = ContractibilityClass.ADMISSIBLE_CHAIN


def test_local_group_order_chain():
    assert local_group_order(2, CHAIN) == 2
    assert local_group_order(27, CHAIN) == 27


def test_local_group_order_fork_unsupported():
    with pytest.raises(UnsupportedComponentError):
        local_group_order(12, ContractibilityClass.FORK_233)


def test_local_group_order_not_contractible():
    with pytest.raises(ValueError):
        local_group_order(5, ContractibilityClass.NOT_CONTRACTIBLE)


def test_check_bmy_published_contradiction():
    instance = BMYInstance(
        chi_open=-1,
        components=((2, CHAIN), (5, CHAIN), (27, CHAIN), (9, CHAIN)),
        p_squared=Fraction(0),
    )
    report = check_bmy(instance)
    recip = Fraction(1, 2) + Fraction(1, 5) + Fraction(1, 27) + Fraction(1, 9)
    assert recip == Fraction(229, 270) < 1
    assert report.rhs == 3 * (-1 + recip) == Fraction(-41, 90)
    assert not report.holds


def test_check_bmy_capacity_chain():
    # chi = 1, no contractible parts: the bound caps the positive part at 3
    inst = BMYInstance(chi_open=1, components=(), p_squared=Fraction(3))
    assert check_bmy(inst).holds
    inst = BMYInstance(chi_open=1, components=(), p_squared=Fraction(31, 10))
    assert not check_bmy(inst).holds


def test_check_bmy_zero_slack():
    inst = BMYInstance(chi_open=0, components=(), p_squared=Fraction(0))
    report = check_bmy(inst)
    assert report.holds and report.slack == 0


def test_check_bmy_monotone():
    rng = random.Random(67)
    for _ in range(200):
        chi = rng.randint(-2, 2)
        comps = tuple((rng.randint(2, 30), CHAIN) for _ in range(rng.randint(0, 4)))
        p_sq = Fraction(rng.randint(-4, 8), rng.randint(1, 5))
        base = check_bmy(BMYInstance(chi, comps, p_sq))
        bigger_chi = check_bmy(BMYInstance(chi + 1, comps, p_sq))
        if base.holds:
            assert bigger_chi.holds
        if comps:
            det, cls = comps[0]
            sharper = ((max(2, det - 1), cls),) + comps[1:]
            improved = check_bmy(BMYInstance(chi, sharper, p_sq))
            if base.holds:
                assert improved.holds


def test_enumerate_orders_windows():
    assert enumerate_quotient_orders(8) == [(2, 2)]
    assert enumerate_quotient_orders(7) == [(2, 2)]
    assert enumerate_quotient_orders(6) == [(2, 2), (2, 3), (3, 2)]
    with pytest.raises(ValueError):
        enumerate_quotient_orders(5)


def test_enumerate_orders_stable_beyond_12():
    for gamma in (6, 7, 8):
        assert enumerate_quotient_orders(gamma) == enumerate_quotient_orders(gamma, dmax=40)


def test_unit_fraction_triples():
    assert unit_fraction_triples() == [(2, 3, 6), (2, 4, 4), (3, 3, 3)]


def test_fork_determinant_formula_vs_graph():
    rng = random.Random(71)
    for _ in range(100):
        b = rng.randint(2, 7)
        twig = [rng.randint(-6, -2) for _ in range(rng.randint(1, 6))]
        fork = build_fork_22n(-b, twig)
        assert fork_22n_determinant(-b, twig) == determinant(fork, fork.ids)


def test_fork_determinant_published_floor():
    # b >= 3 and a long twig not made of -2 curves alone puts the
    # determinant at 20 or above
    for b in (3, 4, 5):
        for twig in ([-3, -2], [-2, -3], [-4], [-3, -2, -2]):
            n = fork_22n_determinant(-b, twig)
            assert n >= 20
