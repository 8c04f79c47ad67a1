import random

import pytest

from snctools.hn import (
    BoundaryConventionError,
    BranchPair,
    HNPair,
    HNSequence,
    derived_params,
    gamma_prime_a,
    gamma_prime_b,
    joint_multiplicities,
    leading_repeats,
    multiplicity_sequence,
    pair_multiplicities,
)
from snctools.selfcheck import random_branch_pair, random_hn_sequence


def seq(*pairs):
    return HNSequence.from_pairs(pairs)


def test_validate_accepts_smooth_and_descending():
    assert seq((3, 1)).h == 1
    s = seq((9, 6), (3, 1))
    assert s.c1 == 9 and s.pairs[1] == HNPair(3, 1)


def test_validate_rejects_incomplete():
    with pytest.raises(ValueError):
        seq((4, 2))


def test_validate_rejects_broken_gcd_chain():
    with pytest.raises(ValueError):
        seq((9, 6), (2, 1))


def test_validate_rejects_c_less_than_p():
    with pytest.raises(ValueError):
        HNPair(2, 3)


def test_pair_multiplicities_subtractive():
    assert pair_multiplicities(9, 6) == [6, 3, 3]
    assert pair_multiplicities(3, 1) == [1, 1, 1]
    assert pair_multiplicities(2, 2) == [2]


def test_multiplicity_sequence_examples():
    assert multiplicity_sequence(seq((1, 1))) == (1,)
    mu = multiplicity_sequence(seq((3, 1)))
    assert sum(mu) == 3 and sum(m * m for m in mu) == 3
    mu = multiplicity_sequence(seq((9, 6), (3, 1)))
    assert sum(mu) == 15 and sum(m * m for m in mu) == 57


def test_multiplicity_closed_forms_random():
    rng = random.Random(41)
    for _ in range(300):
        s = random_hn_sequence(rng)
        mu = multiplicity_sequence(s)
        assert sum(mu) == s.c1 + s.p_sum() - 1
        assert sum(m * m for m in mu) == s.cp_sum()


def test_single_pair_c_one():
    for c in range(1, 12):
        s = seq((c, 1))
        mu = multiplicity_sequence(s)
        assert sum(mu) == c and sum(m * m for m in mu) == c


def test_joint_multiplicities_double_point():
    bp = BranchPair(seq((1, 1)), seq((1, 1)), same_point=True, s=0)
    assert joint_multiplicities(bp) == (2, 4)


def test_joint_multiplicities_boundary_flagged():
    bp = BranchPair(seq((2, 1)), seq((2, 1), (1, 1)), same_point=True, s=1)
    assert bp.separation_is_boundary()
    with pytest.raises(BoundaryConventionError):
        joint_multiplicities(bp)
    identical = BranchPair(seq((2, 1)), seq((2, 1)), same_point=True, s=1)
    with pytest.raises(BoundaryConventionError):
        joint_multiplicities(identical)


def test_joint_multiplicities_cauchy_schwarz():
    rng = random.Random(43)
    done = 0
    while done < 200:
        bp = random_branch_pair(rng)
        if not bp.same_point or bp.separation_is_boundary():
            continue
        total, squares = joint_multiplicities(bp)
        count = (
            len(multiplicity_sequence(bp.first))
            + len(multiplicity_sequence(bp.second))
        )
        assert squares * count >= total * total
        done += 1


def test_gamma_prime_inconsistent_double_conic():
    bp = BranchPair(seq((1, 1)), seq((1, 1)), same_point=True, s=0)
    assert gamma_prime_a(bp) == -2
    assert gamma_prime_b(bp) == 0


def test_gamma_prime_symmetric_in_branches():
    rng = random.Random(47)
    done = 0
    while done < 200:
        bp = random_branch_pair(rng)
        if bp.separation_is_boundary():
            continue
        flipped = BranchPair(bp.second, bp.first, bp.same_point, bp.s)
        assert gamma_prime_a(bp) == gamma_prime_a(flipped)
        assert gamma_prime_b(bp) == gamma_prime_b(flipped)
        done += 1


def test_gamma_prime_second_contact_one_family():
    # eight shared pairs starting from (3,1): the two closed forms agree and
    # reproduce the displayed linear system gamma + 10 = 2s + b at b = 0
    pairs = [(3, 1)] + [(1, 1)] * 7
    bp = BranchPair(
        HNSequence.from_pairs(pairs),
        HNSequence.from_pairs(pairs),
        same_point=True,
        s=7,
    )
    s, b = 7, 0
    gamma = gamma_prime_a(bp)
    assert gamma == 4
    assert gamma_prime_b(bp) == gamma
    assert gamma + 10 == 2 * s + b
    assert gamma + 24 == 4 * s + b
    # the sibling solutions of the displayed system arise from longer tails
    for extra, expect in ((1, 5), (2, 6)):
        longer = BranchPair(
            HNSequence.from_pairs(pairs),
            HNSequence.from_pairs(pairs + [(1, 1)] * extra),
            same_point=True,
            s=7,
        )
        assert gamma_prime_a(longer) == expect - 1 + 1  # = expect
        assert gamma_prime_a(longer) + 10 == 2 * 7 + extra


def test_derived_params_examples():
    bp = BranchPair(seq((9, 3), (3, 1)), seq((4, 1)))
    params = derived_params(bp)
    assert params.alpha == 2 and params.k == 3 and params.l == 1
    assert params.beta == 9 - 3 - 4 == 2
    assert params.d == 13
    assert params.alpha_tilde is None and params.alpha0 is None
    assert params.subdegree_inequality is None


def test_derived_params_inequality():
    bp = BranchPair(seq((9, 3), (3, 1)), seq((9, 3), (3, 1)), same_point=True, s=1)
    params = derived_params(bp)
    assert params.alpha0 == 2
    # alpha0 * d = 36 against P + Pt = 2
    assert params.subdegree_inequality is False


def test_leading_repeats():
    assert leading_repeats(seq((6, 4), (2, 2), (2, 2), (2, 1))) == (2, 0)
    assert leading_repeats(seq((2, 2), (2, 2), (2, 1))) == (1, 2)
    assert leading_repeats(seq((1, 1))) == (0, 1)


def test_branch_pair_validation():
    with pytest.raises(ValueError):
        BranchPair(seq((2, 1)), seq((3, 1)), same_point=True, s=1)  # ratios differ
    with pytest.raises(ValueError):
        BranchPair(seq((2, 1)), seq((2, 1)), same_point=False, s=1)
    with pytest.raises(ValueError):
        BranchPair(seq((2, 1)), seq((2, 1)), same_point=True, s=3)
    # equal ratios with different magnitudes are a legitimate common pair
    bp = BranchPair(seq((9, 6), (3, 1)), seq((3, 2), (1, 1)), same_point=True, s=1)
    assert bp.s == 1


def test_branch_pair_json():
    bp = BranchPair.from_json_dict(
        {
            "branches": [{"pairs": [[9, 6], [3, 1]]}, {"pairs": [[1, 1]]}],
            "samePoint": False,
            "s": 0,
        }
    )
    assert bp.first.c1 == 9 and bp.second.c1 == 1
