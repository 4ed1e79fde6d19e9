from fractions import Fraction

import pytest

from alabama import core
from alabama.exceptions import InputError, TieUnresolved


def test_quota_three_states():
    profile = core.PopulationProfile((53, 33, 14))

    quota = core.compute_quota(profile, 10)
    assert quota.values == (Fraction(53, 10), Fraction(33, 10), Fraction(14, 10))
    assert quota.floors == (5, 3, 1)
    assert quota.leftover == 1

    quota = core.compute_quota(profile, 11)
    assert [round(float(v), 2) for v in quota.values] == [5.83, 3.63, 1.54]


def test_quota_zero_house():
    quota = core.compute_quota(core.PopulationProfile((5, 7, 9)), 0)

    assert quota.values == (0, 0, 0)
    assert quota.leftover == 0


def test_allocate_three_states():
    profile = core.PopulationProfile((53, 33, 14))

    assert core.hamilton_allocate(profile, 10).seats == (5, 3, 2)
    assert core.hamilton_allocate(profile, 11).seats == (6, 4, 1)
    assert core.hamilton_allocate(profile, 10).rounded_up == frozenset({2})


def test_allocate_five_states():
    profile = core.PopulationProfile((28, 27, 27, 9, 9))

    assert core.hamilton_allocate(profile, 5).seats == (1, 1, 1, 1, 1)
    assert core.hamilton_allocate(profile, 6).seats == (2, 2, 2, 0, 0)


def test_allocate_single_state():
    allocation = core.hamilton_allocate(core.PopulationProfile((5,)), 7)

    assert allocation.seats == (7,)


def test_seats_sum_to_house_size():
    profile = core.PopulationProfile((101, 57, 33, 8, 1))
    policy = core.TiePolicy.seeded_lot(3)

    for n in range(0, 60):
        allocation = core.hamilton_allocate(profile, n, policy)
        quota = allocation.quota
        assert sum(allocation.seats) == n
        for s, q in zip(allocation.seats, quota.values):
            assert q - 1 < s < q + 1


def test_ties_six_three_one():
    profile = core.PopulationProfile((6, 3, 1))

    ties = core.detect_ties(core.compute_quota(profile, 4), 4)
    assert ties == [core.TieEvent(4, frozenset({0, 2}), 1)]

    ties = core.detect_ties(core.compute_quota(profile, 5), 5)
    assert ties == [core.TieEvent(5, frozenset({1, 2}), 1)]

    assert core.detect_ties(core.compute_quota(core.PopulationProfile((53, 33, 14)), 10), 10) == []


def test_error_policy_raises_with_event():
    profile = core.PopulationProfile((6, 3, 1))

    with pytest.raises(TieUnresolved) as excinfo:
        core.hamilton_allocate(profile, 4)

    assert excinfo.value.error_code == 3
    assert excinfo.value.tie_event.tied_states == frozenset({0, 2})


def test_priority_policy():
    profile = core.PopulationProfile((6, 3, 1))

    allocation = core.hamilton_allocate(profile, 4, core.TiePolicy.fixed_priority((0, 1, 2)))
    assert allocation.seats == (3, 1, 0)

    allocation = core.hamilton_allocate(profile, 4, core.TiePolicy.fixed_priority((2, 1, 0)))
    assert allocation.seats == (2, 1, 1)


def test_lot_is_reproducible_and_fair():
    tie = core.TieEvent(4, frozenset({0, 2}), 1)

    assert core.TiePolicy.seeded_lot(9).resolve(tie) == core.TiePolicy.seeded_lot(9).resolve(tie)

    winners = [core.TiePolicy.seeded_lot(seed).resolve(tie) for seed in range(400)]
    share = sum(1 for w in winners if w == frozenset({0})) / len(winners)
    assert 0.4 < share < 0.6
    assert all(len(w) == 1 for w in winners)


def test_policy_parse():
    assert core.TiePolicy.parse("error") == core.TiePolicy.error_on_tie()
    assert core.TiePolicy.parse("priority:2,0,1").priority == (2, 0, 1)
    assert core.TiePolicy.parse("lot:42") == core.TiePolicy.seeded_lot(42)

    for text in ("random", "priority:0,0,1", "lot:x", "error:1"):
        with pytest.raises(InputError):
            core.TiePolicy.parse(text)


def test_priority_length_checked():
    with pytest.raises(InputError):
        core.hamilton_allocate(core.PopulationProfile((6, 3, 1)), 4, core.TiePolicy.fixed_priority((1, 0)))


def test_profile_validation():
    for populations in ((), (3, 0), (3, -1)):
        with pytest.raises(InputError):
            core.PopulationProfile(populations)

    with pytest.raises(InputError):
        core.PopulationProfile((1, 2), ("A",))

    with pytest.raises(InputError):
        core.compute_quota(core.PopulationProfile((1, 2)), -1)


def test_profile_helpers():
    profile = core.PopulationProfile((6, 3, 3))

    assert profile.m == 3
    assert profile.total == 12
    assert profile.shares == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))
    assert profile.state_names == ("A", "B", "C")
    assert profile.reduced().populations == (2, 1, 1)
    assert profile.scaled(2).populations == (12, 6, 6)
    assert profile.permuted((2, 0, 1)).populations == (3, 6, 3)
    assert core.default_name(26) == "S27"


def test_profile_from_shares():
    profile = core.PopulationProfile.from_shares([Fraction(45, 100), Fraction(35, 100), Fraction(20, 100)])

    assert profile.populations == (9, 7, 4)

    with pytest.raises(InputError):
        core.PopulationProfile.from_shares([Fraction(1, 2), Fraction(1, 3)])


def test_allocation_dict():
    allocation = core.hamilton_allocate(core.PopulationProfile((53, 33, 14)), 11)
    data = allocation.to_dict()

    assert data == {"house_size": 11, "seats": [6, 4, 1], "rounded_up": [0, 1]}
    assert core.Allocation.from_dict(data) == allocation


def test_huge_populations_exact():
    # remainders differ by 1 / P with P near 2**70
    total = 2**70
    profile = core.PopulationProfile((total // 2 + 1, total // 2 - 1))

    allocation = core.hamilton_allocate(profile, 1)
    assert allocation.seats == (1, 0)


def test_allocation_follows_permutation():
    profile = core.PopulationProfile((101, 57, 33, 8, 1))
    priority = (3, 0, 4, 1, 2)
    order = (2, 4, 0, 3, 1)
    permuted = profile.permuted(order)
    permuted_priority = tuple(order.index(i) for i in priority)

    for n in range(0, 80):
        seats = core.hamilton_allocate(profile, n, core.TiePolicy.fixed_priority(priority)).seats
        moved = core.hamilton_allocate(permuted, n, core.TiePolicy.fixed_priority(permuted_priority)).seats
        assert moved == tuple(seats[i] for i in order)


def test_allocation_scale_invariant():
    profile = core.PopulationProfile((101, 57, 33, 8, 1))
    policy = core.TiePolicy.fixed_priority(range(5))

    for n in range(0, 80):
        assert core.hamilton_allocate(profile.scaled(7), n, policy).seats == core.hamilton_allocate(profile, n, policy).seats


def test_lot_allocation_deterministic():
    profile = core.PopulationProfile((6, 3, 1))

    first = [core.hamilton_allocate(profile, n, core.TiePolicy.seeded_lot(17)).seats for n in range(0, 40)]
    second = [core.hamilton_allocate(profile, n, core.TiePolicy.seeded_lot(17)).seats for n in range(39, -1, -1)]

    assert first == second[::-1]
