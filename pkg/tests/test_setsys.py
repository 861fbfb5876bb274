import random
from itertools import combinations
from math import comb

import pytest

from fqincidence.errors import BudgetExceeded, SubsetTooLarge
from fqincidence.ffield import make_field
from fqincidence.geom import all_planes_through_one, count_incidences, plane_through_one
from fqincidence.setsys import (
    SetSystem,
    is_shattered,
    neighborhood_system,
    packing_bound_check,
    rich_elements,
    sauer_shelah,
    separation_check,
    shatter_function,
    vc_dimension,
)


def powerset_system(n):
    return SetSystem(n, list(range(1 << n)))


def singleton_system(n):
    return SetSystem(n, [1 << i for i in range(n)])


def all_points3(q):
    return [(i % q, (i // q) % q, i // (q * q)) for i in range(q**3)]


def test_from_sets_roundtrip_and_sizes():
    s = SetSystem.from_sets(5, [[0, 2], [], [4, 1, 2]])
    assert s.member_elements(0) == (0, 2)
    assert s.member_elements(1) == ()
    assert s.member_size(2) == 3
    with pytest.raises(ValueError):
        SetSystem.from_sets(3, [[3]])


def test_dedup_preserves_first_labels():
    s = SetSystem.from_sets(3, [[0], [1], [0]], labels=["a", "b", "c"])
    d = s.dedup()
    assert len(d.family) == 2
    assert d.labels == ["a", "b"]


def test_neighborhood_sizes_gf3():
    fs = make_field(3, 1)
    planes = all_planes_through_one(fs)
    sys_bp = neighborhood_system(fs, [(1, 0, 0)], planes, "by_point")
    assert sys_bp.ground_size == 26
    assert sys_bp.member_size(0) == 9  # planes with first normal coordinate 1


def test_neighborhood_empty_points():
    fs = make_field(3, 1)
    planes = all_planes_through_one(fs)
    s = neighborhood_system(fs, [], planes, "by_point")
    assert s.family == []


def test_neighborhood_sizes_match_incidence_oracle():
    fs = make_field(5, 1)
    rng = random.Random(21)
    pts = random.Random(21).sample(all_points3(5), 10)
    planes = [
        plane_through_one((i % 5, (i // 5) % 5, i // 25))
        for i in rng.sample(range(1, 125), 10)
    ]
    s = neighborhood_system(fs, pts, planes, "by_point")
    for i, pt in enumerate(pts):
        expected = count_incidences(fs, [pt], planes, "oracle").count
        assert s.member_size(i) == expected
    dual = neighborhood_system(fs, pts, planes, "by_plane")
    for j, pl in enumerate(planes):
        expected = count_incidences(fs, pts, [pl], "oracle").count
        assert dual.member_size(j) == expected


def test_is_shattered_power_set_and_singletons():
    assert is_shattered(powerset_system(3), [0, 1, 2]) is True
    assert is_shattered(singleton_system(3), [0, 1]) is False


def test_is_shattered_rejects_large_subset():
    with pytest.raises(SubsetTooLarge):
        is_shattered(powerset_system(3), list(range(21)))


def test_no_four_points_shattered_by_planes_gf3():
    fs = make_field(3, 1)
    planes = all_planes_through_one(fs)
    rng = random.Random(3)
    pts = rng.sample(all_points3(3), 8)
    system = neighborhood_system(fs, pts, planes, "by_plane")
    for four in combinations(range(len(pts)), 4):
        assert is_shattered(system, four) is False


def test_vc_dimension_singletons_and_powerset():
    assert vc_dimension(singleton_system(3), 3) == (1, False)
    assert vc_dimension(powerset_system(3), 3) == (3, True)
    assert vc_dimension(powerset_system(3), 4) == (3, False)


def test_vc_dimension_degenerate_families():
    assert vc_dimension(SetSystem(4, []), 2) == (0, False)
    assert vc_dimension(SetSystem(4, [0b1111]), 2) == (0, False)


def test_vc_dimension_budget():
    with pytest.raises(BudgetExceeded):
        vc_dimension(SetSystem(4000, [1]), 4)


def brute_vc_dimension(system, d_max):
    best = 0
    for d in range(1, d_max + 1):
        hit = False
        for s in combinations(range(system.ground_size), d):
            if is_shattered(system, s):
                hit = True
                break
        if not hit:
            break
        best = d
    return best


def test_vc_dimension_matches_brute_force_random_systems():
    rng = random.Random(77)
    for _ in range(30):
        ground = rng.randint(1, 9)
        fam = [rng.randrange(1 << ground) for _ in range(rng.randint(0, 12))]
        system = SetSystem(ground, fam)
        expect = brute_vc_dimension(system, 4)
        got = vc_dimension(system, 4)
        assert got.dimension == expect
        assert got.saturated == (expect == 4)


@pytest.mark.parametrize("q,p,n", [(3, 3, 1), (5, 5, 1)])
def test_plane_system_vc_at_most_three(q, p, n):
    fs = make_field(p, n)
    planes = all_planes_through_one(fs)
    rng = random.Random(q)
    pts = rng.sample(all_points3(q), min(q**3, 30))
    for side in ("by_point", "by_plane"):
        system = neighborhood_system(fs, pts, planes[: min(len(planes), 30)], side)
        assert vc_dimension(system, 4).dimension <= 3


def test_shatter_function_values():
    assert shatter_function(powerset_system(3), 0) == (1, True)
    assert shatter_function(powerset_system(3), 2) == (4, True)
    fs = make_field(3, 1)
    system = neighborhood_system(
        fs, all_points3(3), all_planes_through_one(fs), "by_point"
    )
    val = shatter_function(system, 4, "exact")
    assert val.exact
    assert val.value <= sauer_shelah(4, 3) == 15


def test_shatter_function_sampled_is_lower_bound():
    system = powerset_system(4)
    sampled = shatter_function(system, 3, "sampled", trials=5, seed=1)
    exact = shatter_function(system, 3, "exact")
    assert not sampled.exact
    assert sampled.value <= exact.value


def test_shatter_function_budget():
    with pytest.raises(BudgetExceeded):
        shatter_function(SetSystem(200, [1]), 10, "exact")


def test_sauer_shelah_values():
    assert sauer_shelah(4, 3) == 15  # 1 + 4 + 6 + 4
    assert sauer_shelah(7, 0) == 1
    assert sauer_shelah(3, 3) == 8
    assert sauer_shelah(3, 9) == 8  # d past z adds nothing


def test_sauer_shelah_bounds_every_exact_shatter_value():
    rng = random.Random(5)
    for _ in range(20):
        ground = rng.randint(1, 8)
        fam = [rng.randrange(1 << ground) for _ in range(rng.randint(1, 10))]
        system = SetSystem(ground, fam)
        d = vc_dimension(system, min(4, ground)).dimension
        for z in range(0, min(ground, 5) + 1):
            val = shatter_function(system, z, "exact").value
            assert val <= sauer_shelah(z, d) or d == min(4, ground)


def test_separation_identical_sets_fail():
    s = SetSystem.from_sets(4, [[0, 1], [0, 1]])
    rep = separation_check(s, 2, 1)
    assert rep.separated is False
    assert rep.witness == (0, 1)


def test_separation_disjoint_sets_pass():
    s = SetSystem.from_sets(6, [[0, 1, 2], [3, 4, 5]])
    rep = separation_check(s, 2, 6)
    assert rep.separated is True
    assert rep.witness is None


def test_separation_pairwise_plane_bound():
    # members of size >= 2q in a plane system are pairwise (2, size - q) separated
    fs = make_field(3, 1)
    pts = all_points3(3)
    planes = all_planes_through_one(fs)
    system = neighborhood_system(fs, pts[1:], planes, "by_point").dedup()
    sizes = [system.member_size(i) for i in range(len(system.family))]
    assert all(s == 9 for s in sizes)
    rep = separation_check(system, 2, 9 - 3)
    assert rep.separated is True


def test_separation_budget_and_sampling():
    fam = [[i] for i in range(100)]
    s = SetSystem.from_sets(100, fam)
    with pytest.raises(BudgetExceeded):
        separation_check(s, 5, 1)
    rep = separation_check(s, 5, 2, sample_trials=50, seed=3)
    assert rep.exhaustive is False
    assert rep.separated is True  # five distinct singletons: union minus inter = 5


def test_rich_elements():
    s = SetSystem.from_sets(6, [[0], [0, 1, 2], [], [3, 4, 5, 0]])
    assert rich_elements(s, 0) == [0, 1, 2, 3]
    assert rich_elements(s, 7) == []
    assert rich_elements(s, 3) == [1, 3]


def test_rich_elements_monotone():
    rng = random.Random(8)
    fam = [rng.randrange(1 << 10) for _ in range(20)]
    s = SetSystem(10, fam)
    for t1, t2 in [(0, 3), (2, 5), (1, 9)]:
        assert set(rich_elements(s, t2)) <= set(rich_elements(s, t1))


def test_rich_elements_full_plane_system_gf3():
    fs = make_field(3, 1)
    system = neighborhood_system(
        fs, all_points3(3), all_planes_through_one(fs), "by_point"
    )
    rich = rich_elements(system, 9)
    assert len(rich) == 26  # every nonzero point lies on exactly q^2 planes
    assert all(system.labels[i] != (0, 0, 0) for i in rich)


def test_packing_bound_check():
    s = SetSystem.from_sets(10, [[0, 1]])
    rep = packing_bound_check(s, 2, 5, c_prime=1.0, d=3)
    assert rep.holds and rep.ratio == 1 / 8
    # delta = ground and pairwise-complementary sets: ratio = |family|
    comp = SetSystem(4, [0b0011, 0b1100, 0b0101, 0b1010])
    rep = packing_bound_check(comp, 2, 4, c_prime=3.0, d=3)
    assert rep.ratio == 4.0
    assert rep.holds is False
