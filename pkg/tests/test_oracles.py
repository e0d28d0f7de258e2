import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from src.core.errors import InfeasibleParametersError
from src.core.model import GraphInstance
from src.core.oracles import (
    check_counting_conditions,
    find_flower,
    find_sunflower,
    is_flower,
    is_sunflower,
    max_packing_size,
    min_eds_size,
    min_hitting_set_size,
    restriction,
)
from tests.reference import brute_min_hitting_set, families, graphs, has_packing


STAR = [(1, 2), (1, 3), (1, 4)]


@pytest.mark.parametrize(
    "family, core, expected",
    [
        ([(1, 2), (1, 3), (2, 3)], (1,), [(2,), (3,)]),
        ([(1, 2)], (), [(1, 2)]),
        ([(1,)], (1,), [()]),
    ],
)
def test_restriction(family, core, expected):
    assert restriction(family, core) == expected


# --- Exact solvers ---


def test_min_hitting_set_examples():
    assert min_hitting_set_size(STAR, cap=2) == 1
    assert min_hitting_set_size([], cap=0) == 0
    assert min_hitting_set_size([(1,), (2,), (3,), (4,)], cap=3) == 4


def test_min_hitting_set_with_empty_set_is_unhittable():
    assert min_hitting_set_size([(1,), ()], cap=5) == 6


@given(families(max_n=7, max_m=8), st.integers(0, 4))
def test_min_hitting_set_matches_brute_force(drawn, cap):
    n, _, family = drawn
    assert min_hitting_set_size(family, cap) == min(brute_min_hitting_set(n, family), cap + 1)


def test_max_packing_examples():
    assert max_packing_size([(1, 2), (3, 4), (1, 3)], cap=2) == 2
    assert max_packing_size([], cap=5) == 0
    assert max_packing_size([(1, 2), (1, 3)], cap=2) == 1


def test_max_packing_ignores_duplicate_sets():
    assert max_packing_size([(1, 2), (1, 2), (1, 2)], cap=3) == 1


@given(families(max_n=8, max_m=8), st.integers(0, 4))
def test_max_packing_matches_brute_force(drawn, cap):
    _, _, family = drawn
    truncated = max_packing_size(family, cap)
    assert has_packing(family, truncated)
    if truncated < cap:
        assert not has_packing(family, truncated + 1)


def test_min_eds_examples(triangle, path4):
    assert min_eds_size(triangle, cap=1) == 1
    assert min_eds_size(GraphInstance(n=3, k=0, edges=[]), cap=0) == 0
    assert min_eds_size(path4, cap=1) == 1


def test_min_eds_of_disjoint_edges():
    g = GraphInstance(n=6, k=1, edges=[(1, 2), (3, 4), (5, 6)])
    assert min_eds_size(g, cap=1) == 2
    assert min_eds_size(g, cap=5) == 3


@given(graphs(max_n=6))
def test_min_eds_is_at_most_a_maximal_matching(g):
    matching, used = [], set()
    for u, v in g.edges:
        if u not in used and v not in used:
            matching.append((u, v))
            used |= {u, v}
    assert min_eds_size(g, cap=len(matching)) <= len(matching)


# --- Flowers ---


def test_is_flower_examples():
    assert is_flower(STAR, (1,), 3)
    assert not is_flower(STAR, (1,), 4)
    assert is_flower([(1, 2), (3, 4)], (), 2)


def test_core_that_is_a_member_is_no_flower():
    assert not is_flower([(1,), (1, 2)], (1,), 1)


def test_counting_conditions_examples():
    assert check_counting_conditions(STAR, (1,), 3, 2)
    assert not check_counting_conditions([(1, 2), (1, 2)], (1,), 2, 2)
    assert not check_counting_conditions([], (), 1, 2)


@given(families(max_n=7, max_d=3, max_m=10), st.integers(2, 3), st.data())
def test_counting_conditions_imply_flower(drawn, l, data):
    n, d, family = drawn
    core = tuple(sorted(data.draw(st.sets(st.integers(1, n), max_size=d - 1))))
    # A core that is itself a member can never be a flower
    if core not in family and check_counting_conditions(family, core, l, d):
        assert is_flower(family, core, l)


def test_find_flower_descends_into_heavy_element():
    witness = find_flower([(1, 2), (1, 3), (1, 4), (2, 3)], l=2, d=2)
    assert witness.core == (1,)
    assert witness.member_indices == (0, 1, 2)
    assert witness.blocking_number == 3


def test_find_flower_with_empty_core():
    witness = find_flower([(1,), (2,)], l=2, d=1)
    assert witness.core == ()
    assert witness.member_indices == (0, 1)


def test_find_flower_mixed_family():
    family = [(1, 2), (3, 4), (5, 6), (7, 8), (1, 3)]
    witness = find_flower(family, l=2, d=2)
    assert is_flower(family, witness.core, 2)


def test_find_flower_rejects_small_family():
    with pytest.raises(InfeasibleParametersError, match="family too small"):
        find_flower([(1, 2), (1, 2)], l=2, d=2)


@given(families(max_n=8, max_d=3, max_m=14, uniform=True), st.integers(2, 3))
def test_find_flower_succeeds_above_bound(drawn, l):
    _, d, family = drawn
    assume(len(set(family)) > (l - 1) ** d)
    witness = find_flower(family, l, d)
    assert is_flower(family, witness.core, l)
    assert witness.blocking_number >= l


# --- Sunflowers ---


def test_find_sunflower_disjoint_family():
    family = [(1, 2), (3, 4), (5, 6)]
    assert find_sunflower(family, l=3, d=2) == ((), (0, 1, 2))


def test_find_sunflower_star():
    family = [(1, 2), (1, 3), (1, 4), (1, 5), (1, 6)]
    core, members = find_sunflower(family, l=3, d=2)
    assert core == (1,)
    assert len(members) == 3
    assert is_sunflower(family, core, members)


def test_find_sunflower_rejects_single_set():
    with pytest.raises(InfeasibleParametersError, match="family too small"):
        find_sunflower([(1,)], l=2, d=1)


def test_find_sunflower_rejects_mixed_sizes():
    with pytest.raises(InfeasibleParametersError, match="d-uniform"):
        find_sunflower([(1,), (2, 3)], l=2, d=2)


@given(families(max_n=9, max_d=2, max_m=14, uniform=True), st.integers(2, 3))
def test_find_sunflower_succeeds_above_bound(drawn, l):
    _, d, family = drawn
    bound = (1 if d == 1 else 2) * (l - 1) ** d
    assume(len(set(family)) > bound)
    core, members = find_sunflower(family, l, d)
    assert len(members) == l
    assert is_sunflower(family, core, members)
    # Every l-petal sunflower is an l-flower
    assert is_flower([family[i] for i in members], core, l)
