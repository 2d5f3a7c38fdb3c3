import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hlvkernels.macdonald import b_lambda
from hlvkernels.partitions import (
    arm_leg,
    aut_count,
    cells,
    conjugate,
    double_types,
    flatten,
    flatten1,
    flatten2,
    make_type,
    num_types,
    partitions_of_size,
    partitions_up_to,
    stat_n,
    stat_n_conj,
    type_degree,
    type_from_json,
    type_to_json,
    types_of_degree,
    z,
)

all_small = [lam for lam in partitions_up_to(8)]


def test_arm_leg_examples():
    assert arm_leg((1,), (0, 0)) == (0, 0)
    assert arm_leg((2, 1), (0, 0)) == (1, 1)
    assert arm_leg((3, 2), (0, 0)) == (2, 1)


def test_arm_leg_outside():
    with pytest.raises(ValueError):
        arm_leg((2, 1), (1, 1))


def test_n_statistics():
    assert stat_n(()) == 0
    assert stat_n((1, 1)) == 1
    assert stat_n((2, 2)) == 2 and stat_n_conj((2, 2)) == 2
    assert stat_n_conj((3,)) == 3


def test_aut_counts():
    assert aut_count((2, 1, 1)) == 2
    assert aut_count(()) == 1
    assert aut_count(make_type([(1, (1,)), (1, (1,))])) == 2


def test_z():
    assert z((2, 1, 1)) == 4
    assert z((3,)) == 3


def test_flatten_examples():
    assert flatten(make_type([(2, (2, 1))])) == (4, 2)
    assert flatten(make_type([(1, (1,)), (3, (1,))])) == (3, 1)
    assert flatten(make_type([(2, (1, 1)), (1, (2,))])) == (2, 2, 2)
    tau = make_type([(2, (1,), (2,)), (1, (), (1,))])
    assert flatten1(tau) == (2,) and flatten2(tau) == (4, 1)


def test_partition_counts():
    assert len(partitions_of_size(4)) == 5
    assert partitions_of_size(0) == ((),)
    assert [len(partitions_of_size(n)) for n in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]
    assert len(set(partitions_of_size(7))) == 15


def test_types_of_degree_one():
    assert types_of_degree(1) == (((1, (1,)),),)


@pytest.mark.parametrize("n", range(7))
def test_type_count_matches_product_formula(n):
    types = types_of_degree(n)
    assert len(types) == len(set(types)) == num_types(n)
    for tau in types:
        assert type_degree(tau) == n
        assert sum(flatten(tau)) == n
        assert list(tau) == sorted(tau, key=lambda p: (p[0], sum(p[1]), p[1]))


def _brute_types(n):
    """Types of degree n from a generating set, deduplicated as multisets."""
    gens = [(k, lam) for k in range(1, n + 1) for d in range(1, n // k + 1) for lam in partitions_of_size(d)]
    found = set()

    def rec(rem, acc):
        if rem == 0:
            found.add(tuple(sorted(acc)))
            return
        for g in gens:
            d = g[0] * sum(g[1])
            if d <= rem:
                rec(rem - d, acc + [g])

    rec(n, [])
    return found


@pytest.mark.parametrize("n", range(6))
def test_type_count_brute_force(n):
    assert len(_brute_types(n)) == len(types_of_degree(n))


def test_double_types():
    assert all(flatten1(t) is not None for t in double_types(2))
    assert len(double_types(1)) == 2
    assert ((1, (), ()),) not in double_types(0)


@pytest.mark.parametrize("lam", all_small)
def test_conjugate_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert sum(conjugate(lam)) == sum(lam)


@pytest.mark.parametrize("lam", [lam for lam in partitions_up_to(6)])
def test_cells_and_b_lambda(lam):
    assert len(list(cells(lam))) == sum(lam)
    assert b_lambda(lam).evaluate({"q": 1, "t": 1}) == sum(lam)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 6), max_size=6))
def test_arm_leg_sum(parts):
    lam = tuple(sorted(parts, reverse=True))
    # sum of arms is n(lam'), sum of legs is n(lam)
    arms = sum(arm_leg(lam, s)[0] for s in cells(lam))
    legs = sum(arm_leg(lam, s)[1] for s in cells(lam))
    assert arms == stat_n_conj(lam)
    assert legs == stat_n(lam)


def test_type_json_round_trip():
    tau = make_type([(2, (2, 1)), (1, (1,))])
    assert type_from_json(type_to_json(tau)) == tau
    assert type_to_json(tau) == [[1, [1]], [2, [2, 1]]]
