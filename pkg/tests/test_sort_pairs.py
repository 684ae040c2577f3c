import random

import pytest

from conftest import perfect_matchings, random_matching
from dqcompiler.strategies import DUMMY, MalformedLayerError, sort_pairs


def check_plan(labels):
    plan = sort_pairs(labels)
    v = list(labels) + ([DUMMY, DUMMY] if plan.padded else [])
    for step in plan.steps:
        assert len(step) <= 2
        touched = [p for s in step for p in s]
        assert len(touched) == len(set(touched))
        for a, b in step:
            assert DUMMY not in (v[a], v[b])
            v[a], v[b] = v[b], v[a]
    assert all(v[2 * k] == v[2 * k + 1] for k in range(len(v) // 2))
    assert plan.cycles == len(v) // 4
    assert plan.apply(labels) == v
    return plan


def test_worked_example():
    plan = check_plan([1, 1, 2, 3, 2, 3])
    assert plan.padded and plan.length == 8
    assert plan.swaps == [(3, 4)]


def test_sorted_input_needs_no_swaps():
    assert sort_pairs([1, 1, 2, 2]).swaps == []


def test_all_pairs_straddling_the_halves():
    plan = check_plan([1, 2, 3, 4, 1, 2, 3, 4])
    assert plan.step_count <= 2


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_exhaustive_small(n):
    for labels in perfect_matchings(n):
        check_plan(labels)


@pytest.mark.parametrize("n", [10, 14, 18, 24])
def test_random_padded_and_large(n):
    rng = random.Random(n)
    for _ in range(300):
        check_plan(random_matching(n, rng))


def test_arbitrary_hashable_labels():
    check_plan(["b", "a", "c", "a", "c", "b"])


@pytest.mark.parametrize("labels", [[1, 1, 1, 2], [1, 2], [DUMMY, DUMMY], [1, 1, 2]])
def test_malformed_layers(labels):
    with pytest.raises(MalformedLayerError):
        sort_pairs(labels)
