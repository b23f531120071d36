import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coherent_access.counting import (
    MAX_ENUMERATION,
    LevelSpec,
    MacrostateSpec,
    binomial,
    coherent_degeneracy,
    coherent_excess,
    coherent_subsets,
    compositions,
    distinguishable_count,
    enumerate_coherent_sequences,
    format_sequence,
    macrostate_weight,
    microstate_count,
    total_omega,
)


def brute_subsets(g):
    """Nonempty subsets of 1..g via bitmasks."""
    return [
        tuple(i + 1 for i in range(g) if mask >> i & 1) for mask in range(1, 1 << g)
    ]


def brute_multisets(g, n):
    """Distinct unordered placements, found by deduplicating every ordered one."""
    subsets = brute_subsets(g)
    seen = set()
    for assignment in itertools.product(range(len(subsets)), repeat=n):
        seen.add(tuple(sorted(assignment)))
    return seen


def textbook_bose(g, n):
    return math.factorial(g + n - 1) // (math.factorial(g - 1) * math.factorial(n))


@pytest.mark.parametrize("n,k,expected", [(2, 1, 2), (2, 2, 1), (5, 2, 10), (3, 5, 0), (0, 0, 1)])
def test_binomial(n, k, expected):
    assert binomial(n, k) == expected


@pytest.mark.parametrize("g,expected", [(1, 1), (2, 3), (4, 15)])
def test_coherent_degeneracy_examples(g, expected):
    assert coherent_degeneracy(g) == expected


@pytest.mark.parametrize("g", range(1, 9))
def test_coherent_degeneracy_counts_nonempty_subsets(g):
    assert coherent_degeneracy(g) == len(brute_subsets(g))
    assert coherent_degeneracy(g) == sum(binomial(g, k) for k in range(1, g + 1))


def test_coherent_degeneracy_rejects_zero():
    with pytest.raises(ValueError):
        coherent_degeneracy(0)


def test_excess_zero_only_for_single_sublevel():
    assert coherent_excess(1) == 0
    assert all(coherent_excess(g) > 0 for g in range(2, 12))


@pytest.mark.parametrize("G,n,expected", [(3, 2, 6), (2, 2, 3), (1, 7, 1), (1, 0, 1)])
def test_microstate_count_examples(G, n, expected):
    assert microstate_count(G, n) == expected


def test_microstate_count_rejects_empty_level():
    with pytest.raises(ValueError):
        microstate_count(0, 3)


def test_microstate_count_is_exact_for_huge_arguments():
    w = microstate_count(2**40 - 1, 30)
    assert w == math.comb(2**40 - 1 + 29, 30)
    assert w > 2**1000


def test_enumeration_reproduces_six_bracket_sequences():
    seqs = {format_sequence(o, 2) for o in enumerate_coherent_sequences(2, 2)}
    assert seqs == {
        "(1)a(2)a(12)", "(1)a(2)(12)a", "(1)(2)a(12)a",
        "(1)aa(2)(12)", "(1)(2)aa(12)", "(1)(2)(12)aa",
    }


def test_enumeration_single_sublevel():
    assert enumerate_coherent_sequences(1, 3) == [{(1,): 3}]


def test_enumeration_g3_n2():
    maps = enumerate_coherent_sequences(3, 2)
    assert len(maps) == 28 == len(brute_multisets(3, 2))


def test_enumeration_empty_occupancy():
    assert enumerate_coherent_sequences(3, 0) == [{}]


def test_enumeration_is_canonical_and_distinct():
    maps = enumerate_coherent_sequences(3, 3)
    assert maps == enumerate_coherent_sequences(3, 3)
    keys = [tuple(sorted(m.items())) for m in maps]
    assert len(set(keys)) == len(keys)
    order = coherent_subsets(3)
    for m in maps:
        assert sum(m.values()) == 3
        assert list(m) == sorted(m, key=order.index)


def test_subset_order_size_then_lexicographic():
    assert coherent_subsets(3) == [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3)]


def test_enumeration_bound_enforced():
    with pytest.raises(ValueError):
        enumerate_coherent_sequences(10, 10)
    with pytest.raises(ValueError):
        enumerate_coherent_sequences(0, 1)
    assert microstate_count(coherent_degeneracy(4), 6) <= MAX_ENUMERATION


@pytest.mark.parametrize("g", range(1, 5))
@pytest.mark.parametrize("n", range(0, 5))
def test_enumeration_matches_brute_force(g, n):
    maps = enumerate_coherent_sequences(g, n)
    assert len(maps) == len(brute_multisets(g, n)) == microstate_count(coherent_degeneracy(g), n)


@pytest.mark.parametrize("g", range(1, 7))
@pytest.mark.parametrize("n", range(0, 7))
def test_standard_counting_reduction(g, n):
    assert microstate_count(g, n) == textbook_bose(g, n)


@given(st.integers(2, 12), st.integers(1, 30))
def test_coherent_access_enlarges_count(g, n):
    coherent = microstate_count(coherent_degeneracy(g), n)
    standard = microstate_count(g, n)
    assert coherent > standard
    assert math.log(coherent) > math.log(standard)


def test_macrostate_weight_examples():
    assert macrostate_weight(MacrostateSpec.from_pairs([(2, 2)])) == 6
    two = MacrostateSpec.from_pairs([(2, 2), (1, 5)])
    per_level = len(enumerate_coherent_sequences(2, 2)) * len(enumerate_coherent_sequences(1, 5))
    assert macrostate_weight(two) == per_level == 6
    assert macrostate_weight(MacrostateSpec.from_pairs([(3, 0), (1, 0), (5, 0)])) == 1


def test_macrostate_standard_weight():
    m = MacrostateSpec.from_pairs([(2, 2), (3, 1)])
    assert macrostate_weight(m, coherent=False) == textbook_bose(2, 2) * textbook_bose(3, 1)


@given(st.lists(st.tuples(st.integers(1, 5), st.integers(0, 5)), min_size=1, max_size=5),
       st.randoms(use_true_random=False))
def test_macrostate_weight_permutation_invariant(pairs, rnd):
    shuffled = pairs[:]
    rnd.shuffle(shuffled)
    assert macrostate_weight(MacrostateSpec.from_pairs(pairs)) == macrostate_weight(
        MacrostateSpec.from_pairs(shuffled)
    )


def test_level_and_macrostate_validation():
    with pytest.raises(ValueError):
        LevelSpec(0, 1)
    with pytest.raises(ValueError):
        LevelSpec(2, -1)
    with pytest.raises(ValueError):
        MacrostateSpec(())
    level = LevelSpec(3, 2)
    assert (level.G, level.L) == (7, 4)
    assert MacrostateSpec.from_pairs([(1, 2), (2, 3)]).total_particles == 5


def test_compositions_enumerates_stars_and_bars():
    comps = list(compositions(4, 3))
    assert len(comps) == len(set(comps)) == math.comb(4 + 2, 2)
    assert all(sum(c) == 4 and len(c) == 3 for c in comps)


@pytest.mark.parametrize(
    "levels,n,expected",
    [([2], 2, 6), ([1, 1], 1, 2), ([2, 2], 2, 6 + 9 + 6)],
)
def test_total_omega_examples(levels, n, expected):
    assert total_omega(levels, n) == expected


def test_total_omega_accepts_level_specs():
    assert total_omega([LevelSpec(2, 99), LevelSpec(2)], 2) == 21


def test_total_omega_rejects_empty():
    with pytest.raises(ValueError):
        total_omega([], 2)


@settings(max_examples=60)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=4), st.integers(0, 5))
def test_total_omega_matches_stars_and_bars(gs, n):
    G_total = sum(coherent_degeneracy(g) for g in gs)
    assert total_omega(gs, n) == microstate_count(G_total, n)
    assert total_omega(gs, n, coherent=False) == microstate_count(sum(gs), n)


@pytest.mark.parametrize("G,n,expected", [(2, 2, 4), (3, 2, 9), (5, 0, 1)])
def test_distinguishable_count(G, n, expected):
    assert distinguishable_count(G, n) == expected
    assert expected == len(list(itertools.product(range(G), repeat=n)))


def test_distinguishable_rejects_zero_states():
    with pytest.raises(ValueError):
        distinguishable_count(0, 1)
