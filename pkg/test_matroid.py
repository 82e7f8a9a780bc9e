"""
Tests for the matroid rank oracles
"""

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from models.errors import ContractError, DomainError, InputError
from models.matroid import (
    FieldSpec, LinearMatroid, PartitionMatroid,
    is_independent, min_spanning_subset, rank, rank_mod_p, row_reduce, spans, support,
)
from models.mls import from_latin_square, theorem2
from services.generator_service import random_latin_square

E1, E2, E3 = [1, 0, 0], [0, 1, 0], [0, 0, 1]


@pytest.fixture
def gf5():
    # ids: 0=e1, 1=e2, 2=e1+e2, 3=e3, 4=e1 again, 5=zero, 6=e1-e2
    return LinearMatroid(FieldSpec(5), 3, [E1, E2, [1, 1, 0], E3, E1, [0, 0, 0], [1, 4, 0]])


# =============================================================================
# FIELD AND ELIMINATION
# =============================================================================

@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_field_accepts_primes(p):
    assert FieldSpec(p).p == p


@pytest.mark.parametrize("p", [0, 1, 4, 6, 9, -3])
def test_field_rejects_non_primes(p):
    with pytest.raises(InputError):
        FieldSpec(p)


def test_largest_modulus_keeps_exact_rank():
    p = 2**31 - 1
    m = LinearMatroid(FieldSpec(p), 2, [[3, p - 1], [6, p - 2]])
    assert m.rank([0, 1]) == 1
    assert m.rank([0]) == 1


@pytest.mark.parametrize("p", [2**31 + 11, 4294967311, 10**18 + 9])
def test_field_rejects_moduli_that_overflow(p):
    with pytest.raises(InputError, match=r"below 2\*\*31"):
        FieldSpec(p)


def test_field_inverse():
    f = FieldSpec(7)
    assert all((a * f.inverse(a)) % 7 == 1 for a in range(1, 7))


def test_row_reduce_pivots_are_deterministic():
    reduced, pivots = row_reduce([[0, 2, 4], [3, 0, 1], [1, 1, 1]], 5)
    assert pivots == [0, 1, 2]
    assert np.array_equal(reduced, np.eye(3, dtype=np.int64))


def test_rank_mod_p_depends_on_characteristic():
    # [[1, 1], [1, -1]] has determinant -2
    assert rank_mod_p([[1, 1], [1, 1]], 2) == 1
    assert rank_mod_p([[1, 1], [1, 4]], 5) == 2
    assert rank_mod_p([[1, 1], [1, 1]], 5) == 1


# =============================================================================
# RANK / INDEPENDENCE / SPAN
# =============================================================================

def test_rank_examples(gf5):
    assert rank(gf5, {0, 1, 2}) == 2
    assert rank(gf5, set()) == 0
    assert rank(gf5, {5}) == 0


def test_rank_of_theorem2_row():
    mls = theorem2(3, 5)
    assert rank(mls.matroid, mls.row_ids(0)) == 3


def test_rank_unknown_id(gf5):
    with pytest.raises(InputError):
        rank(gf5, {0, 99})
    with pytest.raises(InputError):
        is_independent(gf5, [-1])


def test_is_independent_examples(gf5):
    assert is_independent(gf5, {0, 1})
    assert not is_independent(gf5, {0, 4})        # parallel elements
    assert not is_independent(gf5, [0, 0])        # same id twice
    assert is_independent(gf5, [])


def test_theorem2_opposite_differences_are_dependent():
    mls = theorem2(3, 5)
    v1, v2_minus_v3, v3_minus_v2 = mls.grid[0][0], mls.grid[1][2], mls.grid[2][1]
    assert not is_independent(mls.matroid, {v1, v2_minus_v3, v3_minus_v2})


def test_spans_examples(gf5):
    assert spans(gf5, {0, 1}, 2)
    assert spans(gf5, set(), 5)                   # zero vector is a loop
    assert not spans(gf5, {0, 1}, 3)


def test_v_i_not_spanned_when_row_and_column_i_are_avoided():
    # v1, v1 - v3, v3 - v1 and the standalone v2
    m = LinearMatroid(FieldSpec(5), 3, [E1, [1, 0, 4], [4, 0, 1], E2])
    assert not spans(m, {0, 1, 2}, 3)


# =============================================================================
# SUPPORT
# =============================================================================

def test_support_examples(gf5):
    assert support(gf5, {0, 1}, 2) == {0, 1}
    assert support(gf5, {0, 1}, 1) == {1}
    # e2 = e1 - (e1 - e2)
    assert support(gf5, {0, 6}, 1) == {0, 6}


def test_support_of_member_is_itself(gf5):
    assert support(gf5, {0, 1, 3}, 3) == {3}


def test_support_requires_independent_set(gf5):
    with pytest.raises(ContractError):
        support(gf5, {0, 1, 2}, 2)


def test_support_requires_spanned_element(gf5):
    with pytest.raises(DomainError) as exc:
        support(gf5, {0, 1}, 3)
    assert exc.value.element == 3


def test_min_spanning_subset_examples(gf5):
    assert min_spanning_subset(gf5, {0, 1, 3}, {2}) == {0, 1}
    assert min_spanning_subset(gf5, {0, 1, 3}, set()) == frozenset()


def test_min_spanning_subset_on_theorem2():
    mls = theorem2(3, 5)
    T = {mls.grid[0][0], mls.grid[1][2]}
    assert min_spanning_subset(mls.matroid, T, {mls.grid[2][2]}) == {mls.grid[0][0]}


def test_min_spanning_subset_names_unspanned_element(gf5):
    with pytest.raises(DomainError) as exc:
        min_spanning_subset(gf5, {0, 1}, {2, 3})
    assert exc.value.element == 3


def test_partition_support_is_same_class():
    m = PartitionMatroid([1, 2, 3, 1])
    assert support(m, {0, 1, 2}, 3) == {0}
    with pytest.raises(DomainError):
        support(m, {1, 2}, 3)


def test_invalid_linear_matroid_inputs():
    with pytest.raises(InputError):
        LinearMatroid(FieldSpec(5), 2, [[1, 0, 0]])
    with pytest.raises(InputError):
        LinearMatroid(FieldSpec(5), 2, [[5, 0]])
    with pytest.raises(InputError):
        LinearMatroid(FieldSpec(5), 0, [])
    with pytest.raises(InputError):
        PartitionMatroid([1, 0])


# =============================================================================
# PROPERTIES
# =============================================================================

@st.composite
def linear_matroids(draw):
    p = draw(st.sampled_from([2, 3, 5, 7]))
    dim = draw(st.integers(1, 4))
    size = draw(st.integers(1, 8))
    vectors = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=dim, max_size=dim),
                            min_size=size, max_size=size))
    return LinearMatroid(FieldSpec(p), dim, vectors)


@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_rank_is_monotone_submodular_and_bounded(data):
    m = data.draw(linear_matroids())
    ids = st.sets(st.integers(0, m.size - 1))
    A, B = data.draw(ids), data.draw(ids)
    assert rank(m, A & B) <= rank(m, A) <= rank(m, A | B)
    assert rank(m, A | B) + rank(m, A & B) <= rank(m, A) + rank(m, B)
    assert rank(m, A) <= min(len(A), m.dim)


@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_independence_matches_rank(data):
    m = data.draw(linear_matroids())
    S = data.draw(st.sets(st.integers(0, m.size - 1)))
    assert is_independent(m, S) == (rank(m, S) == len(S))


@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_span_state_agrees_with_rank(data):
    m = data.draw(linear_matroids())
    S = data.draw(st.sets(st.integers(0, m.size - 1)))
    x = data.draw(st.integers(0, m.size - 1))
    state = m.span_state(S)
    assert state.rank == rank(m, S)
    assert state.contains(x) == spans(m, S, x)


def _random_independent_pair(m, rng):
    k = int(rng.integers(1, m.full_rank + 1))
    T = []
    for x in (int(i) for i in rng.permutation(m.size)):
        if is_independent(m, T + [x]):
            T.append(x)
        if len(T) == k:
            break
    spanned = [x for x in range(m.size) if spans(m, T, x)]
    return T, spanned[int(rng.integers(len(spanned)))]


def test_support_minimality_on_random_pairs():
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 1000:
        dim = int(rng.integers(2, 6))
        vectors = rng.integers(0, 5, size=(int(rng.integers(dim, 3 * dim)), dim)).tolist()
        m = LinearMatroid(FieldSpec(5), dim, vectors)
        if m.full_rank == 0:
            continue
        T, x = _random_independent_pair(m, rng)
        S = support(m, T, x)
        assert spans(m, S, x)
        for y in S:
            assert not spans(m, set(T) - {y}, x)
        checked += 1


def _latin_ground_sets():
    for n in (2, 3):
        yield from_latin_square(random_latin_square(n, n))
    for n in (4, 5):
        yield from_latin_square(random_latin_square(n, 10 + n))


@pytest.mark.parametrize("mls", list(_latin_ground_sets()), ids=lambda m: f"n{m.n}")
def test_partition_agrees_with_linear_encoding(mls):
    partition = mls.matroid
    linear = partition.as_linear()
    if partition.size <= 9:
        subsets = [c for k in range(partition.size + 1) for c in combinations(range(partition.size), k)]
    else:
        rng = np.random.default_rng(mls.n)
        subsets = [rng.choice(partition.size, size=int(rng.integers(0, partition.size)), replace=False)
                   for _ in range(400)]
    for S in subsets:
        S = [int(x) for x in S]
        assert rank(partition, S) == rank(linear, S)
