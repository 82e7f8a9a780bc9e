"""
Tests for the transversal solvers
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from models.errors import ContractError, UsageError
from models.matroid import FieldSpec, LinearMatroid
from models.mls import MLS, cyclic_latin_square, embed_latin, from_latin_square, theorem2, validate
from models.transversal import Transversal
from services.generator_service import build_corpus, random_invertible_basis, random_latin_square
from services.transversal_service import (
    augment_step, exact_max, full_transversals, greedy_extend, greedy_maximal, half_target, is_maximal,
    is_valid_transversal, maximality_floor_check, naive_max, solve, theorem2_certificate,
    two_thirds_floor, two_thirds_solve, two_thirds_target,
)


def _e(*coords):
    return list(coords)


@pytest.fixture
def stalled():
    """
    Degree 4 over GF(5) where row-major greedy stops at 2 < ceil(8/3)

    Greedy takes e1 at (0,0) and e2 at (1,1); every free cell in rows 2-3 and
    columns 2-3 lies in span{e1, e2}.
    """
    rows = [
        [_e(1, 0, 0, 0), _e(0, 1, 1, 0), _e(0, 0, 1, 0), _e(0, 0, 0, 1)],
        [_e(1, 0, 0, 1), _e(0, 1, 0, 0), _e(0, 0, 0, 1), _e(0, 0, 1, 1)],
        [_e(0, 0, 1, 0), _e(0, 0, 0, 1), _e(1, 1, 0, 0), _e(1, 4, 0, 0)],
        [_e(0, 1, 1, 1), _e(1, 0, 1, 0), _e(1, 2, 0, 0), _e(1, 3, 0, 0)],
    ]
    vectors = [v for row in rows for v in row]
    grid = tuple(tuple(4 * i + j for j in range(4)) for i in range(4))
    return MLS(4, LinearMatroid(FieldSpec(5), 4, vectors), grid)


def _embedded(n, seed, p=5):
    rng = np.random.default_rng(seed)
    return embed_latin(random_latin_square(n, seed), p, random_invertible_basis(n, p, rng))


# =============================================================================
# TARGETS AND CHECKS
# =============================================================================

@pytest.mark.parametrize("n, two_thirds, half", [(1, 1, 1), (3, 2, 2), (4, 3, 2), (6, 4, 3), (7, 5, 4)])
def test_targets(n, two_thirds, half):
    assert two_thirds_target(n) == two_thirds
    assert half_target(n) == half


def test_degree_two_floor_is_one():
    assert two_thirds_target(2) == 2
    assert two_thirds_floor(2) == 1
    assert exact_max(from_latin_square([[1, 2], [2, 1]])).size == 1


def test_is_valid_transversal():
    mls = theorem2(3, 5)
    assert is_valid_transversal(mls, [(0, 0), (1, 2)])
    assert not is_valid_transversal(mls, [(0, 0), (1, 2), (2, 1)])
    assert not is_valid_transversal(mls, [(0, 0), (0, 1)])
    assert not is_valid_transversal(mls, [(0, 0), (1, 1)])      # both reference v1


def test_fixture_is_a_valid_mls(stalled):
    assert validate(stalled) == []


# =============================================================================
# GREEDY
# =============================================================================

def test_greedy_on_theorem2():
    mls = theorem2(3, 5)
    T = greedy_maximal(mls)
    assert T.cells == ((0, 0), (1, 2))
    assert is_maximal(mls, T)


def test_greedy_on_cyclic_square():
    assert greedy_maximal(from_latin_square(cyclic_latin_square(3))).size == 3


def test_greedy_stalls_on_fixture(stalled):
    T = greedy_maximal(stalled)
    assert T.cells == ((0, 0), (1, 1))
    assert is_maximal(stalled, T)
    assert maximality_floor_check(stalled, T)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 6), seed=st.integers(0, 10_000), order_seed=st.integers(0, 50))
def test_greedy_is_maximal_and_at_least_half(n, seed, order_seed):
    mls = _embedded(n, seed)
    T = greedy_maximal(mls, order_seed)
    assert is_valid_transversal(mls, T.cells)
    assert is_maximal(mls, T)
    assert T.size >= half_target(n)


def test_greedy_seed_is_deterministic():
    mls = _embedded(6, 11)
    assert greedy_maximal(mls, 5) == greedy_maximal(mls, 5)


def test_floor_check_requires_maximal(stalled):
    with pytest.raises(ContractError):
        maximality_floor_check(stalled, Transversal.of(stalled, [(0, 0)]))


# =============================================================================
# AUGMENTATION
# =============================================================================

def test_augment_step_exchanges_diagonal_element(stalled):
    T = greedy_maximal(stalled)
    larger = augment_step(stalled, T)
    assert larger.cells == ((1, 1), (2, 2), (3, 0))
    assert is_valid_transversal(stalled, larger.cells)


def test_augment_step_extends_non_maximal_directly(stalled):
    larger = augment_step(stalled, Transversal.empty())
    assert larger.cells == ((0, 0),)


def test_augment_step_without_configuration():
    mls = theorem2(3, 5)
    assert augment_step(mls, greedy_maximal(mls)) is None


def test_augment_step_rejects_full_or_dependent():
    mls = from_latin_square(cyclic_latin_square(3))
    with pytest.raises(ContractError):
        augment_step(mls, greedy_maximal(mls))
    t2 = theorem2(3, 5)
    with pytest.raises(ContractError):
        augment_step(t2, Transversal.of(t2, [(0, 0), (1, 1)]))


def test_two_thirds_solve_recovers_from_stall(stalled):
    report = two_thirds_solve(stalled)
    assert report.size == 4
    assert report.notes["exchanges"] == 1
    assert report.notes["relaxed_exchanges"] == 0
    assert not report.anomaly
    assert is_valid_transversal(stalled, report.transversal.cells)


def test_single_element_exchange_is_needed_at_degree_five():
    corpus = build_corpus(seed=0, embedded_count=13, latin_orders=(), theorem2_max=0)
    mls = next(e.mls for e in corpus if e.label == "embed-5-12")

    T = greedy_maximal(mls)
    while True:
        larger = augment_step(mls, T, relaxed=False)
        if larger is None:
            break
        T = greedy_extend(mls, larger)
    assert T.size == 3 < two_thirds_floor(5)

    larger = augment_step(mls, T)
    assert larger.size == 4
    assert is_valid_transversal(mls, larger.cells)

    report = two_thirds_solve(mls)
    assert report.size >= 4
    assert report.notes["relaxed_exchanges"] >= 1
    assert not report.anomaly


def test_two_thirds_solve_degree_two_uses_exception():
    report = two_thirds_solve(from_latin_square([[1, 2], [2, 1]]))
    assert report.size == 1
    assert report.target == 1
    assert report.notes["bound_exception"] == 2


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 7), seed=st.integers(0, 10_000))
def test_two_thirds_solve_meets_floor(n, seed):
    mls = _embedded(n, seed, p=3)
    report = two_thirds_solve(mls)
    assert report.size >= two_thirds_floor(n)
    assert is_valid_transversal(mls, report.transversal.cells)


# =============================================================================
# EXACT SEARCH
# =============================================================================

def test_exact_on_theorem2_is_lexicographically_least():
    report = exact_max(theorem2(3, 5), node_budget=0)
    assert report.transversal.cells == ((0, 0), (1, 2))
    assert report.optimal


@pytest.mark.parametrize("n", range(1, 6))
def test_exact_on_theorem2_is_n_minus_one(n):
    report = exact_max(theorem2(n, 5), node_budget=0)
    assert report.size == max(n - 1, 1)
    assert report.optimal


def test_exact_on_fixture(stalled):
    report = exact_max(stalled, node_budget=0)
    assert report.size == 4
    assert report.optimal


def test_exact_budget_exhaustion_is_reported():
    report = exact_max(theorem2(5, 5), node_budget=1, workers=1)
    assert not report.optimal
    assert report.size == 0


def test_exact_rejects_negative_budget():
    with pytest.raises(UsageError):
        exact_max(theorem2(2, 5), node_budget=-1)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 4), seed=st.integers(0, 10_000), p=st.sampled_from([2, 3, 5]))
def test_exact_matches_naive_enumeration(n, seed, p):
    mls = _embedded(n, seed, p)
    exact = exact_max(mls, node_budget=0, workers=1)
    assert exact.optimal
    assert exact.transversal == naive_max(mls)


@pytest.mark.slow
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_parallel_search_matches_sequential(seed):
    mls = _embedded(5, seed)
    sequential = exact_max(mls, node_budget=0, workers=1)
    parallel = exact_max(mls, node_budget=0, workers=2)
    assert parallel.transversal == sequential.transversal
    assert parallel.optimal


def test_exact_target_stops_early(stalled):
    report = exact_max(stalled, node_budget=0, target=3)
    assert report.size >= 3


# =============================================================================
# CERTIFICATES
# =============================================================================

@pytest.mark.parametrize("cells, reason", [
    (((0, 1), (1, 2), (2, 0)), "off-diagonal-sum-zero"),
    (((0, 0), (1, 2), (2, 1)), "sum-zero-without-a11"),
    (((0, 2), (1, 1), (2, 0)), "v_i-unspanned"),
    (((0, 0), (1, 1), (2, 2)), "repeated-v1"),
])
def test_theorem2_certificates(cells, reason):
    assert theorem2_certificate(theorem2(3, 5), cells) == reason


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_every_full_transversal_has_a_certificate(n):
    mls = theorem2(n, 7)
    for cells in full_transversals(mls):
        assert not is_valid_transversal(mls, cells)
        theorem2_certificate(mls, cells)


def test_certificate_requires_construction():
    with pytest.raises(ContractError):
        theorem2_certificate(from_latin_square(cyclic_latin_square(3)), [(0, 0), (1, 1), (2, 2)])
    with pytest.raises(ContractError):
        theorem2_certificate(theorem2(3, 5), [(0, 0), (1, 2)])


# =============================================================================
# DISPATCH
# =============================================================================

def test_solve_dispatch(stalled):
    assert solve(stalled, "greedy").size == 2
    assert solve(stalled, "augment").size == 4
    assert solve(stalled, "exact", node_budget=0).size == 4
    with pytest.raises(UsageError):
        solve(stalled, "random")


def test_report_field_order_is_stable(stalled):
    keys = list(solve(stalled, "greedy").to_dict())
    assert keys == ["method", "n", "size", "cells", "ids", "optimal", "nodes", "anomaly",
                    "target", "notes"]
