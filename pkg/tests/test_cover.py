import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from approxnash.cover import (
    BinomialForm,
    Cover,
    SparseForm,
    binomial_count_bound,
    binomial_form_ok,
    build_cover,
    cover_check,
    element_from_json,
    enumerate_binomial_forms,
    enumerate_sparse_profiles,
    sparse_count_bound,
    sparse_profile_key,
)
from approxnash.errors import BudgetExceeded
from approxnash.indicators import pbd_pmf
from oracles import binomial_forms_by_scan, grid_profile_groups


def test_binomial_form_examples():
    assert enumerate_binomial_forms(4, 2) == [BinomialForm(4, 7, 8, 0)]
    assert enumerate_binomial_forms(1, 2) == []
    assert binomial_form_ok(4, Fraction(7, 8), 2)
    assert not binomial_form_ok(4, Fraction(6, 8), 2)
    with pytest.raises(ValueError):
        enumerate_binomial_forms(0, 2)


@pytest.mark.parametrize("n,k", [(1, 2), (4, 2), (6, 2), (9, 2), (12, 3), (20, 3)])
def test_binomial_forms_match_scan(n, k):
    got = [(f.ell, f.q, f.ones) for f in enumerate_binomial_forms(n, k)]
    assert got == binomial_forms_by_scan(n, k)
    assert len(got) <= binomial_count_bound(n, k)


def test_cover_sizes():
    assert len(build_cover(2, 2, 1).elements) == 14
    assert len(build_cover(2, 2, 2).elements) == 15
    cover = build_cover(4, 2, 2)
    assert len(cover.elements) == 71 and cover.binomial_count == 1


def test_cover_check_examples():
    cover = build_cover(2, 2, 2)
    elem, tv = cover_check(cover, [0.5, 0.5])
    assert elem == SparseForm(4, (2, 2), 0) and tv == 0.0
    elem, tv = cover_check(cover, [0.3, 0.3])
    assert elem == SparseForm(4, (1, 1), 0)
    assert tv == pytest.approx(0.0725, abs=1e-12)
    with pytest.raises(ValueError):
        cover_check(cover, [0.5])
    with pytest.raises(ValueError):
        cover_check(Cover(2, 2, 1, [], {}), [0.5, 0.5])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("d", [1, 2])
def test_sparse_forms_are_one_per_grid_profile(n, d):
    K = 4
    groups = grid_profile_groups(n, K, d)
    cover = build_cover(n, 2, d)
    assert cover.sparse_count == len(groups)
    keys = [sparse_profile_key(e.values, K, d, e.ones) for e in cover.elements if isinstance(e, SparseForm)]
    assert len(set(keys)) == len(keys)
    for (low, high, ones), members in groups.items():
        key = (
            tuple(int(s * K**t) for t, s in enumerate(low, start=1)),
            tuple(int(s * K**t) for t, s in enumerate(high, start=1)),
            ones,
        )
        elem = cover.elements[cover.profile_index[key]]
        # the representative itself lies in the group
        padded = tuple(sorted(elem.values + (K,) * elem.ones + (0,) * (n - len(elem.values) - elem.ones)))
        assert padded in members


def test_every_grid_collection_is_matched_exactly():
    cover = build_cover(3, 2, 3)
    rng = np.random.default_rng(0)
    for _ in range(50):
        probs = rng.integers(0, 5, size=3) / 4
        _, tv = cover_check(cover, probs)
        assert tv <= 1e-12


def test_counts_within_bounds():
    for n, d in [(2, 1), (3, 2), (4, 2)]:
        cover = build_cover(n, 2, d)
        assert cover.sparse_count <= sparse_count_bound(n, 2, d)
        assert cover.binomial_count <= binomial_count_bound(n, 2)
    assert sparse_count_bound(1, 2, 1) == 81 * 2 * 33**2


def test_build_is_deterministic():
    a = build_cover(3, 2, 2)
    b = build_cover(3, 2, 2)
    assert a.elements == b.elements and a.profile_index == b.profile_index


def test_json_round_trip():
    cover = build_cover(4, 2, 2)
    back = Cover.from_json(json.loads(json.dumps(cover.to_json())))
    assert back.elements == cover.elements
    assert back.profile_index == cover.profile_index
    np.testing.assert_array_equal(back.pmf_matrix(), cover.pmf_matrix())
    with pytest.raises(ValueError):
        element_from_json({"form": "other"})
    with pytest.raises(ValueError):
        element_from_json({"form": "sparse", "ones": 0,
                           "values": [{"num": 1, "den": 4}, {"num": 1, "den": 9}]})


def test_form_probs():
    np.testing.assert_array_equal(SparseForm(4, (1, 3), 1).probs(4), [0.25, 0.75, 1.0, 0.0])
    np.testing.assert_array_equal(BinomialForm(2, 7, 8, 1).probs(3), [0.875, 0.875, 1.0])
    with pytest.raises(ValueError):
        SparseForm(4, (1, 3), 1).probs(2)


def test_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_sparse_profiles(4, 2, 2, max_candidates=10))


@settings(max_examples=40)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=3), st.integers(1, 2))
def test_profile_key_matches_exact_fractions(nums, d):
    K = 4
    low = [Fraction(v, K) for v in nums if 0 < 2 * v <= K]
    high = [Fraction(v, K) for v in nums if K < 2 * v < 2 * K]
    low_key, high_key, ones = sparse_profile_key(nums, K, d)
    assert ones == nums.count(K)
    for t in range(1, d + 1):
        assert Fraction(low_key[t - 1], K**t) == sum(v**t for v in low)
        assert Fraction(high_key[t - 1], K**t) == sum(v**t for v in high)


def test_equal_profiles_give_equal_count_distributions():
    groups = grid_profile_groups(3, 4, 3)
    for members in groups.values():
        ref = pbd_pmf([v / 4 for v in members[0]])
        for m in members[1:]:
            np.testing.assert_allclose(pbd_pmf([v / 4 for v in m]), ref, atol=1e-12)
