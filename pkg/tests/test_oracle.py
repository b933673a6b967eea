from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rs_list_decoding.codes import RSCode, hamming_distance
from rs_list_decoding.errors import InvalidParameters, SearchSpaceTooLarge
from rs_list_decoding.finite_field import FieldSpec
from rs_list_decoding.harness.oracle import (
    bad_list_oracle,
    full_length_blowup_search,
    min_total_distance,
    plurality_word,
)

GF5 = FieldSpec.prime(5)
CODE = RSCode(GF5, (0, 1, 2, 3), 2)


def naive_bad_lists(code, L, threshold):
    W = code.codeword_matrix()
    found = []
    for subset in combinations(range(code.message_count), L + 1):
        _, total = min_total_distance(W[list(subset)].tolist())
        if total <= threshold:
            found.append(subset)
    return found


def test_plurality_word():
    y, total = plurality_word(np.array([[0, 1, 2], [0, 2, 2], [1, 1, 2]]))
    assert y == [0, 1, 2]
    assert total == 2
    # ties go to the smallest symbol
    assert plurality_word(np.array([[3, 1], [2, 4]])) == ([2, 1], 2)
    with pytest.raises(InvalidParameters):
        min_total_distance([(1, 2), (1, 2)])


@settings(max_examples=60)
@given(
    st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, 2), min_size=n, max_size=n), min_size=2, max_size=4)
    )
)
def test_plurality_word_minimizes_total_distance(rows):
    n = len(rows[0])
    y, total = plurality_word(np.array(rows))
    best = min(sum(hamming_distance(z, c) for c in rows) for z in product(range(3), repeat=n))
    assert total == best
    assert sum(hamming_distance(y, c) for c in rows) == total


@pytest.mark.parametrize("L, threshold", [(1, 3), (2, 4), (2, 5)])
def test_exhaustive_oracle_matches_naive_search(L, threshold):
    reduced = bad_list_oracle(CODE, L, max_distance=threshold)
    full = bad_list_oracle(CODE, L, max_distance=threshold, reduce_translations=False)
    naive = naive_bad_lists(CODE, L, threshold)
    print(reduced.flagged, reduced.flagged_total, len(naive))
    assert full.flagged == full.flagged_total == len(naive)
    assert reduced.flagged_total == len(naive)
    assert reduced.translation_reduced and not full.translation_reduced
    assert sorted(tuple(b.codewords) for b in full.bad_lists) == naive
    assert all(b.codewords[0] == 0 for b in reduced.bad_lists)
    assert reduced.min_total_distance == full.min_total_distance
    W = CODE.codeword_matrix()
    for bad in reduced.bad_lists:
        assert bad.total_distance <= threshold
        assert sum(hamming_distance(bad.y, W[i]) for i in bad.codewords) == bad.total_distance


def test_pairs_sit_at_least_the_minimum_distance_apart():
    # d(c1, c2) >= n - k + 1, so no pair fits the Singleton threshold n - k
    report = bad_list_oracle(CODE, 1)
    assert report.max_distance == CODE.n - CODE.k
    assert report.flagged == 0 and report.bad_lists == []
    assert report.min_total_distance == CODE.n - CODE.k + 1


def test_limit_keeps_counts():
    report = bad_list_oracle(CODE, 2, max_distance=5, limit=3)
    assert len(report.bad_lists) == 3
    assert report.flagged > 3


def test_sampled_oracle():
    report = bad_list_oracle(CODE, 2, "sampled", max_distance=5, samples=300, seed=4)
    print(report.model_dump())
    assert report.mode == "sampled"
    assert report.subsets_checked == 300
    assert 0 < report.coverage <= 1
    assert report.flagged == report.flagged_total == len(report.bad_lists)
    assert all(b.total_distance <= 5 for b in report.bad_lists)
    assert all(len(set(b.codewords)) == 3 for b in report.bad_lists)
    again = bad_list_oracle(CODE, 2, "sampled", max_distance=5, samples=300, seed=4)
    assert again.bad_lists == report.bad_lists


def test_oracle_validation():
    with pytest.raises(InvalidParameters):
        bad_list_oracle(CODE, 0)
    with pytest.raises(SearchSpaceTooLarge):
        bad_list_oracle(RSCode.random(FieldSpec.prime(257), 5, 2, seed=0), 1)
    with pytest.raises(InvalidParameters):
        bad_list_oracle(RSCode(GF5, (0, 1), 1), 5)


def test_blowup_closed_forms():
    assert full_length_blowup_search(GF5, 2, 0).list_size == 25
    one = full_length_blowup_search(GF5, 1, 5)
    assert one.method == "closed_form" and one.list_size == 1
    two = full_length_blowup_search(GF5, 1, 2)
    assert two.list_size == 2
    for c in range(two.list_size):
        assert sum(1 for v in two.best_y if v == c) >= 2
    with pytest.raises(InvalidParameters):
        full_length_blowup_search(GF5, 6, 2)
    with pytest.raises(InvalidParameters):
        full_length_blowup_search(GF5, 2, 6)


def test_blowup_exhaustive_matches_naive():
    k, agreement = 3, 3
    report = full_length_blowup_search(GF5, k, agreement)
    assert report.method == "exhaustive"
    assert report.searched == 5 ** (5 - k)
    W = RSCode.full_length(GF5, k).codeword_matrix()
    Y = np.array(list(product(range(5), repeat=5)))
    sizes = ((Y[:, None, :] == W[None, :, :]).sum(axis=2) >= agreement).sum(axis=1)
    assert report.list_size == int(sizes.max())
    best = np.array(report.best_y)
    assert int(((W == best[None, :]).sum(axis=1) >= agreement).sum()) == report.list_size


def test_blowup_lines_match_naive():
    GF7 = FieldSpec.prime(7)
    W = RSCode.full_length(GF7, 2).codeword_matrix()
    tail = np.array(list(product(range(7), repeat=5)))
    best = {a: 0 for a in (2, 3, 4)}
    for head in product(range(7), repeat=2):
        Y = np.hstack([np.tile(head, (len(tail), 1)), tail])
        agree = (Y[:, None, :] == W[None, :, :]).sum(axis=2)
        for a in best:
            best[a] = max(best[a], int((agree >= a).sum(axis=1).max()))
    for a, size in best.items():
        report = full_length_blowup_search(GF7, 2, a)
        print(a, report.list_size, report.searched)
        assert report.method == "exhaustive"
        assert report.list_size == size
        y = np.array(report.best_y)
        assert int(((W == y[None, :]).sum(axis=1) >= a).sum()) == size


def test_blowup_lines_budget():
    with pytest.raises(SearchSpaceTooLarge):
        full_length_blowup_search(FieldSpec.prime(11), 2, 1)


@pytest.mark.slow
def test_blowup_lines_gf11():
    report = full_length_blowup_search(FieldSpec.prime(11), 2, 4, samples=200)
    print(report)
    assert report.method == "exhaustive"
    W = RSCode.full_length(FieldSpec.prime(11), 2).codeword_matrix()
    y = np.array(report.best_y)
    assert int(((W == y[None, :]).sum(axis=1) >= 4).sum()) == report.list_size
