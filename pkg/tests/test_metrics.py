import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tangramkit.metrics import (
    MetricError,
    PerplexityParams,
    brute_force_psa_pair,
    log_perplexity,
    perplexity_params,
    pnd,
    psa,
    psa_pair,
    snd,
    token_rarity,
)


def random_partition(rng: random.Random, max_parts: int = 7):
    pieces = list(range(1, 8))
    rng.shuffle(pieces)
    n_parts = rng.randint(1, max_parts)
    cuts = sorted(rng.sample(range(1, 7), n_parts - 1))
    bounds = [0, *cuts, 7]
    return tuple(frozenset(pieces[lo:hi]) for lo, hi in zip(bounds, bounds[1:]))


def all_partitions(max_parts: int):
    """Every set partition of {1..7} with at most max_parts blocks."""
    out = []

    def extend(element: int, blocks: list[list[int]]):
        if element == 8:
            out.append(tuple(frozenset(b) for b in blocks))
            return
        for block in blocks:
            block.append(element)
            extend(element + 1, blocks)
            block.pop()
        if len(blocks) < max_parts:
            blocks.append([element])
            extend(element + 1, blocks)
            blocks.pop()

    extend(1, [])
    return out


class TestDivergence:
    def test_identical_annotations_zero(self):
        assert snd(["a dancing man", "a dancing man"]).value == 0.0
        assert snd(["dog", "dog", "dog"]).value == 0.0

    def test_disjoint_pair_one(self):
        assert snd(["duck", "rabbit"]).value == 1.0
        assert snd(["flying duck", "sleeping rabbit"]).value == 1.0

    def test_three_annotation_hand_case_two_thirds(self):
        # w("dog") = 1/2 twice, w("cat") = 1; mean = 2/3 exactly
        score = snd(["dog", "dog", "cat"])
        assert score.value == float(Fraction(2, 3))
        assert score.per_annotation == (0.5, 0.5, 1.0)

    def test_token_rarity_uses_set_membership(self):
        # repeated tokens inside one annotation count once
        assert token_rarity("dog", 0, [["dog", "dog"], ["dog"], ["cat"]]) == 0.5
        score = snd(["dog dog", "dog", "cat"])
        assert score.value == float(Fraction(2, 3))

    def test_mean_over_token_occurrences(self):
        # "big dog" vs "dog": w1 = (1 + 0)/2 = 1/2, w2 = 0; mean = 1/4
        score = snd(["big dog", "dog"])
        assert score.value == 0.25
        assert score.per_annotation == (0.5, 0.0)

    def test_empty_normalizations_excluded(self):
        score = snd(["the", "duck", "rabbit"])  # "the" normalizes to nothing
        assert score.excluded == (0,)
        assert score.value == 1.0

    def test_fewer_than_two_nonempty_rejected(self):
        with pytest.raises(MetricError):
            snd(["duck"])
        with pytest.raises(MetricError):
            snd(["the", "duck"])
        with pytest.raises(MetricError):
            token_rarity("x", 0, [["x"]])

    def test_pnd_concatenates_labels(self):
        assert pnd([["head", "tail"], ["head", "tail"]]).value == 0.0
        assert pnd([["head"], ["tail"]]).value == 1.0
        assert pnd([["dog"], ["dog"], ["cat"]]).value == float(Fraction(2, 3))

    def test_normalization_is_applied(self):
        # stemming maps both "running"/"runs" to "run"
        assert snd(["running", "runs"]).value == 0.0

    @given(st.lists(
        st.lists(st.sampled_from(["duck", "rabbit", "bird", "stone"]),
                 min_size=1, max_size=4),
        min_size=2, max_size=6,
    ))
    def test_divergence_bounded(self, texts):
        score = snd([" ".join(tokens) for tokens in texts])
        assert 0.0 <= score.value <= 1.0


class TestPsa:
    def test_identical_partitions_score_seven(self):
        seg = (frozenset({1, 2}), frozenset({3, 4, 5}), frozenset({6, 7}))
        assert psa_pair(seg, seg) == 7

    def test_coarser_regrouping_fixture(self):
        a = (frozenset({1, 2, 3}), frozenset({4, 5}), frozenset({6, 7}))
        b = (frozenset({1, 2, 3}), frozenset({4, 5, 6, 7}))
        # {1,2,3} maps intact, then one of {4,5}/{6,7} fits inside {4,5,6,7}
        assert psa_pair(a, b) == 5
        assert brute_force_psa_pair(a, b) == 5

    def test_coarse_vs_singletons(self):
        whole = (frozenset(range(1, 8)),)
        singles = tuple(frozenset({i}) for i in range(1, 8))
        assert psa_pair(whole, singles) == 1
        assert brute_force_psa_pair(whole, singles) == 1

    def test_oracle_equivalence_random_pairs(self):
        rng = random.Random(99)
        for _ in range(200):
            a, b = random_partition(rng), random_partition(rng)
            assert psa_pair(a, b) == brute_force_psa_pair(a, b)

    def test_symmetric_and_bounded(self):
        rng = random.Random(7)
        for _ in range(100):
            a, b = random_partition(rng), random_partition(rng)
            forward = psa_pair(a, b)
            assert forward == psa_pair(b, a)
            assert 1 <= forward <= 7

    def test_invalid_partitions_rejected(self):
        with pytest.raises(MetricError):
            psa_pair((frozenset({1}),), (frozenset(range(1, 8)),))
        with pytest.raises(MetricError):
            psa_pair(
                (frozenset({1, 2}), frozenset({2, 3, 4, 5, 6, 7})),
                (frozenset(range(1, 8)),),
            )

    def test_mean_over_pairs_and_matrix(self):
        seg1 = (frozenset(range(1, 8)),)
        seg2 = tuple(frozenset({i}) for i in range(1, 8))
        score = psa([seg1, seg1, seg2])
        # pairs: (1,1): 7, (1,2): 1, (1,2): 1 -> mean 3
        assert score.value == 3.0
        assert score.pair_values[0][1] == 7
        assert score.pair_values[0][2] == 1
        assert score.pair_values[1][0] == 7  # symmetric
        assert all(score.pair_values[i][i] == 7 for i in range(3))

    def test_needs_two(self):
        with pytest.raises(MetricError):
            psa([(frozenset(range(1, 8)),)])


class TestPerplexity:
    def test_identical_single_token_pair_is_zero(self):
        params = PerplexityParams(k=Fraction(1, 100), v=1)
        assert log_perplexity(["duck", "duck"], params).value == 0.0

    def test_absent_token_case_exact(self):
        params = PerplexityParams(k=Fraction(1, 100), v=2)
        score = log_perplexity(["duck", "rabbit"], params)
        expected = math.log2(1.02 / 0.01)
        assert score.value == pytest.approx(expected, abs=1e-9)
        assert score.per_annotation == (score.per_annotation[0],) * 2

    def test_params_from_corpus_vocabulary(self):
        params = perplexity_params(["a duck", "the rabbit", "duck"])
        assert params.v == 2  # duck, rabbit after stopword removal
        assert params.k == Fraction(1, 100)

    def test_mixed_lengths_average_per_token(self):
        params = PerplexityParams(k=Fraction(1), v=2)
        # leave-one-out of ["duck"] against ["duck","duck"]: p = 3/4
        # leave-one-out of ["duck","duck"] against ["duck"]: p = 2/3 each
        score = log_perplexity(["duck", "duck duck"], params)
        expected = (-math.log2(3 / 4) - math.log2(2 / 3)) / 2
        assert score.value == pytest.approx(expected, abs=1e-12)

    def test_empty_annotations_excluded(self):
        params = PerplexityParams(k=Fraction(1, 100), v=3)
        score = log_perplexity(["the", "duck", "rabbit"], params)
        assert score.excluded == (0,)

    def test_all_empty_rejected(self):
        params = PerplexityParams(k=Fraction(1, 100), v=1)
        with pytest.raises(MetricError):
            log_perplexity(["the", "a"], params)
        with pytest.raises(MetricError):
            log_perplexity(["duck"], params)

    def test_invalid_params_rejected(self):
        with pytest.raises(MetricError):
            PerplexityParams(k=Fraction(0))
        with pytest.raises(MetricError):
            PerplexityParams(k=Fraction(1, 100), v=0)

    @settings(max_examples=30)
    @given(st.lists(
        st.lists(st.sampled_from(["duck", "rabbit", "bird"]), min_size=1, max_size=3),
        min_size=2, max_size=5,
    ))
    def test_perplexity_nonnegative(self, token_lists):
        texts = [" ".join(tokens) for tokens in token_lists]
        params = perplexity_params(texts)
        assert log_perplexity(texts, params).value >= 0.0
