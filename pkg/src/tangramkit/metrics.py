"""Naming-variability metrics over one tangram's annotations.

Three measures of cross-annotator divergence: shape-naming divergence
(SND) over whole-shape descriptions, part-naming divergence (PND) over
concatenated part labels, and part-segmentation agreement (PSA) via
maximum-weight assignment between two segmentations.  A smoothed
leave-one-out unigram log-perplexity complements them.

Intermediate values are exact rationals; floats appear only in returned
scores.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import log2
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .corpus import ALL_PIECES
from .textnorm import normalize


class MetricError(ValueError):
    pass


# -- token rarity and divergence -------------------------------------------------


def token_rarity(token: str, own_index: int, token_lists: Sequence[Sequence[str]]) -> float:
    """Proportion of annotations that do not contain ``token``.

    The annotation's own term contributes 0 whenever it contains the
    token, so the sum runs over all annotations but is normalized by
    N - 1.
    """
    n = len(token_lists)
    if n < 2:
        raise MetricError("token rarity needs at least 2 annotations")
    absent = sum(1 for tokens in token_lists if token not in set(tokens))
    return float(Fraction(absent, n - 1))


@dataclass(frozen=True)
class DivergenceScore:
    value: float
    per_annotation: tuple[float, ...]
    excluded: tuple[int, ...]  # input indices that normalized to nothing


def _divergence(token_lists: Sequence[Sequence[str]]) -> DivergenceScore:
    kept = [(i, list(tokens)) for i, tokens in enumerate(token_lists) if tokens]
    excluded = tuple(i for i, tokens in enumerate(token_lists) if not tokens)
    if len(kept) < 2:
        raise MetricError(
            f"divergence needs at least 2 non-empty annotations, got {len(kept)}"
        )
    token_sets = [set(tokens) for _, tokens in kept]
    n = len(kept)
    per: list[float] = []
    total = Fraction(0)
    for _, tokens in kept:
        w_sum = Fraction(0)
        for token in tokens:
            absent = sum(1 for s in token_sets if token not in s)
            w_sum += Fraction(absent, n - 1)
        w = w_sum / len(tokens)
        per.append(float(w))
        total += w
    return DivergenceScore(
        value=float(total / n), per_annotation=tuple(per), excluded=excluded
    )


def snd(wholes: Sequence[str]) -> DivergenceScore:
    """Shape-naming divergence over whole-shape descriptions."""
    return _divergence([normalize(text) for text in wholes])


def pnd(part_labels: Sequence[Sequence[str]]) -> DivergenceScore:
    """Part-naming divergence over each annotation's concatenated labels."""
    return _divergence([normalize(" ".join(labels)) for labels in part_labels])


# -- part-segmentation agreement ---------------------------------------------------

Segmentation = Sequence[frozenset[int]]


def _check_partition(seg: Segmentation, name: str) -> list[frozenset[int]]:
    parts = [frozenset(p) for p in seg]
    covered: set[int] = set()
    for p in parts:
        if not p:
            raise MetricError(f"{name} contains an empty part")
        if covered & p:
            raise MetricError(f"{name} has overlapping parts")
        covered |= p
    if covered != ALL_PIECES:
        raise MetricError(f"{name} must partition pieces 1..7")
    return parts


def psa_pair(seg1: Segmentation, seg2: Segmentation) -> int:
    """Maximum-weight assignment between two segmentations.

    Weights are pairwise piece intersections; the matrix is zero-padded
    to square and solved exactly, so the result is an integer in [1, 7].
    """
    a = _check_partition(seg1, "seg1")
    b = _check_partition(seg2, "seg2")
    side = max(len(a), len(b))
    weights = np.zeros((side, side), dtype=np.int64)
    for i, p in enumerate(a):
        for j, q in enumerate(b):
            weights[i, j] = len(p & q)
    rows, cols = linear_sum_assignment(weights, maximize=True)
    return int(weights[rows, cols].sum())


def brute_force_psa_pair(seg1: Segmentation, seg2: Segmentation) -> int:
    """Exhaustive maximum over injective part pairings (test oracle)."""
    a = _check_partition(seg1, "seg1")
    b = _check_partition(seg2, "seg2")
    if len(a) > len(b):
        a, b = b, a
    best = 0
    for assignment in permutations(range(len(b)), len(a)):
        weight = sum(len(a[i] & b[j]) for i, j in enumerate(assignment))
        best = max(best, weight)
    return best


@dataclass(frozen=True)
class PsaScore:
    value: float
    pair_values: tuple[tuple[int, ...], ...]  # symmetric, diagonal 7


def psa(segmentations: Sequence[Segmentation]) -> PsaScore:
    """Mean pairwise agreement over all unordered annotation pairs."""
    n = len(segmentations)
    if n < 2:
        raise MetricError("agreement needs at least 2 annotations")
    matrix = [[7] * n for _ in range(n)]
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            value = psa_pair(segmentations[i], segmentations[j])
            matrix[i][j] = matrix[j][i] = value
            total += value
    pairs = n * (n - 1) // 2
    return PsaScore(
        value=float(Fraction(total, pairs)),
        pair_values=tuple(tuple(row) for row in matrix),
    )


# -- smoothed leave-one-out log-perplexity ------------------------------------------


@dataclass(frozen=True)
class PerplexityParams:
    """Smoothing constant and vocabulary size for the unigram model."""

    k: Fraction = Fraction(1, 100)
    v: int = 1

    def __post_init__(self):
        object.__setattr__(self, "k", Fraction(self.k))
        if self.k <= 0:
            raise MetricError("smoothing constant must be positive")
        if self.v < 1:
            raise MetricError("vocabulary size must be at least 1")


def perplexity_params(all_wholes: Iterable[str], k: Fraction = Fraction(1, 100)) -> PerplexityParams:
    """Fix V as the stemmed vocabulary over all whole-shape annotations."""
    vocab = {t for text in all_wholes for t in normalize(text)}
    return PerplexityParams(k=k, v=max(1, len(vocab)))


@dataclass(frozen=True)
class PerplexityScore:
    value: float
    per_annotation: tuple[float, ...]
    excluded: tuple[int, ...]  # indices with no tokens or an empty model


def log_perplexity(wholes: Sequence[str], params: PerplexityParams) -> PerplexityScore:
    """Mean leave-one-out unigram log2-perplexity of one tangram's
    whole-shape annotations."""
    token_lists = [normalize(text) for text in wholes]
    if len(token_lists) < 2:
        raise MetricError("perplexity needs at least 2 annotations")

    per: list[float] = []
    kept: list[int] = []
    excluded: list[int] = []
    for j, tokens in enumerate(token_lists):
        others = [t for i, lst in enumerate(token_lists) if i != j for t in lst]
        if not tokens or not others:
            excluded.append(j)
            continue
        total = len(others)
        counts: dict[str, int] = {}
        for t in others:
            counts[t] = counts.get(t, 0) + 1
        denominator = total + params.k * params.v
        log_sum = 0.0
        for t in tokens:
            p = (counts.get(t, 0) + params.k) / denominator
            log_sum += log2(p.numerator / p.denominator)
        per.append(-log_sum / len(tokens))
        kept.append(j)

    if not per:
        raise MetricError("no annotation admits a leave-one-out model")
    return PerplexityScore(
        value=sum(per) / len(per), per_annotation=tuple(per), excluded=tuple(excluded)
    )
