"""
Naming divergence and segmentation agreement
============================================

Three per-tangram measures of how much annotators disagree:

- SND scores whole-shape descriptions by mean token rarity: for each
  token occurrence, the fraction of the other annotations whose
  description never uses it.  0 = everyone says the same thing.
- PND is the same computation over the concatenated part labels.
- PSA scores segmentations pairwise: the maximum number of pieces that
  keep their grouping under the best part-to-part matching, found by
  maximum-weight assignment.  7 = identical segmentations.

A smoothed leave-one-out unigram model gives a fourth, probabilistic
view: the log2-perplexity of each description under the others.
"""

import random

from tangramkit import (
    brute_force_psa_pair,
    log_perplexity,
    perplexity_params,
    pnd,
    psa,
    psa_pair,
    snd,
)
from tangramkit.metrics import token_rarity

# perfect consensus vs full divergence
print("snd same x3 :", snd(["a dancing man"] * 3).value)
print("snd disjoint:", snd(["a dancing man", "flying bird"]).value)

# the scoring is per token occurrence: 'dog' is shared, 'big' is not
wholes = ["big dog", "dog"]
score = snd(wholes)
print("\nsnd(['big dog', 'dog']) =", score.value)
print("  'big' rarity:", token_rarity("big", 0, [["big", "dog"], ["dog"]]))
print("  'dog' rarity:", token_rarity("dog", 0, [["big", "dog"], ["dog"]]))

# part labels concatenate per annotation before the same computation
print("\npnd identical:", pnd([["head", "arms"], ["head", "arms"]]).value)
print("pnd disjoint :", pnd([["head", "torso"], ["wing", "beak"]]).value)

# segmentation agreement: two 3-part maps of the same seven pieces
seg_a = (frozenset({1, 2}), frozenset({3, 4, 5}), frozenset({6, 7}))
seg_b = (frozenset({1, 2}), frozenset({3, 4}), frozenset({5, 6, 7}))
print("\npsa_pair(a, b) =", psa_pair(seg_a, seg_b), "of 7 pieces")

# the assignment solver agrees with exhaustive matching search
def random_partition(rng: random.Random):
    pieces = list(range(1, 8))
    rng.shuffle(pieces)
    cuts = sorted(rng.sample(range(1, 7), rng.randint(0, 6)))
    bounds = [0, *cuts, 7]
    return tuple(frozenset(pieces[lo:hi]) for lo, hi in zip(bounds, bounds[1:]))


rng = random.Random(0)
pairs = [(random_partition(rng), random_partition(rng)) for _ in range(200)]
print("psa_pair == brute force on 200 random pairs:",
      all(psa_pair(p, q) == brute_force_psa_pair(p, q) for p, q in pairs))

# averaged over all annotation pairs of one tangram
segmentations = [seg_a, seg_b, seg_a]
print("psa over 3 annotations:", psa(segmentations).value)

# leave-one-out perplexity: rare descriptions score high
wholes = ["a dog", "a dog", "a dog", "spooky skeleton"]
params = perplexity_params(wholes)
result = log_perplexity(wholes, params)
print(f"\nlog2 perplexity mean: {result.value:.3f}")
for whole, value in zip(wholes, result.per_annotation):
    print(f"  {whole!r:20s} {value:.3f}")
