"""
Annotation corpora, analysis sets, and splits
=============================================

An annotation pairs a whole-shape description with a segmentation map:
every one of the seven pieces ends up in exactly one named part.  A
corpus is a JSON-lines file of such records.  From a corpus we build
three analysis sets (all sparse annotations plus a sampled core of the
densely annotated tangrams) and a train/dev/test split over tangrams.
"""

import random

from tangramkit import (
    Annotation,
    Part,
    build_analysis_sets,
    build_splits,
    dataset_stats,
    dump_corpus,
    load_corpus,
)
from tangramkit.service.demo import synthetic_corpus

# one annotation by hand: parts must cover pieces 1..7 without overlap
annotation = Annotation(
    tangram_id="t000",
    worker_id="w1",
    whole="a dancing man",
    parts=(
        Part(frozenset({1, 2}), "head"),
        Part(frozenset({3, 4, 5}), "arms"),
        Part(frozenset({6, 7}), "legs"),
    ),
    timestamp=1_600_000_000.0,
)
print("hand-built annotation:", annotation.whole,
      "with", len(annotation.parts), "parts")

# round-trip through the file format
line = dump_corpus([annotation])
print("serialized:", line.strip()[:76], "...")
assert load_corpus(line.splitlines()) == [annotation]

# a synthetic corpus: 60 tangrams, ~12 annotations each, two of them
# annotated densely (55 extra annotations)
rng = random.Random(0)
ids = [f"t{i:03d}" for i in range(60)]
dense_ids = frozenset(ids[:2])
annotations = synthetic_corpus(ids, rng, annotations_per=12, dense_ids=dense_ids)
print(f"\nsynthetic corpus: {len(annotations)} annotations over {len(ids)} tangrams")

# analysis sets: Full keeps 10 core annotations per dense tangram so
# every tangram contributes comparable sample sizes
sets = build_analysis_sets(annotations, dense_ids, seed=0)
for s in (sets.full, sets.dense, sets.dense10):
    counts = sorted({len(v) for v in s.members.values()})
    print(f"  {s.name:8s} {len(s.members):3d} tangrams, annotations per tangram {counts}")

# corpus statistics: token lengths, vocabulary sizes, part shapes
stats = dataset_stats(sets.full)
print("\nwhole length mean/sd: "
      f"{stats.whole_length_mean:.2f} / {stats.whole_length_sd:.2f}")
print("part  length mean/sd: "
      f"{stats.part_length_mean:.2f} / {stats.part_length_sd:.2f}")
print(f"parts per shape:      {stats.parts_per_shape_mean:.2f}")
print(f"vocabulary (whole/part/overall): {stats.vocab_whole} / "
      f"{stats.vocab_part} / {stats.vocab_overall}")

# splits: dense tangrams become their own held-out set, the rest are
# shuffled into train/dev/test at 692:125:125 proportions
splits = build_splits(ids, dense_ids, seed=0)
print(f"\nsplit sizes: train={len(splits.train)} dev={len(splits.dev)} "
      f"test={len(splits.test)} test_dense={len(splits.test_dense)}")
assert build_splits(ids, dense_ids, seed=0) == splits
print("same seed, same split: True")
