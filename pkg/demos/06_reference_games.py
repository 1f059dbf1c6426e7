"""
Reference games: generation, augmentation, and scoring
======================================================

A reference game shows k=10 tangrams and one description; the player
must find the target.  Generation enforces three constraints: no
tangram appears twice, no two items share a normalized description,
and every item has the same number of parts as the target.  Conditions
control what the player sees: whole text vs. whole+parts, all-black vs.
part-colored images.  Scoring is model-free: similarity scores arrive
in an external table and are evaluated by argmax.
"""

import random
from collections import Counter

from tangramkit import (
    Condition,
    ScoreTable,
    augment_annotation,
    ensemble_scores,
    export_contrastive_matrix,
    generate_augmented_games,
    generate_game,
    score_games,
    template_text,
)
from tangramkit.corpus import AnalysisSet
from tangramkit.service.demo import synthetic_corpus

rng = random.Random(0)
ids = [f"t{i:03d}" for i in range(40)]
annotations = synthetic_corpus(ids, rng, annotations_per=12)
members: dict = {}
for a in annotations:
    members.setdefault(a.tangram_id, []).append(a)
pool = AnalysisSet("demo", {t: tuple(v) for t, v in members.items()})

# the text template inserts articles and commas
print(template_text("dog", ["head", "ears", "tail"]))

# one game in the richest condition: parts in text, parts colored
target_id = "t003"
target = (target_id, pool.members[target_id][0])
game = generate_game(target, pool, condition=Condition("parts", "color"),
                     rng=random.Random(1))
print(f"\ngame {game.id}: target hidden at index {game.target_index}")
print("target text:", game.target.rendered_text)
for text, color in game.target.text_spans:
    if color is not None:
        print(f"  span {text!r} -> {color}")

# constraints hold by construction
print("distinct tangrams:", len({i.tangram_id for i in game.items}) == game.k)

# augmentation: one example per non-empty part subset, colors always
# assigned in the fixed palette order by text position
examples = augment_annotation(target[1], random.Random(2))
print(f"\naugmentation: {len(target[1].parts)} parts -> {len(examples)} examples")
aug_games = generate_augmented_games(target, pool, rng=random.Random(3))
print("augmented games:", len(aug_games),
      "included parts histogram:",
      dict(Counter(g.included_parts for g in aug_games)))

# contrastive export: each game becomes two k-by-k matching records
records = export_contrastive_matrix([game])
print("\ncontrastive records per game:", len(records),
      "directions:", [r["direction"] for r in records])

# scoring: a table maps (game, item) to a similarity; here we fake a
# model that is right 70% of the time
games = []
for tangram_id in sorted(pool.members)[:20]:
    games.append(generate_game((tangram_id, pool.members[tangram_id][0]), pool,
                               rng=rng, game_id=f"g-{tangram_id}"))
entries = {}
for g in games:
    lucky = rng.random() < 0.7
    for i in range(g.k):
        base = rng.random() * 0.5
        if lucky and i == g.target_index:
            base += 1.0
        entries[(g.id, i)] = base + 0.1
table = ScoreTable(entries, provenance="fake model")
report = score_games(games, table)
print(f"\naccuracy {report.accuracy:.2f}, "
      f"mean p(correct) {report.mean_prob_correct:.2f}")

# two positive tables combine by element-wise product
combined = ensemble_scores([table, table])
print("ensembled provenance:", combined.provenance)
