"""Build a self-contained demo dataset: scattered-piece compositions,
a synthetic annotation corpus, game pools for all four conditions, and
a service config pointing at them.

Everything is deterministic under the seed, so tests and the demo UI
can rebuild identical fixtures.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from pathlib import Path

from ..corpus import AnalysisSet, Annotation, Part, dump_corpus
from ..exact import coord
from ..geometry import (
    PieceKind,
    Placement,
    Tangram,
    VALID_ROTATIONS,
    canonical_square,
    interiors_disjoint,
    serialize_composition,
)
from ..refgames import Condition, GameError, dump_games, generate_game
from .config import ServiceConfig
from .store import CONDITIONS

PIECE_SEQUENCE = (
    PieceKind.LARGE_TRIANGLE_1, PieceKind.LARGE_TRIANGLE_2, PieceKind.MEDIUM_TRIANGLE,
    PieceKind.SMALL_TRIANGLE_1, PieceKind.SMALL_TRIANGLE_2, PieceKind.SQUARE,
    PieceKind.PARALLELOGRAM,
)

ADJECTIVES = (
    "dancing", "sleeping", "flying", "running", "sitting", "jumping", "falling",
    "bowing", "kneeling", "floating", "crouching", "leaping", "waving", "diving",
    "stretching", "spinning", "resting", "charging", "gliding", "marching",
)
NOUNS = (
    "man", "dog", "bird", "rabbit", "angel", "rocket", "duck", "monk", "fox",
    "dancer", "camel", "swan", "turtle", "wizard", "robot", "horse", "cat",
    "skater", "giant", "goose", "heron", "gnome", "yogi", "crane",
)
PART_LABELS = (
    "head", "arm", "leg", "tail", "body", "wing", "ear", "hat", "foot",
    "hand", "neck", "beak", "torso", "knee", "fin", "chest",
)


def random_scatter_tangram(tangram_id: str, rng: random.Random) -> Tangram:
    """Seven valid, non-overlapping placements on a half-integer grid.

    The result is usually disconnected, which validates with a warning;
    it stands in for arbitrary stimulus shapes."""
    while True:
        placements: list[Placement] = []
        vertex_sets = []
        failed = False
        for kind in PIECE_SEQUENCE:
            for _ in range(200):
                placement = Placement(
                    piece=kind,
                    translation=(
                        coord(Fraction(rng.randrange(0, 25), 2)),
                        coord(Fraction(rng.randrange(0, 25), 2)),
                    ),
                    rotation=rng.choice(VALID_ROTATIONS),
                    mirrored=(kind is PieceKind.PARALLELOGRAM and rng.random() < 0.5),
                )
                pts = placement.vertices()
                if all(interiors_disjoint(pts, other) for other in vertex_sets):
                    placements.append(placement)
                    vertex_sets.append(pts)
                    break
            else:
                failed = True
                break
        if not failed:
            return Tangram(tangram_id, tuple(placements))


def _random_partition(rng: random.Random) -> tuple[Part, ...]:
    pieces = list(range(1, 8))
    rng.shuffle(pieces)
    n_parts = rng.choice((2, 3, 3, 4, 4, 5))
    cuts = sorted(rng.sample(range(1, 7), n_parts - 1))
    bounds = [0, *cuts, 7]
    labels = rng.sample(PART_LABELS, n_parts)
    return tuple(
        Part(frozenset(pieces[lo:hi]), label)
        for lo, hi, label in zip(bounds, bounds[1:], labels)
    )


def synthetic_corpus(
    tangram_ids: list[str],
    rng: random.Random,
    annotations_per: int = 12,
    dense_ids: frozenset[str] = frozenset(),
    dense_count: int = 55,
) -> list[Annotation]:
    annotations = []
    timestamp = 1_600_000_000.0
    for tangram_id in tangram_ids:
        count = dense_count if tangram_id in dense_ids else annotations_per
        for i in range(count):
            timestamp += 1.0
            whole = f"{rng.choice(ADJECTIVES)} {rng.choice(NOUNS)}"
            annotations.append(Annotation(
                tangram_id=tangram_id,
                worker_id=f"w{rng.randrange(10_000):04d}-{i}",
                whole=whole,
                parts=_random_partition(rng),
                timestamp=timestamp,
                batch=0 if i < 10 else 1,
            ))
    return annotations


def demo_games(annotations: list[Annotation], rng: random.Random, per_condition: int = 40):
    members: dict[str, list[Annotation]] = {}
    for a in annotations:
        members.setdefault(a.tangram_id, []).append(a)
    pool = AnalysisSet("demo", {t: tuple(v) for t, v in members.items()})
    # Round-robin over tangrams so small pools still spread targets.
    targets = [
        (position, tangram_id, a)
        for tangram_id in sorted(members)
        for position, a in enumerate(members[tangram_id])
    ]
    targets = [(t, a) for _, t, a in sorted(targets, key=lambda x: (x[0], x[1]))]
    games = []
    for condition in CONDITIONS:
        built = 0
        for tangram_id, annotation in targets:
            if built == per_condition:
                break
            try:
                game = generate_game(
                    (tangram_id, annotation), pool,
                    condition=condition, rng=rng,
                    game_id=f"{condition.name}-{built:03d}",
                )
            except GameError:
                continue  # target part count too rare in a small pool
            games.append(game)
            built += 1
        if built < per_condition:
            raise GameError(
                f"could only build {built}/{per_condition} games for {condition.name}"
            )
    return games


def build_demo_data(
    root: Path,
    seed: int = 0,
    n_tangrams: int = 24,
    annotations_per: int = 12,
    games_per_condition: int = 40,
) -> ServiceConfig:
    """Write compositions, corpus, games, and config under ``root``;
    returns the config (also saved as config.json)."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)

    tangrams = [canonical_square("square")]
    tangrams += [
        random_scatter_tangram(f"t{i:03d}", rng) for i in range(n_tangrams)
    ]
    compositions_file = root / "compositions.jsonl"
    lines = [
        json.dumps(json.loads(serialize_composition(t)), separators=(",", ":"))
        for t in tangrams
    ]
    compositions_file.write_text(
        "# demo stimuli: one composition per line\n" + "\n".join(lines) + "\n"
    )

    corpus_ids = [t.id for t in tangrams if t.id != "square"]
    dense_ids = frozenset(corpus_ids[:2])
    annotations = synthetic_corpus(
        corpus_ids, rng, annotations_per=annotations_per, dense_ids=dense_ids
    )
    (root / "annotations.jsonl").write_text(
        "# demo corpus: one annotation per line\n" + dump_corpus(annotations)
    )

    games = demo_games(annotations, rng, per_condition=games_per_condition)
    (root / "games.jsonl").write_text(dump_games(games))

    config = ServiceConfig(
        data_dir=root / "data",
        compositions_file=compositions_file,
        games_file=root / "games.jsonl",
        dense_ids=dense_ids,
        seed=seed,
    )
    config.to_file(root / "config.json")
    return config
