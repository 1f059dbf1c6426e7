import random

import pytest

from tangramkit.corpus import AnalysisSet, Annotation, Part

WHOLE_WORDS = (
    "man", "dog", "bird", "rabbit", "angel", "rocket", "duck", "monk", "fox",
    "dancer", "camel", "swan", "turtle", "wizard", "robot", "horse", "cat",
    "skater", "giant", "goose", "heron", "gnome", "yogi", "crane", "tree",
    "bridge", "tower", "ship", "whale", "lion",
)
MODIFIER_WORDS = (
    "dancing", "sleeping", "flying", "running", "sitting", "jumping",
    "falling", "bowing", "kneeling", "floating", "crouching", "leaping",
    "waving", "diving", "stretching", "spinning", "resting", "charging",
    "gliding", "marching",
)
PART_WORDS = (
    "head", "arm", "leg", "tail", "body", "wing", "ear", "hat", "foot",
    "hand", "neck", "beak", "torso", "knee", "fin", "chest",
)


def make_parts(rng: random.Random, n_parts: int | None = None) -> tuple[Part, ...]:
    """A random full partition of pieces 1..7 with distinct labels."""
    pieces = list(range(1, 8))
    rng.shuffle(pieces)
    if n_parts is None:
        n_parts = rng.choice((2, 3, 3, 4, 4, 5))
    cuts = sorted(rng.sample(range(1, 7), n_parts - 1))
    bounds = [0, *cuts, 7]
    labels = rng.sample(PART_WORDS, n_parts)
    return tuple(
        Part(frozenset(pieces[lo:hi]), label)
        for lo, hi, label in zip(bounds, bounds[1:], labels)
    )


def make_annotation(
    tangram_id: str,
    worker_id: str,
    rng: random.Random,
    whole: str | None = None,
    n_parts: int | None = None,
    timestamp: float = 0.0,
    batch: int | None = None,
) -> Annotation:
    if whole is None:
        whole = f"{rng.choice(MODIFIER_WORDS)} {rng.choice(WHOLE_WORDS)}"
    return Annotation(
        tangram_id=tangram_id,
        worker_id=worker_id,
        whole=whole,
        parts=make_parts(rng, n_parts),
        timestamp=timestamp,
        batch=batch,
    )


def make_corpus(
    n_tangrams: int,
    annotations_per: int,
    seed: int = 0,
) -> list[Annotation]:
    rng = random.Random(seed)
    annotations = []
    timestamp = 0.0
    for t in range(n_tangrams):
        for i in range(annotations_per):
            timestamp += 1.0
            annotations.append(make_annotation(
                f"t{t:03d}", f"w{t:03d}-{i}", rng, timestamp=timestamp
            ))
    return annotations


def as_analysis_set(annotations, name: str = "test") -> AnalysisSet:
    members: dict[str, list[Annotation]] = {}
    for a in annotations:
        members.setdefault(a.tangram_id, []).append(a)
    return AnalysisSet(name, {t: tuple(v) for t, v in members.items()})


@pytest.fixture
def rng() -> random.Random:
    return random.Random(12345)
