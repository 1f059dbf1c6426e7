"""Reference-game construction, augmentation, export, and scoring.

A game shows k images and the text of one target item; external systems
assign each (text, image) pair a similarity score, returned here as
score tables.  Game generation can enforce the sampling constraints
(distinct images, distinct whole-shape texts, equal part counts) or
drop them; part-subset augmentation produces one example per non-empty
subset of an annotation's shuffled parts.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import ALL_PIECES, AnalysisSet, Annotation
from .porter import stem
from .stats import bootstrap_ci
from .textnorm import normalize, tokenize

# Part colors in their fixed sequential order; position in the templated
# text decides the color, never the part identity.
PART_COLOR_ORDER = (
    "coral",
    "gold",
    "lightskyblue",
    "lightpink",
    "mediumseagreen",
    "darkgrey",
    "lightgrey",
)

DEFAULT_K = 10


class GameError(ValueError):
    pass


# -- text templating -----------------------------------------------------------


def _is_plural(label: str) -> bool:
    # Heuristic: a trailing "s" that stemming strips marks a plural.
    tokens = tokenize(label)
    if not tokens:
        return False
    word = tokens[-1]
    return word.endswith("s") and not stem(word).endswith("s")


def _with_article(label: str) -> str:
    if _is_plural(label):
        return label
    stripped = label.strip()
    first = next((c for c in stripped.lower() if c.isalpha()), "")
    article = "an" if first in "aeiou" else "a"
    return f"{article} {stripped}"


def template_spans(
    whole: str, part_labels: Sequence[str], colors: Sequence[str | None] = ()
) -> tuple[tuple[str, str | None], ...]:
    """(text, color) spans of the templated sentence.

    Part phrases carry the color at their position when one is given;
    connective text carries none.  Joining the span texts yields
    template_text(whole, part_labels).
    """
    if not whole:
        raise GameError("whole-shape description must be non-empty")
    spans: list[tuple[str, str | None]] = [(whole, None)]
    phrases = [_with_article(label) for label in part_labels]
    for i, phrase in enumerate(phrases):
        if i == 0:
            spans.append((" with ", None))
        elif i == len(phrases) - 1:
            spans.append((" and " if len(phrases) == 2 else ", and ", None))
        else:
            spans.append((", ", None))
        color = colors[i] if i < len(colors) else None
        spans.append((phrase, color))
    return tuple(spans)


def template_text(whole: str, part_labels: Sequence[str]) -> str:
    """Combine a whole-shape description with part labels.

    "<whole> with <part>, <part>, ..., and <part>", an indefinite
    article before each singular label; no labels returns the whole
    unchanged.
    """
    return "".join(text for text, _ in template_spans(whole, part_labels))


# -- conditions and game records --------------------------------------------------

TEXT_CONDITIONS = ("whole", "parts")
IMAGE_CONDITIONS = ("black", "color")


@dataclass(frozen=True)
class Condition:
    text: str
    image: str
    augmented: bool = False

    def __post_init__(self):
        if self.text not in TEXT_CONDITIONS or self.image not in IMAGE_CONDITIONS:
            raise GameError(f"unknown condition {self.text}+{self.image}")
        if self.augmented and (self.text != "parts" or self.image != "color"):
            raise GameError("augmentation applies only to the parts+color condition")

    @property
    def name(self) -> str:
        suffix = "+aug" if self.augmented else ""
        return f"{self.text}+{self.image}{suffix}"


@dataclass(frozen=True)
class GameItem:
    tangram_id: str
    annotation_id: str  # the annotating worker; (worker, tangram) is unique
    rendered_text: str
    colored_part_indexes: tuple[int, ...]
    color_map: Mapping[int, str]
    # (text, color) segments of rendered_text; lets a UI color part
    # phrases without re-parsing the sentence.
    text_spans: tuple[tuple[str, str | None], ...] = ()

    def __post_init__(self):
        if not self.rendered_text:
            raise GameError("item text must be non-empty")
        object.__setattr__(self, "color_map", dict(self.color_map))
        if not self.text_spans:
            object.__setattr__(self, "text_spans", ((self.rendered_text, None),))
        if "".join(text for text, _ in self.text_spans) != self.rendered_text:
            raise GameError("text spans must join to the rendered text")


@dataclass(frozen=True)
class ReferenceGame:
    id: str
    condition: Condition
    target_index: int
    items: tuple[GameItem, ...]
    k: int = DEFAULT_K
    included_parts: int | None = None  # augmented games only
    total_parts: int | None = None

    def __post_init__(self):
        if len(self.items) != self.k:
            raise GameError(f"game needs exactly k={self.k} items, got {len(self.items)}")
        if not 0 <= self.target_index < self.k:
            raise GameError("target index out of range")

    @property
    def target(self) -> GameItem:
        return self.items[self.target_index]


def text_key(whole: str):
    """Comparison key for the distinct-text constraint: the multiset of
    normalized tokens."""
    counts: dict[str, int] = {}
    for token in normalize(whole):
        counts[token] = counts.get(token, 0) + 1
    return tuple(sorted(counts.items()))


# -- item rendering ----------------------------------------------------------------


def _render_item(
    tangram_id: str,
    annotation: Annotation,
    condition: Condition,
    rng: random.Random,
    part_order: Sequence[int] | None = None,
    subset_size: int | None = None,
) -> GameItem:
    """Render one annotation under a condition.

    Part order is shuffled whenever parts appear in text or color, so
    colors track text position rather than part identity.  A subset
    size < P renders an augmented example over the first ``subset_size``
    parts of the shuffled order.
    """
    indexes = list(range(len(annotation.parts)))
    if part_order is not None:
        indexes = list(part_order)
    elif condition.text == "parts" or condition.image == "color":
        rng.shuffle(indexes)
    included = indexes if subset_size is None else indexes[:subset_size]

    color_map = {piece: "black" for piece in ALL_PIECES}
    if condition.image == "color":
        for position, part_index in enumerate(included):
            for piece in annotation.parts[part_index].piece_ids:
                color_map[piece] = PART_COLOR_ORDER[position]
        colored = tuple(included)
    else:
        colored = ()

    if condition.text == "parts":
        labels = [annotation.parts[i].label for i in included]
        part_colors = (
            [PART_COLOR_ORDER[p] for p in range(len(included))]
            if condition.image == "color" else []
        )
        spans = template_spans(annotation.whole, labels, part_colors)
        text = "".join(t for t, _ in spans)
    else:
        spans = ((annotation.whole, None),)
        text = annotation.whole

    return GameItem(
        tangram_id=tangram_id,
        annotation_id=annotation.worker_id,
        rendered_text=text,
        colored_part_indexes=colored,
        color_map=color_map,
        text_spans=spans,
    )


# -- game generation ----------------------------------------------------------------


def generate_game(
    target: tuple[str, Annotation],
    pool: AnalysisSet,
    k: int = DEFAULT_K,
    condition: Condition = Condition("whole", "black"),
    constraints: bool = True,
    rng: random.Random | None = None,
    game_id: str | None = None,
) -> ReferenceGame:
    """Sample k-1 distractors for a target annotation.

    With constraints on, no tangram repeats, no two items share a
    normalized whole-text multiset, and every item has the target's
    part count.  Distractor annotations are drawn uniformly from each
    tangram's eligible annotations.
    """
    if rng is None:
        rng = random.Random(0)
    target_id, target_annotation = target
    target_parts = len(target_annotation.parts)
    used_keys = {text_key(target_annotation.whole)} if constraints else set()

    candidate_ids = [tid for tid in sorted(pool.members) if tid != target_id]
    rng.shuffle(candidate_ids)
    chosen: list[tuple[str, Annotation]] = []
    for tid in candidate_ids:
        if len(chosen) == k - 1:
            break
        annotations = list(pool.members[tid])
        rng.shuffle(annotations)
        for a in annotations:
            if constraints:
                if len(a.parts) != target_parts:
                    continue
                key = text_key(a.whole)
                if key in used_keys:
                    continue
                used_keys.add(key)
            chosen.append((tid, a))
            break
    if len(chosen) < k - 1:
        raise GameError(
            f"only {len(chosen)} eligible distractors for target {target_id!r}, need {k - 1}"
        )

    target_index = rng.randrange(k)
    entries = chosen[:target_index] + [(target_id, target_annotation)] + chosen[target_index:]
    items = tuple(_render_item(tid, a, condition, rng) for tid, a in entries)
    return ReferenceGame(
        id=game_id or f"g-{target_id}-{target_annotation.worker_id}",
        condition=condition,
        target_index=target_index,
        items=items,
        k=k,
    )


# -- augmentation -------------------------------------------------------------------


@dataclass(frozen=True)
class AugmentedExample:
    part_subset: tuple[int, ...]  # original part indexes, in text order
    rendered_text: str
    color_map: Mapping[int, str]
    included_parts: int
    total_parts: int

    def __post_init__(self):
        object.__setattr__(self, "color_map", dict(self.color_map))


def augment_annotation(a: Annotation, rng: random.Random) -> list[AugmentedExample]:
    """One example per non-empty subset of the shuffled parts (2^P - 1).

    The shuffle happens once per annotation; each subset keeps the
    shuffled order, and colors follow text position.  Pieces of
    excluded parts are black.
    """
    order = list(range(len(a.parts)))
    rng.shuffle(order)
    examples: list[AugmentedExample] = []
    for size in range(1, len(order) + 1):
        for positions in combinations(range(len(order)), size):
            subset = tuple(order[p] for p in positions)
            labels = [a.parts[i].label for i in subset]
            text = template_text(a.whole, labels)
            color_map = {piece: "black" for piece in ALL_PIECES}
            for position, part_index in enumerate(subset):
                for piece in a.parts[part_index].piece_ids:
                    color_map[piece] = PART_COLOR_ORDER[position]
            examples.append(AugmentedExample(
                part_subset=subset,
                rendered_text=text,
                color_map=color_map,
                included_parts=size,
                total_parts=len(order),
            ))
    return examples


def generate_augmented_games(
    target: tuple[str, Annotation],
    pool: AnalysisSet,
    k: int = DEFAULT_K,
    constraints: bool = True,
    rng: random.Random | None = None,
    game_id_prefix: str | None = None,
) -> list[ReferenceGame]:
    """One game per augmented example of the target annotation.

    Distractors are rendered as ordinary parts+color items; only the
    target carries a partial part subset.
    """
    if rng is None:
        rng = random.Random(0)
    target_id, target_annotation = target
    condition = Condition("parts", "color", augmented=True)
    examples = augment_annotation(target_annotation, rng)
    prefix = game_id_prefix or f"g-{target_id}-{target_annotation.worker_id}"

    games: list[ReferenceGame] = []
    for seq, example in enumerate(examples):
        base = generate_game(
            target, pool, k=k, condition=condition, constraints=constraints, rng=rng,
            game_id=f"{prefix}-aug{seq}",
        )
        target_item = _render_item(
            target_id, target_annotation, condition, rng,
            part_order=example.part_subset, subset_size=example.included_parts,
        )
        items = list(base.items)
        items[base.target_index] = target_item
        games.append(ReferenceGame(
            id=base.id,
            condition=condition,
            target_index=base.target_index,
            items=tuple(items),
            k=k,
            included_parts=example.included_parts,
            total_parts=example.total_parts,
        ))
    return games


# -- games file format ----------------------------------------------------------------


def game_to_record(game: ReferenceGame) -> dict:
    record = {
        "gameId": game.id,
        "condition": {
            "text": game.condition.text,
            "image": game.condition.image,
            "augmented": game.condition.augmented,
        },
        "k": game.k,
        "targetIndex": game.target_index,
        "items": [
            {
                "tangramId": item.tangram_id,
                "annotationId": item.annotation_id,
                "text": item.rendered_text,
                "coloredPartIndexes": list(item.colored_part_indexes),
                "colorMap": {str(piece): color for piece, color in sorted(item.color_map.items())},
                "textSpans": [[text, color] for text, color in item.text_spans],
            }
            for item in game.items
        ],
    }
    if game.included_parts is not None:
        record["includedParts"] = game.included_parts
        record["totalParts"] = game.total_parts
    return record


def game_from_record(record: Mapping) -> ReferenceGame:
    try:
        condition = Condition(
            record["condition"]["text"],
            record["condition"]["image"],
            bool(record["condition"].get("augmented", False)),
        )
        items = tuple(
            GameItem(
                tangram_id=str(entry["tangramId"]),
                annotation_id=str(entry["annotationId"]),
                rendered_text=str(entry["text"]),
                colored_part_indexes=tuple(int(i) for i in entry.get("coloredPartIndexes", [])),
                color_map={int(p): str(c) for p, c in entry["colorMap"].items()},
                text_spans=tuple(
                    (str(text), None if color is None else str(color))
                    for text, color in entry.get("textSpans", [])
                ),
            )
            for entry in record["items"]
        )
        return ReferenceGame(
            id=str(record["gameId"]),
            condition=condition,
            target_index=int(record["targetIndex"]),
            items=items,
            k=int(record["k"]),
            included_parts=record.get("includedParts"),
            total_parts=record.get("totalParts"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise GameError(f"malformed game record: {exc}") from exc


def dump_games(games: Iterable[ReferenceGame]) -> str:
    return "".join(json.dumps(game_to_record(g)) + "\n" for g in games)


def load_games(lines: Iterable[str]) -> list[ReferenceGame]:
    games = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            games.append(game_from_record(json.loads(line)))
        except json.JSONDecodeError as exc:
            raise GameError(f"line {lineno}: not valid JSON: {exc}") from exc
    return games


# -- contrastive export -----------------------------------------------------------------


def export_contrastive_matrix(games: Sequence[ReferenceGame]) -> list[dict]:
    """Per game, two directional k-by-k matching records (text rows vs
    image columns and the transpose); the diagonal marks the matching
    pairs."""
    records: list[dict] = []
    for game in games:
        ids = [item.tangram_id for item in game.items]
        if len(set(ids)) != len(ids):
            raise GameError(f"game {game.id!r} repeats a tangram")
        for item in game.items:
            if not item.rendered_text:
                raise GameError(f"game {game.id!r} has an item without text")
        texts = [item.rendered_text for item in game.items]
        images = [
            {
                "tangramId": item.tangram_id,
                "colorMap": {str(p): c for p, c in sorted(item.color_map.items())},
            }
            for item in game.items
        ]
        for direction in ("text-to-image", "image-to-text"):
            records.append({
                "gameId": game.id,
                "direction": direction,
                "k": game.k,
                "texts": texts,
                "images": images,
                "matchIndex": list(range(game.k)),
            })
    return records


# -- score tables and evaluation -----------------------------------------------------------


@dataclass(frozen=True)
class ScoreTable:
    entries: Mapping[tuple[str, int], float]
    provenance: str = ""

    def __post_init__(self):
        entries = dict(self.entries)
        for key, value in entries.items():
            if not np.isfinite(value):
                raise GameError(f"non-finite score for {key}")
        object.__setattr__(self, "entries", entries)


SCORE_HEADER = "gameId\titemIndex\tscore"


def dump_score_table(table: ScoreTable) -> str:
    lines = [SCORE_HEADER]
    for (game_id, index), value in sorted(table.entries.items()):
        lines.append(f"{game_id}\t{index}\t{value!r}")
    return "\n".join(lines) + "\n"


def load_score_table(lines: Iterable[str], provenance: str = "") -> ScoreTable:
    entries: dict[tuple[str, int], float] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line or line.startswith("#") or line == SCORE_HEADER:
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise GameError(f"line {lineno}: expected 3 tab-separated fields")
        try:
            entries[(fields[0], int(fields[1]))] = float(fields[2])
        except ValueError as exc:
            raise GameError(f"line {lineno}: {exc}") from exc
    return ScoreTable(entries, provenance)


@dataclass(frozen=True)
class GameResult:
    game_id: str
    predicted_index: int
    target_index: int
    correct: bool
    tie: bool
    prob_correct: float


@dataclass(frozen=True)
class EvaluationReport:
    accuracy: float
    mean_prob_correct: float
    results: tuple[GameResult, ...]
    score_scale: str  # provenance of the scores; softmax depends on it


def _game_scores(game: ReferenceGame, table: ScoreTable) -> list[float]:
    scores = []
    for index in range(game.k):
        key = (game.id, index)
        if key not in table.entries:
            raise GameError(f"score table missing entry {key}")
        scores.append(table.entries[key])
    return scores


def _softmax(scores: Sequence[float]) -> np.ndarray:
    a = np.asarray(scores, dtype=float)
    a = np.exp(a - a.max())
    return a / a.sum()


def score_games(games: Sequence[ReferenceGame], table: ScoreTable) -> EvaluationReport:
    """Argmax selection (ties to the lowest index, flagged) plus softmax
    probability of the correct item."""
    if not games:
        raise GameError("no games to score")
    results: list[GameResult] = []
    for game in games:
        scores = _game_scores(game, table)
        best = max(scores)
        predicted = scores.index(best)
        tie = scores.count(best) > 1
        prob = float(_softmax(scores)[game.target_index])
        results.append(GameResult(
            game_id=game.id,
            predicted_index=predicted,
            target_index=game.target_index,
            correct=predicted == game.target_index,
            tie=tie,
            prob_correct=prob,
        ))
    accuracy = float(Fraction(sum(r.correct for r in results), len(results)))
    mean_prob = sum(r.prob_correct for r in results) / len(results)
    return EvaluationReport(
        accuracy=accuracy,
        mean_prob_correct=mean_prob,
        results=tuple(results),
        score_scale=table.provenance or "unspecified",
    )


def ensemble_scores(tables: Sequence[ScoreTable]) -> ScoreTable:
    """Element-wise product of positive score tables with identical
    coverage."""
    if not tables:
        raise GameError("ensemble needs at least one table")
    keys = set(tables[0].entries)
    for table in tables[1:]:
        if set(table.entries) != keys:
            raise GameError("ensemble tables must cover identical (game, item) pairs")
    for table in tables:
        for key, value in table.entries.items():
            if value <= 0:
                raise GameError(f"ensemble requires positive scores, got {value} at {key}")
    entries = {key: 1.0 for key in keys}
    for table in tables:
        for key in keys:
            entries[key] *= table.entries[key]
    provenance = " * ".join(t.provenance or "unspecified" for t in tables)
    return ScoreTable(entries, provenance)


# -- part-inclusion curves ---------------------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    total_parts: int
    included_parts: int
    mean: float
    lower: float
    upper: float
    n: int


def part_curves(
    games: Sequence[ReferenceGame],
    table: ScoreTable,
    resamples: int = 1000,
    seed: int = 0,
) -> list[CurvePoint]:
    """Mean probability of the correct item grouped by
    (total parts, included parts), with bootstrap 95% bands."""
    groups: dict[tuple[int, int], list[float]] = {}
    for game in games:
        if game.total_parts is None or game.included_parts is None:
            continue
        prob = float(_softmax(_game_scores(game, table))[game.target_index])
        groups.setdefault((game.total_parts, game.included_parts), []).append(prob)
    if not groups:
        raise GameError("no augmented games with part metadata")
    points: list[CurvePoint] = []
    for (total, included) in sorted(groups):
        values = groups[(total, included)]
        ci = bootstrap_ci(values, np.mean, resamples=resamples, seed=seed)
        points.append(CurvePoint(
            total_parts=total,
            included_parts=included,
            mean=ci.estimate,
            lower=ci.lower,
            upper=ci.upper,
            n=len(values),
        ))
    return points
