"""Annotation corpus: data model, statistics, analysis sets, and splits.

An annotation names the whole shape and segments all seven pieces into
labeled parts.  Corpora are stored as line-delimited JSON, one
annotation per line.  Three overlapping analysis sets are built from a
corpus: Full (about 10 annotations everywhere), Dense (all annotations
of the densely annotated tangrams), and Dense10 (the Dense tangrams
restricted to the annotations Full uses).
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Mapping, Sequence

from .textnorm import vocab_normalize, whitespace_length

ALL_PIECES = frozenset(range(1, 8))

# Initial-collection annotations per tangram; a tangram with more than
# TARGET + 1 annotations must have gained them in a later collection.
SPARSE_TARGET = 10

DENSE_MINIMUM = 50


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Part:
    """One or more pieces under a single label ("UNKNOWN" allowed)."""

    piece_ids: frozenset[int]
    label: str

    def __post_init__(self):
        object.__setattr__(self, "piece_ids", frozenset(self.piece_ids))
        if not self.piece_ids:
            raise CorpusError("part must cover at least one piece")
        if not self.piece_ids <= ALL_PIECES:
            raise CorpusError(f"piece ids must be within 1..7, got {sorted(self.piece_ids)}")
        if not self.label:
            raise CorpusError("part label must be non-empty")


@dataclass(frozen=True)
class Annotation:
    """A whole-shape description plus a complete segmentation map."""

    tangram_id: str
    worker_id: str
    whole: str
    parts: tuple[Part, ...]
    timestamp: float
    batch: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.tangram_id:
            raise CorpusError("tangram id must be non-empty")
        if not self.worker_id:
            raise CorpusError("worker id must be non-empty")
        if not self.whole:
            raise CorpusError("whole-shape description must be non-empty")
        covered: set[int] = set()
        for part in self.parts:
            if covered & part.piece_ids:
                raise CorpusError(
                    f"parts overlap on pieces {sorted(covered & part.piece_ids)}"
                )
            covered |= part.piece_ids
        if covered != ALL_PIECES:
            raise CorpusError(
                f"parts must cover all pieces 1..7, missing {sorted(ALL_PIECES - covered)}"
            )

    def segmentation(self) -> tuple[frozenset[int], ...]:
        return tuple(p.piece_ids for p in self.parts)


@dataclass(frozen=True)
class AnalysisSet:
    name: str
    members: Mapping[str, tuple[Annotation, ...]]

    def __post_init__(self):
        frozen: dict[str, tuple[Annotation, ...]] = {}
        for tangram_id, annotations in self.members.items():
            annotations = tuple(annotations)
            seen = set()
            for a in annotations:
                if a.tangram_id != tangram_id:
                    raise CorpusError(
                        f"annotation for {a.tangram_id!r} filed under {tangram_id!r}"
                    )
                key = (a.worker_id, a.tangram_id)
                if key in seen:
                    raise CorpusError(f"duplicate annotation {key}")
                seen.add(key)
            frozen[tangram_id] = annotations
        object.__setattr__(self, "members", frozen)

    def annotations(self) -> Iterable[Annotation]:
        for annotations in self.members.values():
            yield from annotations

    def __len__(self) -> int:
        return len(self.members)


# -- line-delimited corpus format ----------------------------------------------


def _parse_timestamp(value) -> float:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        try:
            return datetime.fromisoformat(value.replace("Z", "+00:00")).timestamp()
        except ValueError as exc:
            raise CorpusError(f"unparseable timestamp {value!r}") from exc
    raise CorpusError(f"unparseable timestamp {value!r}")


def annotation_from_record(record: Mapping) -> Annotation:
    try:
        parts = tuple(
            Part(frozenset(int(i) for i in entry["pieceIds"]), str(entry["label"]))
            for entry in record["parts"]
        )
        return Annotation(
            tangram_id=str(record["tangramId"]),
            worker_id=str(record["workerId"]),
            whole=str(record["whole"]),
            parts=parts,
            timestamp=_parse_timestamp(record["timestamp"]),
            batch=int(record["batch"]) if record.get("batch") is not None else None,
        )
    except (KeyError, TypeError) as exc:
        raise CorpusError(f"malformed annotation record: {exc}") from exc


def annotation_to_record(a: Annotation) -> dict:
    record = {
        "tangramId": a.tangram_id,
        "workerId": a.worker_id,
        "whole": a.whole,
        "parts": [{"pieceIds": sorted(p.piece_ids), "label": p.label} for p in a.parts],
        "timestamp": a.timestamp,
    }
    if a.batch is not None:
        record["batch"] = a.batch
    return record


def load_corpus(lines: Iterable[str]) -> list[Annotation]:
    """Parse line-delimited annotations, rejecting duplicates by
    (workerId, tangramId)."""
    annotations: list[Annotation] = []
    seen: set[tuple[str, str]] = set()
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"line {lineno}: not valid JSON: {exc}") from exc
        try:
            a = annotation_from_record(record)
        except CorpusError as exc:
            raise CorpusError(f"line {lineno}: {exc}") from exc
        key = (a.worker_id, a.tangram_id)
        if key in seen:
            raise CorpusError(f"line {lineno}: duplicate annotation {key}")
        seen.add(key)
        annotations.append(a)
    return annotations


def dump_corpus(annotations: Iterable[Annotation]) -> str:
    return "".join(json.dumps(annotation_to_record(a)) + "\n" for a in annotations)


# -- dataset statistics ---------------------------------------------------------


@dataclass(frozen=True)
class DatasetStats:
    n_tangrams: int
    n_annotations: int
    whole_length_mean: float
    whole_length_sd: float
    part_length_mean: float
    part_length_sd: float
    vocab_whole: int
    vocab_part: int
    vocab_overall: int
    parts_per_shape_mean: float
    parts_per_shape_sd: float
    pieces_per_part_mean: float
    pieces_per_part_sd: float


def _mean_sd(values: Sequence[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    variance = sum((v - mean) ** 2 for v in values) / n
    return mean, math.sqrt(variance)


def dataset_stats(s: AnalysisSet) -> DatasetStats:
    """Description lengths, vocabulary sizes, and segmentation shape.

    Lengths count whitespace tokens; vocabularies use lowercase+stem
    without stopword removal; spreads are population standard deviations.
    """
    annotations = list(s.annotations())
    if not annotations:
        raise CorpusError("statistics need a non-empty analysis set")

    whole_lengths = [whitespace_length(a.whole) for a in annotations]
    part_lengths = [whitespace_length(p.label) for a in annotations for p in a.parts]
    parts_per_shape = [len(a.parts) for a in annotations]
    pieces_per_part = [len(p.piece_ids) for a in annotations for p in a.parts]

    whole_vocab = {t for a in annotations for t in vocab_normalize(a.whole)}
    part_vocab = {t for a in annotations for p in a.parts for t in vocab_normalize(p.label)}

    whole_mean, whole_sd = _mean_sd(whole_lengths)
    part_mean, part_sd = _mean_sd(part_lengths)
    pps_mean, pps_sd = _mean_sd(parts_per_shape)
    ppp_mean, ppp_sd = _mean_sd(pieces_per_part)
    return DatasetStats(
        n_tangrams=len(s),
        n_annotations=len(annotations),
        whole_length_mean=whole_mean,
        whole_length_sd=whole_sd,
        part_length_mean=part_mean,
        part_length_sd=part_sd,
        vocab_whole=len(whole_vocab),
        vocab_part=len(part_vocab),
        vocab_overall=len(whole_vocab | part_vocab),
        parts_per_shape_mean=pps_mean,
        parts_per_shape_sd=pps_sd,
        pieces_per_part_mean=ppp_mean,
        pieces_per_part_sd=ppp_sd,
    )


# -- learning splits -------------------------------------------------------------


@dataclass(frozen=True)
class SplitAssignment:
    train: frozenset[str]
    dev: frozenset[str]
    test: frozenset[str]
    test_dense: frozenset[str]


# Reference proportions 692:125:125 over the non-dense tangrams.
_SPLIT_WEIGHTS = (692, 125, 125)


def build_splits(tangram_ids: Iterable[str], dense_ids: Iterable[str], seed: int) -> SplitAssignment:
    """Randomly partition the non-dense tangrams into train/dev/test.

    The dense tangrams form their own held-out set.  Sizes follow the
    692:125:125 proportions (exactly those counts for 942 non-dense
    ids); deterministic for a given id set and seed.
    """
    all_ids = set(tangram_ids)
    dense = set(dense_ids)
    if not dense <= all_ids:
        raise CorpusError(f"unknown dense ids {sorted(dense - all_ids)[:5]}")

    remaining = sorted(all_ids - dense)
    rng = random.Random(seed)
    rng.shuffle(remaining)

    n = len(remaining)
    total_weight = sum(_SPLIT_WEIGHTS)
    raw = [n * w / total_weight for w in _SPLIT_WEIGHTS]
    sizes = [math.floor(r) for r in raw]
    # Largest fractional remainder takes the leftover ids; ties go to the
    # earlier split so the outcome is order-independent.
    leftovers = n - sum(sizes)
    order = sorted(range(3), key=lambda i: (-(raw[i] - sizes[i]), i))
    for i in range(leftovers):
        sizes[order[i]] += 1

    train = remaining[: sizes[0]]
    dev = remaining[sizes[0]: sizes[0] + sizes[1]]
    test = remaining[sizes[0] + sizes[1]:]
    return SplitAssignment(
        train=frozenset(train),
        dev=frozenset(dev),
        test=frozenset(test),
        test_dense=frozenset(dense),
    )


# -- analysis sets ----------------------------------------------------------------


@dataclass(frozen=True)
class AnalysisSets:
    full: AnalysisSet
    dense: AnalysisSet
    dense10: AnalysisSet


def _by_tangram(annotations: Iterable[Annotation]) -> dict[str, list[Annotation]]:
    grouped: dict[str, list[Annotation]] = {}
    for a in annotations:
        grouped.setdefault(a.tangram_id, []).append(a)
    return grouped


def _core_annotations(annotations: list[Annotation], rng: random.Random) -> list[Annotation]:
    """The initial-collection annotations of one tangram.

    Explicit batch numbers win (batch 0 = initial collection); a tangram
    annotated only in later batches gets a uniform sample of
    SPARSE_TARGET.  Without batch numbers, a tangram with more than
    SPARSE_TARGET + 1 annotations keeps its earliest SPARSE_TARGET by
    (timestamp, workerId).
    """
    if any(a.batch is not None for a in annotations):
        core = [a for a in annotations if a.batch == 0]
        if core:
            return core
        if len(annotations) < SPARSE_TARGET:
            raise CorpusError(
                f"tangram {annotations[0].tangram_id!r} has only {len(annotations)} "
                f"annotations; cannot sample {SPARSE_TARGET}"
            )
        return rng.sample(annotations, SPARSE_TARGET)
    if len(annotations) > SPARSE_TARGET + 1:
        ordered = sorted(annotations, key=lambda a: (a.timestamp, a.worker_id))
        return ordered[:SPARSE_TARGET]
    return list(annotations)


def build_analysis_sets(
    annotations: Iterable[Annotation], dense_ids: Iterable[str], seed: int
) -> AnalysisSets:
    """Construct the Full / Dense / Dense10 analysis sets."""
    grouped = _by_tangram(annotations)
    dense = set(dense_ids)
    missing = dense - grouped.keys()
    if missing:
        raise CorpusError(f"dense ids without annotations: {sorted(missing)[:5]}")

    rng = random.Random(seed)
    full_members: dict[str, tuple[Annotation, ...]] = {}
    dense_members: dict[str, tuple[Annotation, ...]] = {}
    dense10_members: dict[str, tuple[Annotation, ...]] = {}

    for tangram_id in sorted(grouped):
        anns = grouped[tangram_id]
        if tangram_id in dense:
            if len(anns) < DENSE_MINIMUM:
                raise CorpusError(
                    f"dense tangram {tangram_id!r} has {len(anns)} annotations; "
                    f"at least {DENSE_MINIMUM} required"
                )
            core = _core_annotations(anns, rng)
            dense_members[tangram_id] = tuple(anns)
            dense10_members[tangram_id] = tuple(core)
            full_members[tangram_id] = tuple(core)
        else:
            full_members[tangram_id] = tuple(anns)

    return AnalysisSets(
        full=AnalysisSet("Full", full_members),
        dense=AnalysisSet("Dense", dense_members),
        dense10=AnalysisSet("Dense10", dense10_members),
    )
