"""Append-only store and protocol logic for the collection service.

Every accepted mutation is one JSON line in events.jsonl; the in-memory
index is rebuilt by replaying the log, so the file is the only source
of truth.  All mutations are serialized through a single lock, making
task assignment an atomic check-and-reserve.
"""

from __future__ import annotations

import json
import random
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from ..corpus import Annotation, CorpusError, Part, annotation_to_record, annotation_from_record
from ..geometry import Tangram, parse_composition
from ..refgames import Condition, ReferenceGame, load_games
from .config import ServiceConfig

CONDITIONS = (
    Condition("whole", "black"),
    Condition("whole", "color"),
    Condition("parts", "black"),
    Condition("parts", "color"),
)

ANNOTATION_EXPORT_HEADER = "# tangram annotations: one JSON record per line"
TRIAL_EXPORT_HEADER = "# trial sessions: one JSON record per line"


class StoreError(Exception):
    def __init__(self, reason: str, status: int = 400):
        super().__init__(reason)
        self.reason = reason
        self.status = status


@dataclass
class WorkerState:
    worker_id: str
    qualified: bool = False
    annotated: set[str] = field(default_factory=set)
    survey: dict | None = None


@dataclass
class SessionState:
    participant_id: str
    condition: Condition
    trials: list[dict]
    responses: list[dict] = field(default_factory=list)
    excluded: bool = False

    @property
    def done(self) -> bool:
        return len(self.responses) >= len(self.trials)


class Store:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self._lock = threading.Lock()
        self._rng = random.Random(config.seed)

        self.tangrams: dict[str, Tangram] = {}
        with open(config.compositions_file) as handle:
            for line in handle:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                tangram = parse_composition(line)
                self.tangrams[tangram.id] = tangram

        self.game_pool: dict[str, list[ReferenceGame]] = {c.name: [] for c in CONDITIONS}
        with open(config.games_file) as handle:
            for game in load_games(handle):
                self.game_pool.setdefault(game.condition.name, []).append(game)
        for games in self.game_pool.values():
            games.sort(key=lambda g: g.id)

        self.workers: dict[str, WorkerState] = {}
        self.annotations: list[Annotation] = []
        self.annotation_counts: dict[str, int] = {t: 0 for t in self.tangrams}
        self.reservations: dict[str, str] = {}  # worker -> tangram
        self.reservation_counts: dict[str, int] = {t: 0 for t in self.tangrams}
        self.sessions: dict[str, SessionState] = {}

        config.data_dir.mkdir(parents=True, exist_ok=True)
        self._log_path = config.data_dir / "events.jsonl"
        if self._log_path.exists():
            with open(self._log_path) as handle:
                for line in handle:
                    line = line.strip()
                    if line:
                        self._apply(json.loads(line))
        self._log = open(self._log_path, "a")

    def close(self) -> None:
        with self._lock:
            self._log.close()

    # -- event log ---------------------------------------------------------

    def _append(self, event: dict) -> None:
        self._log.write(json.dumps(event) + "\n")
        self._log.flush()
        self._apply(event)

    def _apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "qualify":
            worker = self.workers.setdefault(event["workerId"], WorkerState(event["workerId"]))
            worker.qualified = bool(event["qualified"])
            if event.get("survey") is not None:
                worker.survey = event["survey"]
        elif kind == "assign":
            worker_id, tangram_id = event["workerId"], event["tangramId"]
            self.reservations[worker_id] = tangram_id
            self.reservation_counts[tangram_id] += 1
        elif kind == "annotation":
            annotation = annotation_from_record(event["record"])
            self.annotations.append(annotation)
            self.annotation_counts[annotation.tangram_id] += 1
            worker = self.workers.setdefault(
                annotation.worker_id, WorkerState(annotation.worker_id)
            )
            worker.annotated.add(annotation.tangram_id)
            if self.reservations.get(annotation.worker_id) == annotation.tangram_id:
                del self.reservations[annotation.worker_id]
                self.reservation_counts[annotation.tangram_id] -= 1
        elif kind == "session":
            condition = Condition(**event["condition"])
            self.sessions[event["participantId"]] = SessionState(
                participant_id=event["participantId"],
                condition=condition,
                trials=event["trials"],
            )
        elif kind == "response":
            session = self.sessions[event["participantId"]]
            session.responses.append({
                "trialIndex": event["trialIndex"],
                "phase": event["phase"],
                "isCatch": event["isCatch"],
                "chosenItemIndex": event["chosenItemIndex"],
                "targetIndex": event["targetIndex"],
                "correct": event["correct"],
            })
            if event["excludedAfter"]:
                session.excluded = True
        else:
            raise StoreError(f"unknown event type {kind!r}", 500)

    # -- annotation protocol -------------------------------------------------

    def qualify_worker(self, worker_id: str, qualified: bool, survey: dict | None = None) -> dict:
        if not worker_id:
            raise StoreError("workerId required", 422)
        with self._lock:
            self._append({
                "type": "qualify", "workerId": worker_id,
                "qualified": qualified, "survey": survey, "ts": time.time(),
            })
            return {"workerId": worker_id, "qualified": qualified}

    def assign_task(self, worker_id: str) -> dict | None:
        """Atomic check-and-reserve; re-requesting returns the open
        reservation unchanged.  Returns None when no tangram is below
        target."""
        with self._lock:
            worker = self.workers.get(worker_id)
            if worker is None or not worker.qualified:
                raise StoreError("worker is not qualified", 403)
            if worker_id in self.reservations:
                tangram_id = self.reservations[worker_id]
                return {"tangramId": tangram_id, "stimulusUrl": f"/stimuli/{tangram_id}.svg"}
            if len(worker.annotated) >= self.config.worker_cap:
                raise StoreError(
                    f"worker reached the {self.config.worker_cap}-tangram cap", 403
                )

            def load(t: str) -> int:
                return self.annotation_counts[t] + self.reservation_counts[t]

            eligible = [
                t for t in self.tangrams
                if t not in worker.annotated and load(t) < self.config.target_for(t)
            ]
            if not eligible:
                return None
            lightest = min(load(t) for t in eligible)
            pick = self._rng.choice(sorted(t for t in eligible if load(t) == lightest))
            self._append({
                "type": "assign", "workerId": worker_id, "tangramId": pick,
                "ts": time.time(),
            })
            return {"tangramId": pick, "stimulusUrl": f"/stimuli/{pick}.svg"}

    def submit_annotation(self, worker_id: str, tangram_id: str, whole: str, parts: list) -> dict:
        with self._lock:
            if self.reservations.get(worker_id) != tangram_id:
                raise StoreError("task was not assigned to this worker", 409)
            if any(
                a.worker_id == worker_id and a.tangram_id == tangram_id
                for a in self.annotations
            ):
                raise StoreError("duplicate submission for this worker and tangram", 409)
            try:
                annotation = Annotation(
                    tangram_id=tangram_id,
                    worker_id=worker_id,
                    whole=whole,
                    parts=tuple(
                        Part(frozenset(int(i) for i in entry["pieceIds"]), str(entry["label"]))
                        for entry in parts
                    ),
                    timestamp=time.time(),
                    batch=0 if self.annotation_counts[tangram_id] < self.config.sparse_target else 1,
                )
            except (CorpusError, KeyError, TypeError, ValueError) as exc:
                raise StoreError(f"invalid annotation: {exc}", 422) from exc
            self._append({
                "type": "annotation", "record": annotation_to_record(annotation),
                "ts": annotation.timestamp,
            })
            return {"accepted": True}

    # -- trial protocol ----------------------------------------------------------

    def _trial_from_game(self, game: ReferenceGame, phase: str) -> dict:
        return {
            "phase": phase,
            "isCatch": False,
            "gameId": game.id,
            "description": game.target.rendered_text,
            "descriptionSpans": [[t, c] for t, c in game.target.text_spans],
            "items": [
                {
                    "tangramId": item.tangram_id,
                    "colorMap": {str(p): c for p, c in sorted(item.color_map.items())},
                }
                for item in game.items
            ],
            "targetIndex": game.target_index,
            "k": game.k,
        }

    def _catch_trial(self, rng: random.Random) -> dict:
        catch_id = self.config.catch_tangram_id
        if catch_id not in self.tangrams:
            raise StoreError(f"catch tangram {catch_id!r} not in stimulus set", 500)
        others = sorted(t for t in self.tangrams if t != catch_id)
        if len(others) < self.config.k - 1:
            raise StoreError("not enough tangrams for the catch trial", 500)
        ids = rng.sample(others, self.config.k - 1)
        target_index = rng.randrange(self.config.k)
        ids.insert(target_index, catch_id)
        black = {str(p): "black" for p in range(1, 8)}
        return {
            "phase": "test",
            "isCatch": True,
            "gameId": None,
            "description": "square",
            "descriptionSpans": [["square", None]],
            "items": [{"tangramId": t, "colorMap": dict(black)} for t in ids],
            "targetIndex": target_index,
            "k": self.config.k,
        }

    def start_session(self, participant_id: str) -> dict:
        if not participant_id:
            raise StoreError("participantId required", 422)
        with self._lock:
            if participant_id in self.sessions:
                raise StoreError("session already exists for this participant", 409)
            rng = random.Random(f"{self.config.seed}:{participant_id}")
            condition = rng.choice(CONDITIONS)

            pool = self.game_pool.get(condition.name, [])
            n_practice = self.config.practice_trials
            n_test = self.config.test_trials
            practice_games = pool[:n_practice]  # fixed set, same for everyone
            rest = pool[n_practice:]
            if len(practice_games) < n_practice or len(rest) < n_test:
                raise StoreError(
                    f"game pool for condition {condition.name} is exhausted", 409
                )
            test_games = rng.sample(rest, n_test)

            trials = [self._trial_from_game(g, "practice") for g in practice_games]
            test_trials = [self._trial_from_game(g, "test") for g in test_games]
            test_trials.insert(rng.randrange(len(test_trials) + 1), self._catch_trial(rng))
            trials.extend(test_trials)

            self._append({
                "type": "session",
                "participantId": participant_id,
                "condition": {
                    "text": condition.text,
                    "image": condition.image,
                    "augmented": condition.augmented,
                },
                "trials": trials,
                "ts": time.time(),
            })
            return {
                "participantId": participant_id,
                "condition": {"text": condition.text, "image": condition.image},
                "practiceCount": n_practice,
                "testCount": len(test_trials),
                "trialCount": len(trials),
            }

    def next_trial(self, participant_id: str) -> dict:
        with self._lock:
            session = self.sessions.get(participant_id)
            if session is None:
                raise StoreError("no session for this participant", 404)
            index = len(session.responses)
            if index >= len(session.trials):
                return {"done": True, "excluded": session.excluded}
            trial = session.trials[index]
            # Correctness stays server-side: no target index, no catch
            # marker, no game id (ids embed the target tangram).
            return {
                "done": False,
                "index": index,
                "phase": trial["phase"],
                "description": trial["description"],
                "descriptionSpans": trial["descriptionSpans"],
                "items": trial["items"],
                "k": trial["k"],
            }

    def submit_response(self, participant_id: str, trial_index: int, chosen: int) -> dict:
        with self._lock:
            session = self.sessions.get(participant_id)
            if session is None:
                raise StoreError("no session for this participant", 404)
            expected = len(session.responses)
            if trial_index < expected:
                raise StoreError("trial already answered", 409)
            if trial_index > expected or trial_index >= len(session.trials):
                raise StoreError("responses must arrive in order", 409)
            trial = session.trials[trial_index]
            if not 0 <= chosen < trial["k"]:
                raise StoreError("chosen item index out of range", 422)
            correct = chosen == trial["targetIndex"]
            excluded_after = session.excluded or (trial["isCatch"] and not correct)
            self._append({
                "type": "response",
                "participantId": participant_id,
                "trialIndex": trial_index,
                "phase": trial["phase"],
                "isCatch": trial["isCatch"],
                "chosenItemIndex": chosen,
                "targetIndex": trial["targetIndex"],
                "correct": correct,
                "excludedAfter": excluded_after,
                "ts": time.time(),
            })
            feedback: dict = {
                "phase": trial["phase"],
                "accepted": True,
                "remaining": len(session.trials) - len(session.responses),
            }
            if trial["phase"] == "practice":
                feedback["correct"] = correct
                feedback["correctIndex"] = trial["targetIndex"]
            return feedback

    # -- exports -------------------------------------------------------------------

    def export_annotations(self) -> str:
        with self._lock:
            lines = [ANNOTATION_EXPORT_HEADER]
            lines.extend(json.dumps(annotation_to_record(a)) for a in self.annotations)
            return "\n".join(lines) + "\n"

    def export_trials(self) -> str:
        with self._lock:
            lines = [TRIAL_EXPORT_HEADER]
            for participant_id in sorted(self.sessions):
                session = self.sessions[participant_id]
                lines.append(json.dumps({
                    "participantId": participant_id,
                    "condition": {
                        "text": session.condition.text,
                        "image": session.condition.image,
                    },
                    "excluded": session.excluded,
                    "complete": session.done,
                    "responses": session.responses,
                }))
            return "\n".join(lines) + "\n"
