import dataclasses
import json
import shutil
from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient

from tangramkit.geometry import canonical_square, serialize_composition
from tangramkit.service import ServiceConfig, Store, StoreError, create_app
from tangramkit.service.demo import build_demo_data
from tangramkit.service.store import (
    ANNOTATION_EXPORT_HEADER,
    CONDITIONS,
    TRIAL_EXPORT_HEADER,
)


@pytest.fixture(scope="module")
def template_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("template")
    build_demo_data(root, seed=0, n_tangrams=16, annotations_per=12,
                    games_per_condition=32)
    return root


@pytest.fixture
def config(template_dir, tmp_path):
    dst = tmp_path / "data"
    shutil.copytree(template_dir, dst)
    base = ServiceConfig.from_file(template_dir / "config.json")
    return dataclasses.replace(
        base,
        data_dir=dst,
        compositions_file=dst / "compositions.jsonl",
        games_file=dst / "games.jsonl",
    )


@pytest.fixture
def store(config):
    s = Store(config)
    yield s
    s.close()


def some_parts(store: Store) -> list[dict]:
    return [
        {"pieceIds": [1, 2, 3], "label": "head"},
        {"pieceIds": [4, 5, 6, 7], "label": "body"},
    ]


def run_session(store: Store, participant_id: str, fail_catch: bool = False) -> dict:
    """Answer every trial correctly, optionally missing the catch."""
    store.start_session(participant_id)
    session = store.sessions[participant_id]
    last = {}
    for index, trial in enumerate(session.trials):
        chosen = trial["targetIndex"]
        if fail_catch and trial["isCatch"]:
            chosen = (chosen + 1) % trial["k"]
        last = store.submit_response(participant_id, index, chosen)
    return last


class TestAnnotationProtocol:
    def test_qualify_assign_submit(self, store):
        store.qualify_worker("w1", True)
        task = store.assign_task("w1")
        assert task["tangramId"] in store.tangrams
        assert task["stimulusUrl"] == f"/stimuli/{task['tangramId']}.svg"
        result = store.submit_annotation(
            "w1", task["tangramId"], "a running dog", some_parts(store))
        assert result == {"accepted": True}
        assert store.annotation_counts[task["tangramId"]] == 1

    def test_unqualified_worker_rejected(self, store):
        with pytest.raises(StoreError) as info:
            store.assign_task("nobody")
        assert info.value.status == 403
        store.qualify_worker("w1", False)
        with pytest.raises(StoreError):
            store.assign_task("w1")

    def test_re_request_returns_open_reservation(self, store):
        store.qualify_worker("w1", True)
        first = store.assign_task("w1")
        again = store.assign_task("w1")
        assert again == first
        assert sum(store.reservation_counts.values()) == 1

    def test_submit_without_reservation_rejected(self, store):
        store.qualify_worker("w1", True)
        task = store.assign_task("w1")
        wrong = next(t for t in store.tangrams if t != task["tangramId"])
        with pytest.raises(StoreError) as info:
            store.submit_annotation("w1", wrong, "a dog", some_parts(store))
        assert info.value.status == 409

    def test_duplicate_submission_rejected(self, store):
        store.qualify_worker("w1", True)
        task = store.assign_task("w1")
        store.submit_annotation("w1", task["tangramId"], "a dog", some_parts(store))
        # the reservation was consumed; a replayed submit is refused
        with pytest.raises(StoreError) as info:
            store.submit_annotation("w1", task["tangramId"], "a dog", some_parts(store))
        assert info.value.status == 409

    def test_invalid_segmentation_rejected(self, store):
        store.qualify_worker("w1", True)
        task = store.assign_task("w1")
        with pytest.raises(StoreError) as info:
            store.submit_annotation(
                "w1", task["tangramId"], "a dog",
                [{"pieceIds": [1, 2], "label": "head"}])
        assert info.value.status == 422

    def test_worker_cap(self, config):
        store = Store(dataclasses.replace(config, worker_cap=2))
        store.qualify_worker("w1", True)
        for _ in range(2):
            task = store.assign_task("w1")
            store.submit_annotation("w1", task["tangramId"], "a dog", some_parts(store))
        with pytest.raises(StoreError) as info:
            store.assign_task("w1")
        assert info.value.status == 403
        assert "cap" in info.value.reason
        store.close()

    def test_fewest_first_balancing(self, store):
        n = len(store.tangrams)
        for i in range(n):
            store.qualify_worker(f"w{i}", True)
        assigned = {store.assign_task(f"w{i}")["tangramId"] for i in range(n)}
        # with every tangram at load 0, n workers spread over all n tangrams
        assert assigned == set(store.tangrams)

    def test_assign_returns_none_when_all_at_target(self, config):
        store = Store(dataclasses.replace(
            config, sparse_target=1, dense_target=1, dense_ids=frozenset()))
        n = len(store.tangrams)
        for i in range(n + 1):
            store.qualify_worker(f"w{i}", True)
        for i in range(n):
            task = store.assign_task(f"w{i}")
            store.submit_annotation(
                f"w{i}", task["tangramId"], f"a dog {i}", some_parts(store))
        assert store.assign_task(f"w{n}") is None
        store.close()

    def test_batch_marks_sparse_overflow(self, config):
        # a dense tangram keeps accepting past the sparse target; the
        # overflow annotations are tagged batch 1
        tangram_id = "t000"
        store = Store(dataclasses.replace(
            config, sparse_target=2, dense_target=4,
            dense_ids=frozenset({tangram_id})))
        for i in range(4):
            worker = f"w{i}"
            store.qualify_worker(worker, True)
            while True:
                task = store.assign_task(worker)
                store.submit_annotation(
                    worker, task["tangramId"], f"a dog {i}", some_parts(store))
                if task["tangramId"] == tangram_id:
                    break
        batches = [a.batch for a in store.annotations if a.tangram_id == tangram_id]
        assert batches == [0, 0, 1, 1]
        store.close()


class TestConcurrency:
    def test_assignment_is_atomic_under_contention(self, tmp_path):
        # one tangram, ten slots, forty workers racing
        square = canonical_square("solo")
        line = json.dumps(json.loads(serialize_composition(square)),
                          separators=(",", ":"))
        (tmp_path / "compositions.jsonl").write_text(line + "\n")
        (tmp_path / "games.jsonl").write_text("")
        config = ServiceConfig(
            data_dir=tmp_path,
            compositions_file=tmp_path / "compositions.jsonl",
            games_file=tmp_path / "games.jsonl",
            sparse_target=10,
        )
        store = Store(config)
        workers = [f"w{i:03d}" for i in range(40)]
        for w in workers:
            store.qualify_worker(w, True)
        with ThreadPoolExecutor(max_workers=16) as pool:
            tasks = list(pool.map(store.assign_task, workers))
        granted = [w for w, t in zip(workers, tasks) if t is not None]
        assert len(granted) == 10
        assert store.reservation_counts["solo"] == 10
        for w in granted:
            store.submit_annotation(w, "solo", f"a dog {w}", some_parts(store))
        assert store.annotation_counts["solo"] == 10
        assert store.assign_task("w039" if "w039" not in granted else granted[0]) is None
        store.close()


class TestReplay:
    def test_restart_rebuilds_identical_state(self, config):
        store = Store(config)
        store.qualify_worker("w1", True)
        task = store.assign_task("w1")
        store.submit_annotation("w1", task["tangramId"], "a dog", some_parts(store))
        store.qualify_worker("w2", True)
        store.assign_task("w2")  # left open
        run_session(store, "p1", fail_catch=True)
        store.start_session("p2")
        store.submit_response("p2", 0, 0)
        annotations = store.export_annotations()
        trials = store.export_trials()
        reservations = dict(store.reservations)
        store.close()

        replayed = Store(config)
        assert replayed.export_annotations() == annotations
        assert replayed.export_trials() == trials
        assert replayed.reservations == reservations
        assert replayed.sessions["p1"].excluded
        assert len(replayed.sessions["p2"].responses) == 1
        replayed.close()


class TestTrialSessions:
    def test_session_shape(self, store):
        started = store.start_session("p1")
        assert started["practiceCount"] == 10
        assert started["testCount"] == 21
        assert started["trialCount"] == 31
        session = store.sessions["p1"]
        phases = [t["phase"] for t in session.trials]
        assert phases == ["practice"] * 10 + ["test"] * 21
        assert sum(t["isCatch"] for t in session.trials) == 1

    def test_condition_deterministic_per_participant(self, config, tmp_path):
        store_a = Store(config)
        first = store_a.start_session("participant-7")
        trials_a = store_a.sessions["participant-7"].trials
        store_a.close()

        dst = tmp_path / "again"
        shutil.copytree(config.data_dir, dst)
        (dst / "events.jsonl").unlink()
        store_b = Store(dataclasses.replace(
            config, data_dir=dst, compositions_file=dst / "compositions.jsonl",
            games_file=dst / "games.jsonl"))
        second = store_b.start_session("participant-7")
        assert second == first
        assert store_b.sessions["participant-7"].trials == trials_a
        store_b.close()

    def test_all_conditions_reachable(self, store):
        names = set()
        for i in range(40):
            store.start_session(f"p{i}")
            names.add(store.sessions[f"p{i}"].condition.name)
        assert names == {c.name for c in CONDITIONS}

    def test_duplicate_session_rejected(self, store):
        store.start_session("p1")
        with pytest.raises(StoreError) as info:
            store.start_session("p1")
        assert info.value.status == 409

    def test_practice_games_fixed_across_participants(self, store):
        # participants in the same condition share the ten practice trials
        by_condition = {}
        for i in range(20):
            pid = f"p{i}"
            store.start_session(pid)
            session = store.sessions[pid]
            practice = json.dumps(session.trials[:10])
            by_condition.setdefault(session.condition.name, set()).add(practice)
        for variants in by_condition.values():
            assert len(variants) == 1

    def test_next_trial_hides_answers(self, store):
        store.start_session("p1")
        payload = store.next_trial("p1")
        assert set(payload) == {
            "done", "index", "phase", "description", "descriptionSpans",
            "items", "k",
        }
        blob = json.dumps(payload)
        assert "targetIndex" not in blob
        assert "isCatch" not in blob
        assert "gameId" not in blob
        for item in payload["items"]:
            assert set(item) == {"tangramId", "colorMap"}

    def test_unknown_participant_404(self, store):
        with pytest.raises(StoreError) as info:
            store.next_trial("ghost")
        assert info.value.status == 404

    def test_practice_feedback_and_silent_test(self, store):
        store.start_session("p1")
        session = store.sessions["p1"]
        feedback = store.submit_response("p1", 0, session.trials[0]["targetIndex"])
        assert feedback["correct"] is True
        assert feedback["correctIndex"] == session.trials[0]["targetIndex"]
        for index in range(1, 10):
            store.submit_response("p1", index, 0)
        silent = store.submit_response("p1", 10, 0)
        assert "correct" not in silent and "correctIndex" not in silent
        assert silent["remaining"] == 20

    def test_responses_must_be_in_order(self, store):
        store.start_session("p1")
        with pytest.raises(StoreError, match="in order"):
            store.submit_response("p1", 5, 0)
        store.submit_response("p1", 0, 0)
        with pytest.raises(StoreError, match="already answered"):
            store.submit_response("p1", 0, 1)

    def test_chosen_index_validated(self, store):
        store.start_session("p1")
        with pytest.raises(StoreError) as info:
            store.submit_response("p1", 0, 99)
        assert info.value.status == 422

    def test_catch_failure_excludes(self, store):
        run_session(store, "good")
        run_session(store, "bad", fail_catch=True)
        assert store.next_trial("good") == {"done": True, "excluded": False}
        assert store.next_trial("bad") == {"done": True, "excluded": True}

    def test_exports(self, store):
        store.qualify_worker("w1", True)
        task = store.assign_task("w1")
        store.submit_annotation("w1", task["tangramId"], "a dog", some_parts(store))
        run_session(store, "p1", fail_catch=True)

        annotations = store.export_annotations()
        assert annotations.startswith(ANNOTATION_EXPORT_HEADER + "\n")
        record = json.loads(annotations.splitlines()[1])
        assert record["workerId"] == "w1"

        trials = store.export_trials()
        assert trials.startswith(TRIAL_EXPORT_HEADER + "\n")
        session = json.loads(trials.splitlines()[1])
        assert session["participantId"] == "p1"
        assert session["excluded"] is True
        assert session["complete"] is True
        assert len(session["responses"]) == 31
        catch = [r for r in session["responses"] if r["isCatch"]]
        assert len(catch) == 1 and catch[0]["correct"] is False


class TestHttpApi:
    @pytest.fixture
    def client(self, store):
        app = create_app(store=store)
        with TestClient(app) as client:
            yield client

    def test_error_shape(self, client):
        response = client.get("/api/annotation-task", params={"workerId": "ghost"})
        assert response.status_code == 403
        assert response.json() == {"error": "worker is not qualified"}

    def test_annotation_flow(self, client):
        assert client.post(
            "/api/admin/qualify", json={"workerId": "w1", "qualified": True},
        ).status_code == 200
        task = client.get("/api/annotation-task", params={"workerId": "w1"}).json()
        assert task["tangramId"]

        svg = client.get(task["stimulusUrl"])
        assert svg.status_code == 200
        assert svg.headers["content-type"].startswith("image/svg+xml")
        assert 'id="piece-1"' in svg.text

        missing = client.post("/api/annotations", json={"workerId": "w1"})
        assert missing.status_code == 422
        assert "missing field" in missing.json()["error"]

        accepted = client.post("/api/annotations", json={
            "workerId": "w1",
            "tangramId": task["tangramId"],
            "whole": "a sleepy cat",
            "parts": [
                {"pieceIds": [1, 2, 3], "label": "head"},
                {"pieceIds": [4, 5, 6, 7], "label": "body"},
            ],
        })
        assert accepted.status_code == 200
        assert accepted.json() == {"accepted": True}

    def test_stimulus_validation(self, client, store):
        tangram_id = sorted(store.tangrams)[0]
        ok = client.get(f"/stimuli/{tangram_id}.svg", params={"condition": "color"})
        assert ok.status_code == 200
        assert client.get(f"/stimuli/{tangram_id}.svg",
                          params={"condition": "sepia"}).status_code == 404
        assert client.get("/stimuli/ghost.svg").status_code == 404

    def test_trial_flow(self, client):
        started = client.post("/api/trial-session", json={"participantId": "p1"})
        assert started.status_code == 200
        assert started.json()["trialCount"] == 31

        trial = client.get("/api/trial-session/p1/next").json()
        assert trial["done"] is False
        assert "targetIndex" not in trial

        bad = client.post("/api/trial-session/p1/response",
                          json={"trialIndex": "0", "chosenItemIndex": 0})
        assert bad.status_code == 422

        feedback = client.post("/api/trial-session/p1/response",
                               json={"trialIndex": 0, "chosenItemIndex": 0}).json()
        assert feedback["accepted"] is True
        assert "correct" in feedback

        replay = client.post("/api/trial-session/p1/response",
                             json={"trialIndex": 0, "chosenItemIndex": 0})
        assert replay.status_code == 409

    def test_exports_and_unknown_kind(self, client):
        annotations = client.get("/api/export/annotations")
        assert annotations.status_code == 200
        assert annotations.text.startswith(ANNOTATION_EXPORT_HEADER)
        trials = client.get("/api/export/trials")
        assert trials.text.startswith(TRIAL_EXPORT_HEADER)
        assert client.get("/api/export/everything").status_code == 404
