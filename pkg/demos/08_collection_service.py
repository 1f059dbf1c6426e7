"""
The collection service, end to end
==================================

The service has two jobs: hand annotation tasks to qualified workers
(balanced, capped, race-free) and run 31-screen comprehension sessions
(10 practice trials with feedback, 20 silent test trials, one hidden
catch trial).  Every accepted mutation is one line in events.jsonl;
restarting the store replays the log and lands in the same state.

This demo drives the whole protocol in-process.  `tangramkit serve
--config <dir>/config.json` exposes the same store over HTTP.
"""

import random
import tempfile
from pathlib import Path

from tangramkit.service import ServiceConfig, Store, StoreError
from tangramkit.service.demo import build_demo_data

root = Path(tempfile.mkdtemp(prefix="tangram-service-"))
config = build_demo_data(root, seed=0, n_tangrams=16, annotations_per=12,
                         games_per_condition=32)
print("demo data in", root)

store = Store(config)
print(f"loaded {len(store.tangrams)} tangrams, "
      f"{sum(len(v) for v in store.game_pool.values())} pre-built games")

# -- annotation protocol -------------------------------------------------

# only qualified workers get tasks
try:
    store.assign_task("w1")
except StoreError as error:
    print("\nunqualified worker:", error.reason)

store.qualify_worker("w1", True, survey={"language": "en"})
task = store.assign_task("w1")
print("assigned:", task)

# re-requesting returns the same open reservation instead of a second slot
assert store.assign_task("w1") == task

parts = [
    {"pieceIds": [1, 2, 3], "label": "head"},
    {"pieceIds": [4, 5, 6, 7], "label": "body"},
]
print("submitted:", store.submit_annotation("w1", task["tangramId"],
                                            "a sleepy cat", parts))

# the submit consumed the reservation, so replaying it is refused
try:
    store.submit_annotation("w1", task["tangramId"], "a sleepy cat", parts)
except StoreError as error:
    print("replayed submit:", error.reason)

# -- trial sessions -------------------------------------------------------

started = store.start_session("p1")
print(f"\nsession for p1: condition "
      f"{started['condition']['text']}+{started['condition']['image']}, "
      f"{started['trialCount']} trials")

# the payload sent to a participant never contains the answer
trial = store.next_trial("p1")
print("first trial keys:", sorted(trial))

# play the whole session: always pick item 0
rng = random.Random(0)
feedback = None
while True:
    trial = store.next_trial("p1")
    if trial.get("done"):
        print("session done, excluded:", trial["excluded"])
        break
    feedback = store.submit_response("p1", trial["index"], 0)
    if trial["index"] == 0:
        print("practice feedback:", {k: feedback[k] for k in
                                     ("correct", "correctIndex")})

# exports are plain text with a comment header
export = store.export_trials()
print("\ntrials export starts:", export.splitlines()[0])

# the event log is the only state: replaying it rebuilds everything
store.close()
replayed = Store(config)
assert replayed.export_trials() == export
assert replayed.export_annotations().count("\n") == 2  # header + 1 record
print("replay from events.jsonl reproduces the state: True")
replayed.close()
