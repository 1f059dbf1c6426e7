"""Service configuration: one JSON file naming the data directory,
stimulus and game inputs, and the collection targets."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: Path
    compositions_file: Path
    games_file: Path
    dense_ids: frozenset[str] = frozenset()
    sparse_target: int = 10
    dense_target: int = 50
    worker_cap: int = 200
    k: int = 10
    seed: int = 0
    catch_tangram_id: str = "square"
    practice_trials: int = 10
    test_trials: int = 20

    def target_for(self, tangram_id: str) -> int:
        return self.dense_target if tangram_id in self.dense_ids else self.sparse_target

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        path = Path(path)
        with open(path) as handle:
            raw = json.load(handle)
        base = path.parent

        def resolve(value: str) -> Path:
            p = Path(value)
            return p if p.is_absolute() else base / p

        return cls(
            data_dir=resolve(raw["dataDir"]),
            compositions_file=resolve(raw["compositionsFile"]),
            games_file=resolve(raw["gamesFile"]),
            dense_ids=frozenset(raw.get("denseIds", [])),
            sparse_target=int(raw.get("sparseTarget", 10)),
            dense_target=int(raw.get("denseTarget", 50)),
            worker_cap=int(raw.get("workerCap", 200)),
            k=int(raw.get("k", 10)),
            seed=int(raw.get("seed", 0)),
            catch_tangram_id=str(raw.get("catchTangramId", "square")),
            practice_trials=int(raw.get("practiceTrials", 10)),
            test_trials=int(raw.get("testTrials", 20)),
        )

    def to_file(self, path: str | Path) -> None:
        raw = {
            "dataDir": str(self.data_dir),
            "compositionsFile": str(self.compositions_file),
            "gamesFile": str(self.games_file),
            "denseIds": sorted(self.dense_ids),
            "sparseTarget": self.sparse_target,
            "denseTarget": self.dense_target,
            "workerCap": self.worker_cap,
            "k": self.k,
            "seed": self.seed,
            "catchTangramId": self.catch_tangram_id,
            "practiceTrials": self.practice_trials,
            "testTrials": self.test_trials,
        }
        Path(path).write_text(json.dumps(raw, indent=2) + "\n")
