"""Runtime configuration manager for learner, training and generation defaults."""

from __future__ import annotations

import copy
import json
import threading
from pathlib import Path
from typing import Any

from alclearn.config import (
    EmbeddingConfig,
    OCEL_DEFAULT_WEIGHTS,
    HeuristicParams,
    LPGenConfig,
    SearchConfig,
    TrainingConfig,
)
from alclearn.errors import ConfigurationError

DEFAULT_RUNTIME_CONFIG: dict[str, dict[str, Any]] = {
    "heuristics": {"lam": 0.5, "beta": 0.02, "t": 2.0},
    "ocel_heuristics": dict(OCEL_DEFAULT_WEIGHTS),
    "search": {
        "max_runtime_seconds": 3.0,
        "max_expressions_tested": 100000,
        "quality_metric": "f_measure",
        "refinement_max_length": 12,
    },
    "training": {
        "episodes": 100,
        "steps_per_episode": 10,
        "update_every": 5,
        "gamma": 0.99,
        "epsilon_start": 1.0,
        "epsilon_decay": 0.01,
        "epsilon_min": 0.01,
        "learning_rate": 0.01,
        "batch_size": 512,
        "replay_capacity": 8192,
        "max_reward": 10.0,
        "refinement_max_length": 12,
        "hidden": 256,
    },
    "lpgen": {"n": 20, "m": 5, "kappa": 2, "maxlen": 5, "size_constraint": None},
    "embeddings": {"dimension": 32, "noise_scale": 0.01, "seed": 0},
}


def _drop_unset(overrides: dict[str, Any]) -> dict[str, Any]:
    return {key: value for key, value in overrides.items() if value is not None}


class ConfigManager:
    """Loads and persists the runtime defaults document."""

    def __init__(self, path: Path) -> None:
        self._path = path
        self._lock = threading.Lock()
        self._config = self._load()

    @property
    def path(self) -> Path:
        return self._path

    def _load(self) -> dict[str, dict[str, Any]]:
        self._path.parent.mkdir(parents=True, exist_ok=True)
        if not self._path.exists():
            self._write(DEFAULT_RUNTIME_CONFIG)
        try:
            with self._path.open("r", encoding="utf-8") as file:
                data = json.load(file)
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read runtime config {self._path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigurationError(f"{self._path}: runtime config must be an object")

        merged = copy.deepcopy(DEFAULT_RUNTIME_CONFIG)
        for section, values in data.items():
            if section not in merged or not isinstance(values, dict):
                raise ConfigurationError(f"{self._path}: unknown section {section!r}")
            unknown = sorted(set(values) - set(merged[section]))
            if unknown:
                raise ConfigurationError(f"{self._path}: unknown keys in {section}: {unknown}")
            merged[section].update(values)
        return merged

    def _write(self, data: dict[str, Any]) -> None:
        self._path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")

    def get_runtime_config(self) -> dict[str, dict[str, Any]]:
        with self._lock:
            return copy.deepcopy(self._config)

    def update_runtime_config(self, section: str, **values: Any) -> dict[str, dict[str, Any]]:
        with self._lock:
            if section not in self._config:
                raise ConfigurationError(f"unknown section {section!r}")
            unknown = sorted(set(values) - set(self._config[section]))
            if unknown:
                raise ConfigurationError(f"unknown keys in {section}: {unknown}")
            updated = copy.deepcopy(self._config)
            updated[section].update(_drop_unset(values))
            self._write(updated)
            self._config = updated
            return copy.deepcopy(updated)

    def _section(self, name: str, overrides: dict[str, Any]) -> dict[str, Any]:
        with self._lock:
            values = dict(self._config[name])
        values.update(_drop_unset(overrides))
        return values

    def heuristic_params(self, **overrides: Any) -> HeuristicParams:
        return HeuristicParams(**self._section("heuristics", overrides))

    def ocel_params(self, **overrides: Any) -> HeuristicParams:
        """Weights of the OCEL scorer; validated for OCEL when the scorer is built."""
        return HeuristicParams(**self._section("ocel_heuristics", overrides))

    def search_config(self, **overrides: Any) -> SearchConfig:
        heuristic_overrides = overrides.pop("heuristic_params", None)
        ocel_overrides = overrides.pop("ocel_params", None)
        values = self._section("search", overrides)
        return SearchConfig(
            heuristic_params=heuristic_overrides or self.heuristic_params(),
            ocel_params=ocel_overrides or self.ocel_params(),
            **values,
        )

    def training_config(self, **overrides: Any) -> TrainingConfig:
        return TrainingConfig(**self._section("training", overrides))

    def lpgen_config(self, **overrides: Any) -> LPGenConfig:
        values = self._section("lpgen", overrides)
        if values.get("size_constraint") is not None:
            values["size_constraint"] = tuple(values["size_constraint"])
        return LPGenConfig(**values)

    def embedding_config(self, **overrides: Any) -> EmbeddingConfig:
        return EmbeddingConfig(**self._section("embeddings", overrides))
