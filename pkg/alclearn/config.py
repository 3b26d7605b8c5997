"""Application configuration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from alclearn.errors import ConfigurationError
from alclearn.types import QUALITY_METRICS, QualityMetric


@dataclass(slots=True)
class HeuristicParams:
    """Weights of the OCEL/CELOE heuristics and the CELOE accuracy."""

    lam: float = 0.5
    beta: float = 0.02
    t: float = 2.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.lam) or self.lam < 0:
            raise ConfigurationError(f"lambda must be >= 0, got {self.lam}")
        if not math.isfinite(self.beta) or self.beta <= 0:
            raise ConfigurationError(f"beta must be > 0, got {self.beta}")
        if not math.isfinite(self.t) or self.t <= 1:
            raise ConfigurationError(f"t must be > 1, got {self.t}")

    def validate_for_ocel(self) -> None:
        if not self.beta > self.lam >= 0:
            raise ConfigurationError(f"OCEL needs beta > lambda >= 0, got beta={self.beta} lambda={self.lam}")


OCEL_DEFAULT_WEIGHTS: dict[str, float] = {"lam": 0.01, "beta": 0.02, "t": 2.0}


@dataclass(slots=True)
class RefinementConfig:
    """Length cap and redundancy filtering applied to emitted refinements."""

    max_length: int = 12
    dedup: bool = True

    def __post_init__(self) -> None:
        if self.max_length < 1:
            raise ConfigurationError(f"max_length must be >= 1, got {self.max_length}")


@dataclass(slots=True)
class SearchConfig:
    """Stopping criteria and scoring options of one refinement search."""

    max_runtime_seconds: float = 3.0
    max_expressions_tested: int = 100_000
    quality_metric: QualityMetric = "f_measure"
    refinement_max_length: int = 12
    heuristic_params: HeuristicParams = field(default_factory=HeuristicParams)
    # OCEL weights the gain below its expansion penalty
    ocel_params: HeuristicParams = field(default_factory=lambda: HeuristicParams(**OCEL_DEFAULT_WEIGHTS))
    seed: int = 0
    keep_trace: bool = False

    def __post_init__(self) -> None:
        if not self.max_runtime_seconds > 0:
            raise ConfigurationError("max_runtime_seconds must be positive")
        if self.max_expressions_tested < 1:
            raise ConfigurationError("max_expressions_tested must be positive")
        if self.refinement_max_length < 1:
            raise ConfigurationError("refinement_max_length must be positive")
        if self.quality_metric not in QUALITY_METRICS:
            raise ConfigurationError(f"unknown quality metric {self.quality_metric!r}")


@dataclass(slots=True)
class TrainingConfig:
    """Deep Q-learning schedule."""

    episodes: int = 100
    steps_per_episode: int = 10
    update_every: int = 5
    gamma: float = 0.99
    epsilon_start: float = 1.0
    epsilon_decay: float = 0.01
    epsilon_min: float = 0.01
    learning_rate: float = 0.01
    batch_size: int = 512
    replay_capacity: int = 8192
    max_reward: float = 10.0
    refinement_max_length: int = 12
    hidden: int = 256
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("episodes", "steps_per_episode", "update_every", "batch_size", "replay_capacity", "hidden"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be positive")
        if not 0 <= self.gamma < 1:
            raise ConfigurationError(f"gamma must lie in [0, 1), got {self.gamma}")
        if not 0 <= self.epsilon_start <= 1:
            raise ConfigurationError("epsilon_start must lie in [0, 1]")
        if not 0 < self.epsilon_min <= 1:
            raise ConfigurationError("epsilon_min must lie in (0, 1]")
        if self.epsilon_decay < 0:
            raise ConfigurationError("epsilon_decay must be >= 0")
        if not self.learning_rate > 0:
            raise ConfigurationError("learning_rate must be positive")
        if not math.isfinite(self.max_reward):
            raise ConfigurationError("max_reward must be finite")


@dataclass(slots=True)
class LPGenConfig:
    """Random-walk learning-problem generation."""

    n: int = 20
    m: int = 5
    kappa: int = 2
    maxlen: int = 5
    size_constraint: tuple[float, float] | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("n", "m", "kappa", "maxlen"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be positive")
        if self.size_constraint is not None:
            low, high = self.size_constraint
            if not 0 < low < high < 1:
                raise ConfigurationError(f"size constraint needs 0 < min < max < 1, got {self.size_constraint}")


DEFAULT_SIZE_CONSTRAINT = (0.1, 0.3)


@dataclass(slots=True)
class EmbeddingConfig:
    """Deterministic embedding generation."""

    dimension: int = 32
    noise_scale: float = 0.01
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dimension < 2:
            raise ConfigurationError(f"embedding dimension must be >= 2, got {self.dimension}")
        if self.noise_scale < 0:
            raise ConfigurationError("noise_scale must be >= 0")


class Settings(BaseSettings):
    """Pydantic settings wrapper."""

    environment: str = Field(default="development", alias="ENVIRONMENT")
    log_level: str = Field(default="INFO", alias="LOG_LEVEL")
    config_path: str = Field(default="config/runtime_config.json", alias="CONFIG_PATH")
    workers: int = Field(default=1, ge=1, alias="ALCLEARN_WORKERS")

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")


settings = Settings()
