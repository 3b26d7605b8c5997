"""Training service: Q-network training and checkpoint writing."""

from __future__ import annotations

import time
from pathlib import Path
from typing import Sequence

from alclearn.config import HeuristicParams
from alclearn.config_manager import ConfigManager
from alclearn.embeddings import EmbeddingTable, generate_embeddings, load_embeddings
from alclearn.heuristics import LearningProblem
from alclearn.knowledge import KnowledgeBase
from alclearn.logging_utils import get_logger
from alclearn.models.checkpoint import save_checkpoint
from alclearn.models.network import QNetworkParams
from alclearn.models.training import TrainingReport, train

logger = get_logger(__name__)


class TrainingService:
    def __init__(self, *, config_manager: ConfigManager) -> None:
        self._config_manager = config_manager

    def embeddings(
        self,
        kb: KnowledgeBase,
        *,
        path: str | Path | None = None,
        dimension: int | None = None,
        seed: int | None = None,
        noise_scale: float | None = None,
    ) -> EmbeddingTable:
        if path is not None:
            return load_embeddings(path, kb)
        cfg = self._config_manager.embedding_config(dimension=dimension, seed=seed, noise_scale=noise_scale)
        return generate_embeddings(kb, cfg.dimension, cfg.seed, noise_scale=cfg.noise_scale)

    def train(
        self,
        *,
        kb: KnowledgeBase,
        table: EmbeddingTable,
        lps: Sequence[LearningProblem],
        out: str | Path,
        heuristic_params: HeuristicParams | None = None,
        **overrides: object,
    ) -> tuple[QNetworkParams, TrainingReport]:
        """Train under persisted defaults plus ``overrides`` and write the checkpoint to ``out``."""
        cfg = self._config_manager.training_config(**overrides)
        heuristic_params = heuristic_params or self._config_manager.heuristic_params()
        start = time.perf_counter()
        params, report = train(kb, table, lps, cfg, heuristic_params)
        save_checkpoint(params, out)
        logger.info(
            "Training run completed | problems=%d episodes=%d seconds=%.2f out=%s",
            len(lps),
            cfg.episodes,
            time.perf_counter() - start,
            out,
        )
        return params, report
