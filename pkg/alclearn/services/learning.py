"""Learning service: one search per (learning problem, method)."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from alclearn.concepts import render_concept
from alclearn.config import SearchConfig
from alclearn.config_manager import ConfigManager
from alclearn.embeddings import EmbeddingTable, generate_embeddings, load_embeddings
from alclearn.errors import ConfigurationError, EmbeddingError
from alclearn.heuristics import LearningProblem
from alclearn.knowledge import KnowledgeBase
from alclearn.logging_utils import get_logger
from alclearn.models.checkpoint import load_checkpoint
from alclearn.models.network import QNetworkParams
from alclearn.schemas import EvalRowModel
from alclearn.search import CeloeScorer, LearnResult, OcelScorer, RandomScorer, Scorer, drill_scorer, learn
from alclearn.types import METHODS, Method

logger = get_logger(__name__)


@dataclass(frozen=True)
class DrillAssets:
    """Trained network and the embedding table it reads states from."""

    params: QNetworkParams
    table: EmbeddingTable


@dataclass
class LearningOutcome:
    row: EvalRowModel
    result: LearnResult


def to_eval_row(lp_id: str, method: Method, result: LearnResult) -> EvalRowModel:
    return EvalRowModel(
        lp_id=lp_id,
        method=method,
        concept=render_concept(result.best_concept),
        length=result.best_length,
        f1=result.f1,
        accuracy=result.accuracy,
        runtime_s=result.runtime_seconds,
        expressions_tested=result.expressions_tested,
    )


class LearningService:
    """Builds the scorer for a method and runs the refinement search."""

    def __init__(self, *, config_manager: ConfigManager) -> None:
        self._config_manager = config_manager

    def load_drill_assets(
        self,
        kb: KnowledgeBase,
        model_path: str | Path,
        *,
        embeddings_path: str | Path | None = None,
        embedding_seed: int | None = None,
    ) -> DrillAssets:
        """Load a checkpoint with matching embeddings, generating them when no file is given."""
        params = load_checkpoint(model_path)
        if embeddings_path is not None:
            table = load_embeddings(embeddings_path, kb)
        else:
            cfg = self._config_manager.embedding_config(dimension=params.d, seed=embedding_seed)
            table = generate_embeddings(kb, cfg.dimension, cfg.seed, noise_scale=cfg.noise_scale)
        if table.dimension != params.d:
            raise EmbeddingError(f"embedding dimension {table.dimension} does not match the model ({params.d})")
        return DrillAssets(params=params, table=table)

    def build_scorer(
        self,
        method: Method,
        kb: KnowledgeBase,
        lp: LearningProblem,
        cfg: SearchConfig,
        drill: DrillAssets | None = None,
    ) -> Scorer:
        if method == "celoe":
            return CeloeScorer(lp, cfg.heuristic_params, kb.all_individuals())
        if method == "ocel":
            return OcelScorer(lp, cfg.ocel_params)
        if method == "random":
            return RandomScorer(lp, cfg.seed)
        if method == "drill":
            if drill is None:
                raise ConfigurationError("method drill needs a trained model")
            return drill_scorer(drill.params, drill.table, lp)
        raise ConfigurationError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")

    def learn(
        self,
        *,
        kb: KnowledgeBase,
        lp: LearningProblem,
        method: Method,
        search_config: SearchConfig,
        drill: DrillAssets | None = None,
    ) -> LearningOutcome:
        scorer = self.build_scorer(method, kb, lp, search_config, drill)
        result = learn(kb, lp, scorer, search_config)
        row = to_eval_row(lp.lp_id or "inline", method, result)
        logger.debug(
            "Learning completed | lp=%s method=%s f1=%.4f tested=%d",
            row.lp_id,
            method,
            row.f1,
            row.expressions_tested,
        )
        return LearningOutcome(row=row, result=result)
