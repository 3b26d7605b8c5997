"""Generation service: learning problems from random refinement walks."""

from __future__ import annotations

from pathlib import Path

from alclearn.config_manager import ConfigManager
from alclearn.heuristics import LearningProblem
from alclearn.knowledge import KnowledgeBase
from alclearn.lpgen import generate_learning_problems, save_learning_problems


class GenerationService:
    def __init__(self, *, config_manager: ConfigManager) -> None:
        self._config_manager = config_manager

    def generate(
        self,
        kb: KnowledgeBase,
        *,
        out: str | Path | None = None,
        **overrides: object,
    ) -> list[LearningProblem]:
        cfg = self._config_manager.lpgen_config(**overrides)
        problems = generate_learning_problems(kb, cfg)
        if out is not None:
            save_learning_problems(problems, out)
        return problems
