"""Small end-to-end run: generate problems, train briefly, compare methods."""

from __future__ import annotations

import tempfile
from pathlib import Path

from alclearn.config_manager import ConfigManager
from alclearn.datasets import synthetic_family_kb
from alclearn.logging_utils import configure_logging
from alclearn.lpgen import partition_by_target
from alclearn.services.evaluation import EvaluationService, aggregate, format_aggregate_table
from alclearn.services.generation import GenerationService
from alclearn.services.learning import LearningService
from alclearn.services.training import TrainingService


def main() -> None:
    """Train on a handful of problems and print the aggregate table for held-out ones."""
    configure_logging(level="INFO")
    kb = synthetic_family_kb()
    with tempfile.TemporaryDirectory() as workdir:
        root = Path(workdir)
        manager = ConfigManager(root / "runtime_config.json")
        problems = GenerationService(config_manager=manager).generate(kb, maxlen=4, seed=1)
        train_lps, eval_lps = partition_by_target(problems, 10, seed=1)

        training = TrainingService(config_manager=manager)
        table = training.embeddings(kb)
        training.train(kb=kb, table=table, lps=train_lps, out=root / "model.json", episodes=20, hidden=64)

        learning = LearningService(config_manager=manager)
        drill = learning.load_drill_assets(kb, root / "model.json")
        rows = EvaluationService(learning_service=learning).evaluate(
            kb=kb,
            lps=eval_lps[:10],
            methods=["celoe", "drill", "random"],
            search_config=manager.search_config(max_runtime_seconds=1.0),
            out=root / "results.csv",
            drill=drill,
        )
        print(format_aggregate_table(aggregate(rows)))


if __name__ == "__main__":
    main()
