"""Tests for the learning, training, generation and evaluation services."""

from __future__ import annotations

from pathlib import Path

import pytest

from alclearn.config import SearchConfig
from alclearn.config_manager import ConfigManager
from alclearn.errors import ConfigurationError, EmbeddingError, InvalidProblemError
from alclearn.embeddings import generate_embeddings, save_embeddings
from alclearn.heuristics import LearningProblem
from alclearn.knowledge import KnowledgeBase
from alclearn.models import init_network, save_checkpoint
from alclearn.schemas import EvalRowModel
from alclearn.services.evaluation import EvaluationService, aggregate, format_aggregate_table, read_eval_csv
from alclearn.services.generation import GenerationService
from alclearn.services.learning import LearningService
from alclearn.services.training import TrainingService


def _row(method: str, f1: float, expressions: int) -> EvalRowModel:
    return EvalRowModel(
        lp_id="lp",
        method=method,
        concept="Male",
        length=1,
        f1=f1,
        accuracy=f1,
        runtime_s=0.1,
        expressions_tested=expressions,
    )


def test_aggregate_reports_mean_median_and_solved() -> None:
    rows = [_row("random", 0.5, 10), _row("celoe", 1.0, 4), _row("celoe", 0.5, 8), _row("celoe", 1.0, 30)]
    summaries = aggregate(rows)
    assert [s.method for s in summaries] == ["random", "celoe"]
    celoe = summaries[1]
    assert celoe.problems == 3
    assert celoe.solved == 2
    assert celoe.f1_mean == pytest.approx(2.5 / 3)
    assert celoe.f1_median == 1.0
    assert celoe.expressions_median == 8.0
    table = format_aggregate_table(summaries)
    assert table.splitlines()[0].startswith("method")
    assert len(table.splitlines()) == 4


def test_read_eval_csv_checks_the_header(tmp_path: Path) -> None:
    path = tmp_path / "eval.csv"
    path.write_text("lp_id,method\nlp,celoe\n", encoding="utf-8")
    with pytest.raises(InvalidProblemError):
        read_eval_csv(path)
    path.write_bytes(b"lp_id,method\n\xff\xfe\n")
    with pytest.raises(InvalidProblemError):
        read_eval_csv(path)


def test_learning_service_runs_each_method(
    config_manager: ConfigManager, tiny_kb: KnowledgeBase, tiny_lp: LearningProblem
) -> None:
    """Rows carry the problem id, method and a parseable concept."""
    service = LearningService(config_manager=config_manager)
    cfg = config_manager.search_config(max_expressions_tested=500)
    for method in ("celoe", "random"):
        outcome = service.learn(kb=tiny_kb, lp=tiny_lp, method=method, search_config=cfg)
        assert outcome.row.lp_id == "tiny"
        assert outcome.row.method == method
        assert outcome.row.expressions_tested == outcome.result.expressions_tested


def test_drill_needs_assets(config_manager: ConfigManager, tiny_kb: KnowledgeBase, tiny_lp: LearningProblem) -> None:
    service = LearningService(config_manager=config_manager)
    with pytest.raises(ConfigurationError):
        service.build_scorer("drill", tiny_kb, tiny_lp, SearchConfig())
    with pytest.raises(ConfigurationError):
        service.build_scorer("eltl", tiny_kb, tiny_lp, SearchConfig())  # type: ignore[arg-type]


def test_drill_assets_follow_the_checkpoint_dimension(
    tmp_path: Path, config_manager: ConfigManager, tiny_kb: KnowledgeBase
) -> None:
    """Generated embeddings take the checkpoint's width; supplied ones must match it."""
    model = tmp_path / "q.json"
    save_checkpoint(init_network(6, hidden=8, seed=0), model)
    service = LearningService(config_manager=config_manager)
    assets = service.load_drill_assets(tiny_kb, model)
    assert assets.table.dimension == 6
    embeddings = tmp_path / "emb.csv"
    save_embeddings(generate_embeddings(tiny_kb, d=4, seed=0), embeddings)
    with pytest.raises(EmbeddingError):
        service.load_drill_assets(tiny_kb, model, embeddings_path=embeddings)


def test_training_service_writes_a_checkpoint(
    tmp_path: Path, config_manager: ConfigManager, tiny_kb: KnowledgeBase, tiny_lp: LearningProblem
) -> None:
    service = TrainingService(config_manager=config_manager)
    table = service.embeddings(tiny_kb, dimension=4)
    out = tmp_path / "models" / "q.json"
    params, report = service.train(
        kb=tiny_kb, table=table, lps=[tiny_lp], out=out, episodes=2, update_every=1, hidden=8, batch_size=4
    )
    assert out.exists()
    assert params.d == 4
    assert len(report.losses) == 2


def test_generation_service_writes_problems(tmp_path: Path, config_manager: ConfigManager, family_kb: KnowledgeBase) -> None:
    out = tmp_path / "lps.json"
    problems = GenerationService(config_manager=config_manager).generate(family_kb, out=out, n=5, m=2, maxlen=3)
    assert problems
    assert out.exists()


def test_evaluation_validates_methods_before_searching(
    tmp_path: Path, config_manager: ConfigManager, tiny_kb: KnowledgeBase, tiny_lp: LearningProblem
) -> None:
    """A drill cell without a model fails before the CSV is opened."""
    service = EvaluationService(learning_service=LearningService(config_manager=config_manager))
    out = tmp_path / "eval.csv"
    with pytest.raises(ConfigurationError):
        service.evaluate(kb=tiny_kb, lps=[tiny_lp], methods=["celoe", "drill"], search_config=SearchConfig(), out=out)
    assert not out.exists()


def test_evaluation_rows_round_trip_through_csv(
    tmp_path: Path, config_manager: ConfigManager, tiny_kb: KnowledgeBase, tiny_lp: LearningProblem
) -> None:
    service = EvaluationService(learning_service=LearningService(config_manager=config_manager), workers=3)
    out = tmp_path / "eval.csv"
    rows = service.evaluate(
        kb=tiny_kb,
        lps=[tiny_lp, tiny_lp],
        methods=["celoe", "ocel", "random"],
        search_config=config_manager.search_config(
            max_expressions_tested=300, heuristic_params=config_manager.heuristic_params(lam=0.01)
        ),
        out=out,
    )
    assert [row.method for row in rows] == ["celoe", "ocel", "random"] * 2
    assert read_eval_csv(out) == rows
