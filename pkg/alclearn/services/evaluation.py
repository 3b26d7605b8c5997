"""Evaluation service: batch runs written to CSV and summarized per method."""

from __future__ import annotations

import csv
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence, TextIO

import numpy as np
from pydantic import ValidationError

from alclearn.config import SearchConfig
from alclearn.errors import InputFileError, InvalidProblemError
from alclearn.heuristics import LearningProblem
from alclearn.knowledge import KnowledgeBase
from alclearn.logging_utils import get_logger
from alclearn.schemas import EVAL_CSV_HEADER, EvalRowModel
from alclearn.services.learning import DrillAssets, LearningService
from alclearn.types import Method

logger = get_logger(__name__)


@dataclass(frozen=True)
class MethodAggregate:
    method: str
    problems: int
    solved: int
    f1_mean: float
    f1_median: float
    accuracy_mean: float
    accuracy_median: float
    runtime_mean: float
    runtime_median: float
    expressions_mean: float
    expressions_median: float


def _csv_values(row: EvalRowModel) -> list[str]:
    return [
        row.lp_id,
        row.method,
        row.concept,
        str(row.length),
        repr(row.f1),
        repr(row.accuracy),
        repr(row.runtime_s),
        str(row.expressions_tested),
    ]


def write_row(writer: Any, handle: TextIO, row: EvalRowModel) -> None:
    writer.writerow(_csv_values(row))
    handle.flush()


def read_eval_csv(path: str | Path) -> list[EvalRowModel]:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if tuple(reader.fieldnames or ()) != EVAL_CSV_HEADER:
                raise InvalidProblemError(f"{path}: unexpected header {reader.fieldnames}")
            return [EvalRowModel.model_validate(record) for record in reader]
    except OSError as exc:
        raise InputFileError(f"cannot read results {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise InvalidProblemError(f"{path}: not UTF-8 text: {exc}") from exc
    except ValidationError as exc:
        raise InvalidProblemError(f"{path}: {exc}") from exc


def aggregate(rows: Sequence[EvalRowModel]) -> list[MethodAggregate]:
    """Mean and median of every reported metric per method, in first-seen method order."""
    by_method: dict[str, list[EvalRowModel]] = {}
    for row in rows:
        by_method.setdefault(row.method, []).append(row)

    summaries = []
    for method, group in by_method.items():
        f1 = np.array([row.f1 for row in group])
        accuracy = np.array([row.accuracy for row in group])
        runtime = np.array([row.runtime_s for row in group])
        expressions = np.array([row.expressions_tested for row in group], dtype=np.float64)
        summaries.append(
            MethodAggregate(
                method=method,
                problems=len(group),
                solved=int(np.sum(f1 == 1.0)),
                f1_mean=float(f1.mean()),
                f1_median=float(np.median(f1)),
                accuracy_mean=float(accuracy.mean()),
                accuracy_median=float(np.median(accuracy)),
                runtime_mean=float(runtime.mean()),
                runtime_median=float(np.median(runtime)),
                expressions_mean=float(expressions.mean()),
                expressions_median=float(np.median(expressions)),
            )
        )
    return summaries


def format_aggregate_table(summaries: Sequence[MethodAggregate]) -> str:
    header = (
        f"{'method':<8} {'LPs':>4} {'solved':>6} "
        f"{'F1 mean':>8} {'F1 med':>8} {'Acc mean':>8} {'Acc med':>8} "
        f"{'T mean':>8} {'T med':>8} {'Exp mean':>10} {'Exp med':>10}"
    )
    lines = [header, "-" * len(header)]
    for s in summaries:
        lines.append(
            f"{s.method:<8} {s.problems:>4} {s.solved:>6} "
            f"{s.f1_mean:>8.3f} {s.f1_median:>8.3f} {s.accuracy_mean:>8.3f} {s.accuracy_median:>8.3f} "
            f"{s.runtime_mean:>8.3f} {s.runtime_median:>8.3f} {s.expressions_mean:>10.1f} {s.expressions_median:>10.1f}"
        )
    return "\n".join(lines)


class EvaluationService:
    """Runs every (learning problem, method) cell and streams rows to CSV in input order."""

    def __init__(self, *, learning_service: LearningService, workers: int = 1) -> None:
        self._learning_service = learning_service
        self._workers = max(1, workers)

    def evaluate(
        self,
        *,
        kb: KnowledgeBase,
        lps: Sequence[LearningProblem],
        methods: Sequence[Method],
        search_config: SearchConfig,
        out: str | Path,
        drill: DrillAssets | None = None,
    ) -> list[EvalRowModel]:
        cells = [(lp, method) for lp in lps for method in methods]
        # fail before any search when a scorer cannot be built
        for method in dict.fromkeys(methods):
            if lps:
                self._learning_service.build_scorer(method, kb, lps[0], search_config, drill)

        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        rows: list[EvalRowModel] = []
        with out.open("w", encoding="utf-8", newline="") as handle, ThreadPoolExecutor(
            max_workers=self._workers
        ) as pool:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(EVAL_CSV_HEADER)
            handle.flush()
            futures: list[Future] = [
                pool.submit(
                    self._learning_service.learn,
                    kb=kb,
                    lp=lp,
                    method=method,
                    search_config=search_config,
                    drill=drill,
                )
                for lp, method in cells
            ]
            try:
                for future in futures:
                    row = future.result().row
                    write_row(writer, handle, row)
                    rows.append(row)
            except KeyboardInterrupt:
                for future in futures:
                    future.cancel()
                handle.flush()
                logger.warning("Evaluation interrupted | rows_written=%d cells=%d out=%s", len(rows), len(cells), out)
                raise

        logger.info("Evaluation finished | rows=%d methods=%s out=%s", len(rows), ",".join(methods), out)
        return rows
