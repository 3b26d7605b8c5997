"""Quality measures and myopic heuristics of refinement-based learners."""

from __future__ import annotations

from dataclasses import dataclass

from alclearn.concepts import Concept
from alclearn.config import HeuristicParams
from alclearn.errors import InvalidProblemError
from alclearn.knowledge import IndividualSet
from alclearn.types import QualityMetric


@dataclass(frozen=True, slots=True)
class LearningProblem:
    """Positive and negative examples, optionally with the concept that produced them."""

    positives: IndividualSet
    negatives: IndividualSet
    target_concept: Concept | None = None
    lp_id: str | None = None

    def __post_init__(self) -> None:
        if self.positives.universe is not self.negatives.universe:
            raise InvalidProblemError("positive and negative examples come from different knowledge bases")
        if not self.positives:
            raise InvalidProblemError("a learning problem needs at least one positive example")
        if not self.negatives:
            raise InvalidProblemError("a learning problem needs at least one negative example")
        if not self.positives.isdisjoint(self.negatives):
            overlap = sorted(self.positives & self.negatives)
            raise InvalidProblemError(f"individuals are both positive and negative: {overlap}")

    @property
    def examples(self) -> IndividualSet:
        return self.positives | self.negatives


def accuracy_simple(lp: LearningProblem, retrieved: IndividualSet) -> float:
    """Share of examples classified correctly."""
    missed = len(lp.positives - retrieved)
    wrong = len(retrieved & lp.negatives)
    return 1.0 - (missed + wrong) / (len(lp.positives) + len(lp.negatives))


def accuracy_celoe(lp: LearningProblem, retrieved: IndividualSet, all_individuals: IndividualSet, t: float) -> float:
    """CELOE accuracy, weighting missed positives ``t`` times over retrieved non-positives.

    Retrieved individuals outside E+ count against the concept whether they are
    labeled or not. The raw formula
    ``1 - 2 * (t * missed + extra) / ((t + 1) * N)`` drops below 0 once errors
    outweigh ``(t + 1) * N / 2``; such values are clamped to 0, so the result
    always lies in [0, 1].
    """
    missed = len(lp.positives - retrieved)
    extra = len(retrieved - lp.positives)
    value = 1.0 - 2.0 * (t * missed + extra) / ((t + 1.0) * len(all_individuals))
    return max(0.0, value)


def heuristic_ocel(acc_parent: float, acc_child: float, z: int, params: HeuristicParams) -> float:
    return acc_child + params.lam * (acc_child - acc_parent) - params.beta * z


def heuristic_celoe(acc_parent: float, acc_child: float, child_length: int, params: HeuristicParams) -> float:
    if child_length < 1:
        raise ValueError(f"concept length must be positive, got {child_length}")
    return acc_child + params.lam * (acc_child - acc_parent) - params.beta * child_length


def precision(lp: LearningProblem, retrieved: IndividualSet) -> float:
    true_positives = len(lp.positives & retrieved)
    denominator = true_positives + len(lp.negatives & retrieved)
    return true_positives / denominator if denominator else 0.0


def recall(lp: LearningProblem, retrieved: IndividualSet) -> float:
    true_positives = len(lp.positives & retrieved)
    denominator = true_positives + len(lp.positives - retrieved)
    return true_positives / denominator if denominator else 0.0


def f_measure(lp: LearningProblem, retrieved: IndividualSet) -> float:
    p = precision(lp, retrieved)
    r = recall(lp, retrieved)
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


def is_goal(lp: LearningProblem, retrieved: IndividualSet) -> bool:
    """True when the concept separates the examples perfectly (F-measure of 1)."""
    return (retrieved & lp.examples) == lp.positives


def quality(
    metric: QualityMetric,
    lp: LearningProblem,
    retrieved: IndividualSet,
    all_individuals: IndividualSet,
    params: HeuristicParams,
) -> float:
    """Evaluate the configured quality metric."""
    if metric == "f_measure":
        return f_measure(lp, retrieved)
    if metric == "accuracy_simple":
        return accuracy_simple(lp, retrieved)
    if metric == "accuracy_celoe":
        return accuracy_celoe(lp, retrieved, all_individuals, params.t)
    raise ValueError(f"unknown quality metric {metric!r}")
