"""Best-first refinement search guided by a pluggable scorer."""

from __future__ import annotations

import heapq
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import ClassVar, Sequence

import numpy as np

from alclearn.concepts import TOP, Concept, canonical_key, length, render_concept
from alclearn.config import HeuristicParams, RefinementConfig, SearchConfig
from alclearn.embeddings import EmbeddingTable
from alclearn.errors import EmptyFrontierError, InvalidProblemError
from alclearn.heuristics import (
    LearningProblem,
    accuracy_celoe,
    accuracy_simple,
    f_measure,
    heuristic_celoe,
    heuristic_ocel,
    is_goal,
    quality,
)
from alclearn.knowledge import IndividualSet, KnowledgeBase
from alclearn.logging_utils import get_logger
from alclearn.models.network import QNetworkParams, forward_batch
from alclearn.refinement import MAX_LENGTH_GROWTH, refine_bounded
from alclearn.types import StopReason

logger = get_logger(__name__)


@dataclass(eq=False, slots=True)
class SearchNode:
    """A tested concept with its retrieval, quality, heuristic value and expansion counters."""

    concept: Concept
    parent: SearchNode | None
    retrieved: IndividualSet
    quality: float
    heuristic_value: float = 0.0
    horizontal_expansion: int = 0
    refinement_count: int = 0
    order: int = 0

    @property
    def length(self) -> int:
        return length(self.concept)


@dataclass(frozen=True, slots=True)
class TraceEntry:
    """Concept, quality and heuristic value of one scored search node."""

    concept: Concept
    quality: float
    heuristic_value: float


class SearchTree:
    """Nodes, the max-priority frontier and the redundancy filter.

    Frontier order: higher heuristic value first, then shorter concept, then
    older node.
    """

    def __init__(self) -> None:
        self.nodes: list[SearchNode] = []
        self.seen_keys: set[str] = set()
        self.best: SearchNode | None = None
        self._frontier: list[tuple[float, int, int, SearchNode]] = []

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def frontier_size(self) -> int:
        return len(self._frontier)

    def add(self, node: SearchNode, key: str) -> None:
        if key in self.seen_keys:
            raise ValueError(f"concept already in the search tree: {render_concept(node.concept)}")
        node.order = len(self.nodes)
        self.nodes.append(node)
        self.seen_keys.add(key)
        if self.best is None or (node.quality, -node.length) > (self.best.quality, -self.best.length):
            self.best = node

    def push(self, node: SearchNode) -> None:
        heapq.heappush(self._frontier, (-node.heuristic_value, node.length, node.order, node))

    def peek(self) -> SearchNode:
        if not self._frontier:
            raise EmptyFrontierError("the search frontier is empty")
        return self._frontier[0][3]

    def pop(self) -> SearchNode:
        if not self._frontier:
            raise EmptyFrontierError("the search frontier is empty")
        return heapq.heappop(self._frontier)[3]


def select_most_promising(tree: SearchTree) -> SearchNode:
    """Return the frontier maximum without removing it."""
    return tree.peek()


class Scorer(ABC):
    """Heuristic value of a child concept given the node it was refined from."""

    name: ClassVar[str]

    def __init__(self, lp: LearningProblem) -> None:
        self.lp = lp

    @abstractmethod
    def score_children(self, parent: SearchNode, children: Sequence[SearchNode]) -> list[float]:
        """Score all new children of one expansion in a single pass."""

    def score_root(self, root: SearchNode) -> float:
        return self.score_children(root, [root])[0]

    def rescore(self, node: SearchNode) -> float:
        """Value used when an expanded node goes back into the frontier."""
        return node.heuristic_value

    def __call__(self, parent: SearchNode, child: SearchNode) -> float:
        return self.score_children(parent, [child])[0]


class CeloeScorer(Scorer):
    name = "celoe"

    def __init__(self, lp: LearningProblem, params: HeuristicParams, all_individuals: IndividualSet) -> None:
        super().__init__(lp)
        self.params = params
        self.all_individuals = all_individuals

    def _accuracy(self, node: SearchNode) -> float:
        return accuracy_celoe(self.lp, node.retrieved, self.all_individuals, self.params.t)

    def score_children(self, parent: SearchNode, children: Sequence[SearchNode]) -> list[float]:
        acc_parent = self._accuracy(parent)
        return [
            heuristic_celoe(acc_parent, self._accuracy(child), child.length, self.params) for child in children
        ]


class OcelScorer(Scorer):
    name = "ocel"

    def __init__(self, lp: LearningProblem, params: HeuristicParams) -> None:
        super().__init__(lp)
        params.validate_for_ocel()
        self.params = params

    def _value(self, parent: SearchNode | None, node: SearchNode) -> float:
        acc_node = accuracy_simple(self.lp, node.retrieved)
        acc_parent = accuracy_simple(self.lp, parent.retrieved) if parent is not None else acc_node
        return heuristic_ocel(acc_parent, acc_node, node.horizontal_expansion, self.params)

    def score_children(self, parent: SearchNode, children: Sequence[SearchNode]) -> list[float]:
        return [self._value(parent if child is not parent else None, child) for child in children]

    def rescore(self, node: SearchNode) -> float:
        return self._value(node.parent, node)


class RandomScorer(Scorer):
    name = "random"

    def __init__(self, lp: LearningProblem, seed: int) -> None:
        super().__init__(lp)
        self._rng = np.random.default_rng(seed)

    def score_children(self, parent: SearchNode, children: Sequence[SearchNode]) -> list[float]:
        return self._rng.random(len(children)).tolist()


class DrillScorer(Scorer):
    """Q-network value of the transition from the parent's state to each child's state."""

    name = "drill"

    def __init__(self, lp: LearningProblem, params: QNetworkParams, table: EmbeddingTable) -> None:
        super().__init__(lp)
        if table.dimension != params.d:
            raise InvalidProblemError(
                f"embedding dimension {table.dimension} does not match the network input ({params.d})"
            )
        self.params = params
        self.table = table
        self._positive_mean = table.mean(lp.positives)
        self._negative_mean = table.mean(lp.negatives)

    def states(self, parent: SearchNode, children: Sequence[SearchNode]) -> np.ndarray:
        states = np.empty((len(children), 4, self.table.dimension))
        states[:, 0] = self.table.mean(parent.retrieved)
        for row, child in enumerate(children):
            states[row, 1] = self.table.mean(child.retrieved)
        states[:, 2] = self._positive_mean
        states[:, 3] = self._negative_mean
        return states

    def score_children(self, parent: SearchNode, children: Sequence[SearchNode]) -> list[float]:
        if not children:
            return []
        return forward_batch(self.params, self.states(parent, children)).tolist()


def drill_scorer(params: QNetworkParams, table: EmbeddingTable, lp: LearningProblem) -> DrillScorer:
    return DrillScorer(lp, params, table)


@dataclass(slots=True)
class LearnResult:
    """Outcome of one search: the reported concept, its scores and the search statistics."""

    best_concept: Concept
    best_length: int
    best_quality: float
    f1: float
    accuracy: float
    runtime_seconds: float
    expressions_tested: int
    goal_found: bool
    stop_reason: StopReason
    trace: list[TraceEntry] | None = field(default=None)


def learn(kb: KnowledgeBase, lp: LearningProblem, scorer: Scorer, cfg: SearchConfig) -> LearnResult:
    """Best-first search from Top until a goal, the runtime budget or the expression cap."""
    if lp.positives.universe is not kb.universe:
        raise InvalidProblemError("learning problem individuals do not belong to this knowledge base")

    started = time.perf_counter()
    sig = kb.signature
    everyone = kb.all_individuals()
    params = cfg.heuristic_params
    trace: list[TraceEntry] | None = [] if cfg.keep_trace else None

    def evaluate(concept: Concept, parent: SearchNode | None) -> SearchNode:
        retrieved = kb.retrieve(concept)
        return SearchNode(
            concept=concept,
            parent=parent,
            retrieved=retrieved,
            quality=quality(cfg.quality_metric, lp, retrieved, everyone, params),
        )

    tree = SearchTree()
    root = evaluate(TOP, None)
    root.heuristic_value = scorer.score_root(root)
    tree.add(root, canonical_key(TOP))
    tree.push(root)
    if trace is not None:
        trace.append(TraceEntry(root.concept, root.quality, root.heuristic_value))
    tested = 1
    goal: SearchNode | None = root if is_goal(lp, root.retrieved) else None
    stop_reason: StopReason = "goal"

    logger.debug("Search started | scorer=%s positives=%d negatives=%d", scorer.name, len(lp.positives), len(lp.negatives))

    while goal is None:
        if time.perf_counter() - started >= cfg.max_runtime_seconds:
            stop_reason = "runtime"
            break
        if tested >= cfg.max_expressions_tested:
            stop_reason = "max_expressions"
            break
        if not tree.frontier_size:
            stop_reason = "exhausted"
            break

        node = select_most_promising(tree)
        tree.pop()
        full_length = min(cfg.refinement_max_length, node.length + MAX_LENGTH_GROWTH)
        bound = min(full_length, node.length + node.horizontal_expansion + 1)
        candidates = refine_bounded(sig, node.concept, RefinementConfig(max_length=bound, dedup=True))
        node.horizontal_expansion += 1

        children: list[SearchNode] = []
        for concept in candidates:
            key = canonical_key(concept)
            if key in tree.seen_keys:
                continue
            if tested >= cfg.max_expressions_tested:
                break
            child = evaluate(concept, node)
            tree.add(child, key)
            children.append(child)
            tested += 1
            if is_goal(lp, child.retrieved):
                goal = child
                break

        for child, value in zip(children, scorer.score_children(node, children)):
            child.heuristic_value = value
            tree.push(child)
            if trace is not None:
                trace.append(TraceEntry(child.concept, child.quality, value))
        node.refinement_count += len(children)

        if bound < full_length:
            node.heuristic_value = scorer.rescore(node)
            tree.push(node)

    best = goal if goal is not None else tree.best
    assert best is not None
    f1 = f_measure(lp, best.retrieved)
    runtime = time.perf_counter() - started
    result = LearnResult(
        best_concept=best.concept,
        best_length=best.length,
        best_quality=best.quality,
        f1=f1,
        accuracy=accuracy_simple(lp, best.retrieved),
        runtime_seconds=runtime,
        expressions_tested=tested,
        goal_found=goal is not None,
        stop_reason=stop_reason,
        trace=trace,
    )
    logger.info(
        "Search finished | scorer=%s stop=%s concept=%r f1=%.4f tested=%d runtime_s=%.3f",
        scorer.name,
        stop_reason,
        render_concept(best.concept),
        f1,
        tested,
        runtime,
    )
    return result
