"""Rewards, discounted targets, replay memory and the epsilon-greedy training loop."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from alclearn.concepts import TOP, Concept, canonical_key, length
from alclearn.config import HeuristicParams, RefinementConfig, TrainingConfig
from alclearn.embeddings import EmbeddingTable, StateMatrix, state_matrix
from alclearn.errors import EmptyRefinementError, InvalidProblemError
from alclearn.heuristics import LearningProblem, accuracy_celoe, heuristic_celoe, is_goal
from alclearn.knowledge import IndividualSet, KnowledgeBase
from alclearn.logging_utils import get_logger
from alclearn.models.network import (
    AdamState,
    QNetworkParams,
    adam_step,
    forward_batch,
    init_network,
    loss_and_gradients,
)
from alclearn.refinement import refine_bounded

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class Transition:
    """One step of an episode: concepts with their cached retrievals and the reward."""

    parent: Concept
    child: Concept
    retrieved_parent: IndividualSet
    retrieved_child: IndividualSet
    reward: float
    target: float | None = None


class ReplayBuffer:
    """Bounded FIFO of (state matrix, target) pairs."""

    def __init__(self, capacity: int = 8192) -> None:
        if capacity < 1:
            raise ValueError("replay capacity must be positive")
        self.capacity = capacity
        self._entries: deque[tuple[StateMatrix, float]] = deque(maxlen=capacity)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[tuple[StateMatrix, float]]:
        return iter(self._entries)

    def append(self, state: StateMatrix, target: float) -> None:
        self._entries.append((state, float(target)))

    def sample(self, size: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        """Draw ``min(size, len(self))`` entries without replacement."""
        count = min(size, len(self._entries))
        picks = np.sort(rng.choice(len(self._entries), size=count, replace=False))
        states = np.stack([self._entries[i][0] for i in picks])
        targets = np.array([self._entries[i][1] for i in picks])
        return states, targets


def reward(
    kb: KnowledgeBase,
    lp: LearningProblem,
    parent: Concept,
    child: Concept,
    params: HeuristicParams,
    max_reward: float,
) -> float:
    """``max_reward`` for a goal state, otherwise the CELOE heuristic of the transition."""
    retrieved_child = kb.retrieve(child)
    if is_goal(lp, retrieved_child):
        return max_reward
    everyone = kb.all_individuals()
    acc_parent = accuracy_celoe(lp, kb.retrieve(parent), everyone, params.t)
    acc_child = accuracy_celoe(lp, retrieved_child, everyone, params.t)
    return heuristic_celoe(acc_parent, acc_child, length(child), params)


def discounted_targets(rewards: Sequence[float], gamma: float) -> list[float]:
    """Suffix sums ``y_i = r_i + gamma * y_{i+1}``."""
    targets = [0.0] * len(rewards)
    running = 0.0
    for index in range(len(rewards) - 1, -1, -1):
        running = rewards[index] + gamma * running
        targets[index] = running
    return targets


@dataclass(slots=True)
class TrainingReport:
    """Loss per update, transition and goal counts, and the exploration rate of each episode."""

    losses: list[tuple[int, float]] = field(default_factory=list)
    transitions: int = 0
    episodes: int = 0
    goals_reached: int = 0
    final_epsilon: float = 1.0
    epsilons: list[float] = field(default_factory=list)


def _candidates(kb: KnowledgeBase, concept: Concept, cfg: TrainingConfig) -> list[Concept]:
    key = canonical_key(concept)
    refinements = refine_bounded(
        kb.signature, concept, RefinementConfig(max_length=cfg.refinement_max_length, dedup=True)
    )
    # staying in place is not a move
    candidates = [candidate for candidate in refinements if canonical_key(candidate) != key]
    if not candidates:
        raise EmptyRefinementError(f"no admissible refinement of a length-{length(concept)} concept")
    return candidates


def _run_episode(
    kb: KnowledgeBase,
    table: EmbeddingTable,
    lp: LearningProblem,
    params: QNetworkParams,
    epsilon: float,
    rng: np.random.Generator,
    cfg: TrainingConfig,
    heuristic_params: HeuristicParams,
) -> list[Transition]:
    """Walk from Top for at most ``steps_per_episode`` moves; a dead end ends the episode early."""
    transitions: list[Transition] = []
    current = TOP
    for _ in range(cfg.steps_per_episode):
        try:
            candidates = _candidates(kb, current, cfg)
        except EmptyRefinementError as exc:
            logger.warning("Episode truncated | steps=%d reason=%s", len(transitions), exc)
            break
        retrieved_current = kb.retrieve(current)
        retrieved = [kb.retrieve(candidate) for candidate in candidates]
        if rng.random() < epsilon:
            choice = int(rng.integers(len(candidates)))
        else:
            states = np.stack([state_matrix(table, retrieved_current, child, lp) for child in retrieved])
            choice = int(np.argmax(forward_batch(params, states)))
        chosen = candidates[choice]
        value = reward(kb, lp, current, chosen, heuristic_params, cfg.max_reward)
        transitions.append(Transition(current, chosen, retrieved_current, retrieved[choice], value))
        current = chosen
        if is_goal(lp, retrieved[choice]):
            break
    return transitions


def train(
    kb: KnowledgeBase,
    table: EmbeddingTable,
    lps: Sequence[LearningProblem],
    cfg: TrainingConfig,
    heuristic_params: HeuristicParams,
    *,
    initial: QNetworkParams | None = None,
    replay: ReplayBuffer | None = None,
) -> tuple[QNetworkParams, TrainingReport]:
    """Deep Q-learning over learning problems visited round-robin; deterministic under ``cfg.seed``."""
    if not lps:
        raise InvalidProblemError("training needs at least one learning problem")
    if table.universe is not kb.universe:
        raise InvalidProblemError("embeddings were built for another knowledge base")

    rng = np.random.default_rng(cfg.seed)
    params = initial if initial is not None else init_network(table.dimension, cfg.hidden, cfg.seed)
    optimizer = AdamState.zeros_like(params)
    memory = replay if replay is not None else ReplayBuffer(cfg.replay_capacity)
    report = TrainingReport(final_epsilon=cfg.epsilon_start)
    epsilon = cfg.epsilon_start

    for episode in range(1, cfg.episodes + 1):
        lp = lps[(episode - 1) % len(lps)]
        transitions = _run_episode(kb, table, lp, params, epsilon, rng, cfg, heuristic_params)
        report.epsilons.append(epsilon)
        epsilon = max(cfg.epsilon_min, epsilon - cfg.epsilon_decay)

        targets = discounted_targets([t.reward for t in transitions], cfg.gamma)
        for transition, target in zip(transitions, targets):
            memory.append(state_matrix(table, transition.retrieved_parent, transition.retrieved_child, lp), target)
        report.transitions += len(transitions)
        if transitions and transitions[-1].reward == cfg.max_reward:
            report.goals_reached += 1

        if episode % cfg.update_every == 0 and len(memory):
            states, batch_targets = memory.sample(cfg.batch_size, rng)
            loss, grads = loss_and_gradients(params, states, batch_targets)
            params, optimizer = adam_step(params, grads, optimizer, cfg.learning_rate)
            report.losses.append((episode, loss))
            logger.info(
                "Parameters updated | episode=%d loss=%.6f batch=%d epsilon=%.3f memory=%d",
                episode,
                loss,
                len(batch_targets),
                epsilon,
                len(memory),
            )

    report.episodes = cfg.episodes
    report.final_epsilon = epsilon
    logger.info(
        "Training finished | episodes=%d transitions=%d goals=%d updates=%d",
        report.episodes,
        report.transitions,
        report.goals_reached,
        len(report.losses),
    )
    return params, report
