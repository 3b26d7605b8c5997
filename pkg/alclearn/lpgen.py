"""Learning-problem generation by random refinement walks, plus the LP file format."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from pydantic import ValidationError

from alclearn.concepts import TOP, Concept, canonical_key, ensure_in_signature, length, parse_concept, render_concept
from alclearn.config import LPGenConfig, RefinementConfig
from alclearn.errors import InputFileError, InvalidProblemError, NoConceptsFoundError
from alclearn.heuristics import LearningProblem
from alclearn.knowledge import IndividualSet, KnowledgeBase
from alclearn.logging_utils import get_logger
from alclearn.refinement import refine_bounded
from alclearn.schemas import LearningProblemFile, LearningProblemRecord

logger = get_logger(__name__)

# walks give up after this many moves per requested state
_ATTEMPTS_PER_STATE = 10


def _walk(kb: KnowledgeBase, cfg: LPGenConfig, rng: np.random.Generator) -> list[Concept]:
    refinement_cfg = RefinementConfig(max_length=cfg.maxlen, dedup=True)
    states: list[Concept] = []
    current = TOP
    attempts = 0
    while len(states) < cfg.n and attempts < _ATTEMPTS_PER_STATE * cfg.n:
        attempts += 1
        key = canonical_key(current)
        candidates = [c for c in refine_bounded(kb.signature, current, refinement_cfg) if canonical_key(c) != key]
        if not candidates:
            current = TOP
            continue
        current = candidates[int(rng.integers(len(candidates)))]
        states.append(current)
    return states


def generate_goal_concepts(kb: KnowledgeBase, cfg: LPGenConfig) -> list[Concept]:
    """Target concepts from ``cfg.m`` random walks of up to ``cfg.n`` states each.

    Concepts are kept in discovery order, once per canonical key, when their
    length is at most ``cfg.maxlen`` and, with a size constraint, their
    retrieval covers the requested fraction of the individuals.
    """
    rng = np.random.default_rng(cfg.seed)
    total = len(kb.individuals)
    kept: list[Concept] = []
    seen: set[str] = set()
    too_small = too_large = 0
    for _ in range(cfg.m):
        for concept in _walk(kb, cfg, rng):
            key = canonical_key(concept)
            if key in seen or not 1 <= length(concept) <= cfg.maxlen:
                continue
            seen.add(key)
            if cfg.size_constraint is not None:
                low, high = cfg.size_constraint
                size = len(kb.retrieve(concept))
                if size < low * total:
                    too_small += 1
                    continue
                if size > high * total:
                    too_large += 1
                    continue
            kept.append(concept)

    logger.info(
        "Goal concepts generated | walks=%d kept=%d too_small=%d too_large=%d",
        cfg.m,
        len(kept),
        too_small,
        too_large,
    )
    if not kept:
        raise NoConceptsFoundError("every generated concept was filtered out")
    return kept


def _sample(kb: KnowledgeBase, members: IndividualSet, size: int, rng: np.random.Generator) -> IndividualSet:
    names = members.names()
    if len(names) <= size:
        return members
    picks = np.sort(rng.choice(len(names), size=size, replace=False))
    return kb.individual_set(names[i] for i in picks)


def build_learning_problems(
    kb: KnowledgeBase,
    concepts: Sequence[Concept],
    cfg: LPGenConfig,
) -> list[LearningProblem]:
    """Balanced problems ``E+ ⊆ R(c)``, ``E- ⊆ I \\ R(c)``; ``cfg.kappa`` draws per concept."""
    rng = np.random.default_rng(cfg.seed)
    everyone = kb.all_individuals()
    problems: list[LearningProblem] = []
    skipped = 0
    for concept in concepts:
        retrieved = kb.retrieve(concept)
        rest = everyone - retrieved
        if not retrieved or not rest:
            skipped += 1
            continue
        size = min(len(retrieved), len(rest))
        for _ in range(cfg.kappa):
            problems.append(
                LearningProblem(
                    positives=_sample(kb, retrieved, size, rng),
                    negatives=_sample(kb, rest, size, rng),
                    target_concept=concept,
                    lp_id=f"lp{len(problems):04d}",
                )
            )
    if skipped:
        logger.warning("Concepts skipped | reason=empty_example_side count=%d", skipped)
    logger.info("Learning problems built | concepts=%d problems=%d", len(concepts) - skipped, len(problems))
    return problems


def generate_learning_problems(kb: KnowledgeBase, cfg: LPGenConfig) -> list[LearningProblem]:
    return build_learning_problems(kb, generate_goal_concepts(kb, cfg), cfg)


def partition_by_target(
    lps: Sequence[LearningProblem],
    train_size: int,
    seed: int = 0,
) -> tuple[list[LearningProblem], list[LearningProblem]]:
    """Split problems so that no target concept is shared by both parts.

    Target groups are shuffled under ``seed`` and assigned to the training part
    until it holds at least ``train_size`` problems.
    """
    groups: dict[str, list[LearningProblem]] = {}
    for index, lp in enumerate(lps):
        key = canonical_key(lp.target_concept) if lp.target_concept is not None else f"untargeted:{index}"
        groups.setdefault(key, []).append(lp)

    order = np.random.default_rng(seed).permutation(len(groups))
    keys = list(groups)
    train: list[LearningProblem] = []
    held_out: list[LearningProblem] = []
    for position in order:
        group = groups[keys[position]]
        (train if len(train) < train_size else held_out).extend(group)
    return train, held_out


def problem_from_names(
    kb: KnowledgeBase,
    positives: Iterable[str],
    negatives: Iterable[str],
    *,
    target: Concept | None = None,
    lp_id: str | None = None,
) -> LearningProblem:
    return LearningProblem(
        positives=kb.individual_set(positives),
        negatives=kb.individual_set(negatives),
        target_concept=target,
        lp_id=lp_id,
    )


def to_record(lp: LearningProblem) -> LearningProblemRecord:
    return LearningProblemRecord(
        lp_id=lp.lp_id,
        positives=lp.positives.names(),
        negatives=lp.negatives.names(),
        target=render_concept(lp.target_concept) if lp.target_concept is not None else None,
    )


def save_learning_problems(lps: Sequence[LearningProblem], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = LearningProblemFile(problems=[to_record(lp) for lp in lps])
    path.write_text(document.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info("Learning problems written | path=%s problems=%d", path, len(lps))


def load_learning_problems(path: str | Path, kb: KnowledgeBase) -> list[LearningProblem]:
    """Read an LP file and resolve every individual and target against ``kb``."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFileError(f"cannot read learning problems {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise InvalidProblemError(f"{path}: not UTF-8 text: {exc}") from exc
    try:
        document = LearningProblemFile.model_validate_json(text)
    except ValidationError as exc:
        raise InvalidProblemError(f"{path}: {exc}") from exc

    problems: list[LearningProblem] = []
    for index, record in enumerate(document.problems):
        target = None
        if record.target is not None:
            target = parse_concept(record.target)
            ensure_in_signature(kb.signature, target)
        problems.append(
            problem_from_names(
                kb,
                record.positives,
                record.negatives,
                target=target,
                lp_id=record.lp_id or f"lp{index:04d}",
            )
        )
    logger.info("Learning problems loaded | path=%s problems=%d", path, len(problems))
    return problems
