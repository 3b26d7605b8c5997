"""Length-based refinement operator over ALC concepts."""

from __future__ import annotations

from functools import lru_cache

from alclearn.concepts import (
    TOP,
    And,
    Concept,
    Exists,
    Forall,
    Not,
    Or,
    Signature,
    Top,
    canonical_key,
    ensure_in_signature,
    length,
)
from alclearn.config import RefinementConfig

# every refinement is at most this much longer than the refined concept
MAX_LENGTH_GROWTH = 2


@lru_cache(maxsize=1 << 15)
def _refine(sig: Signature, c: Concept) -> tuple[Concept, ...]:
    out: list[Concept] = []
    for role in sig.roles:
        out.append(Exists(role, c))
        out.append(Forall(role, c))
    out.extend((And(c, TOP), Or(c, TOP), Not(c), c))

    match c:
        case And(left, right):
            out.extend(And(sub, right) for sub in _refine(sig, left))
            out.extend(And(left, sub) for sub in _refine(sig, right))
        case Or(left, right):
            out.extend(Or(sub, right) for sub in _refine(sig, left))
            out.extend(Or(left, sub) for sub in _refine(sig, right))
        case Not(child):
            out.extend(Not(sub) for sub in _refine(sig, child))
        case Exists(role, filler):
            out.extend(Exists(role, sub) for sub in _refine(sig, filler))
        case Forall(role, filler):
            out.extend(Forall(role, sub) for sub in _refine(sig, filler))

    if isinstance(c, Top):
        out.extend(sig.atoms())
    # structural duplicates collapse, first occurrence keeps its position
    return tuple(dict.fromkeys(out))


def refine(sig: Signature, c: Concept) -> list[Concept]:
    """Return the refinements of a concept in a deterministic order.

    The universal case (role restrictions, ``c and Thing``, ``c or Thing``,
    ``not c`` and ``c`` itself) is united with the structural case, which
    refines one operand at a time, and with N_C^+ when ``c`` is Top.
    """
    ensure_in_signature(sig, c)
    return list(_refine(sig, c))


def refine_bounded(sig: Signature, c: Concept, cfg: RefinementConfig) -> list[Concept]:
    """Refinements no longer than ``cfg.max_length``, deduplicated by canonical key on request."""
    kept: list[Concept] = []
    seen: set[str] = set()
    for candidate in refine(sig, c):
        if length(candidate) > cfg.max_length:
            continue
        if cfg.dedup:
            key = canonical_key(candidate)
            if key in seen:
                continue
            seen.add(key)
        kept.append(candidate)
    return kept


def refinement_bound(sig: Signature, c: Concept) -> int:
    """Upper bound on ``len(refine(sig, c))``."""
    bound = 2 * len(sig.roles) + 4
    match c:
        case And(left, right) | Or(left, right):
            bound += refinement_bound(sig, left) + refinement_bound(sig, right)
        case Not(child):
            bound += refinement_bound(sig, child)
        case Exists(_, filler) | Forall(_, filler):
            bound += refinement_bound(sig, filler)
    if isinstance(c, Top):
        bound += len(sig.named_concepts) + 2
    return bound


def explore(sig: Signature, max_length: int, max_steps: int) -> set[str]:
    """Canonical keys reachable from Top within ``max_steps`` refinement steps.

    Candidates longer than ``max_length`` are pruned.
    """
    seen = {canonical_key(TOP)}
    frontier: list[Concept] = [TOP]
    for _ in range(max_steps):
        next_frontier: list[Concept] = []
        for concept in frontier:
            for candidate in _refine(sig, concept):
                if length(candidate) > max_length:
                    continue
                key = canonical_key(candidate)
                if key not in seen:
                    seen.add(key)
                    next_frontier.append(candidate)
        if not next_frontier:
            break
        frontier = next_frontier
    return seen


def reachable(sig: Signature, target: Concept, max_steps: int, *, slack: int = MAX_LENGTH_GROWTH) -> bool:
    """Whether ``target`` (modulo canonical key) is produced from Top within ``max_steps`` levels."""
    goal = canonical_key(target)
    seen = {canonical_key(TOP)}
    if goal in seen:
        return True
    limit = length(target) + slack
    frontier: list[Concept] = [TOP]
    for _ in range(max_steps):
        next_frontier: list[Concept] = []
        for concept in frontier:
            for candidate in _refine(sig, concept):
                if length(candidate) > limit:
                    continue
                key = canonical_key(candidate)
                if key == goal:
                    return True
                if key not in seen:
                    seen.add(key)
                    next_frontier.append(candidate)
        if not next_frontier:
            return False
        frontier = next_frontier
    return False
