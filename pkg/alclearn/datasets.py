"""Bundled synthetic family knowledge base."""

from __future__ import annotations

import numpy as np

from alclearn.knowledge import KnowledgeBase, kb_from_lines

FOUNDING_COUPLES = 22


def family_kb_lines(seed: int = 0, *, founding_couples: int = FOUNDING_COUPLES) -> list[str]:
    """Three generations of families as KB-format lines.

    Founding couples have two to four children each; children of different
    families marry and have children of their own. Siblings, spouses and
    parenthood are asserted through ``hasSibling``, ``married`` and
    ``hasChild``; ``Male`` and ``Female`` are both subclasses of ``Person``.
    """
    rng = np.random.default_rng(seed)
    lines = [
        "# synthetic family knowledge base",
        "subclass Male Person",
        "subclass Female Person",
    ]
    counter = 0

    def person(is_male: bool) -> str:
        nonlocal counter
        counter += 1
        name = f"p{counter:03d}"
        lines.append(f"type {name} {'Male' if is_male else 'Female'}")
        return name

    def couple(husband: str, wife: str) -> None:
        lines.append(f"role {husband} married {wife}")
        lines.append(f"role {wife} married {husband}")

    def children_of(father: str, mother: str) -> list[tuple[str, bool]]:
        kids = []
        for _ in range(int(rng.integers(2, 5))):
            is_male = bool(rng.random() < 0.5)
            child = person(is_male)
            lines.append(f"role {father} hasChild {child}")
            lines.append(f"role {mother} hasChild {child}")
            kids.append((child, is_male))
        for child, _ in kids:
            for other, _ in kids:
                if other != child:
                    lines.append(f"role {child} hasSibling {other}")
        return kids

    second_generation: list[tuple[str, bool, int]] = []
    for family in range(founding_couples):
        father, mother = person(True), person(False)
        couple(father, mother)
        second_generation.extend((child, is_male, family) for child, is_male in children_of(father, mother))

    sons = [(name, family) for name, is_male, family in second_generation if is_male]
    daughters = [(name, family) for name, is_male, family in second_generation if not is_male]
    rng.shuffle(daughters)
    for son, family in sons:
        for position, (daughter, other_family) in enumerate(daughters):
            if other_family != family:
                del daughters[position]
                couple(son, daughter)
                children_of(son, daughter)
                break
    return lines


def synthetic_family_kb(seed: int = 0, *, founding_couples: int = FOUNDING_COUPLES) -> KnowledgeBase:
    return kb_from_lines(family_kb_lines(seed, founding_couples=founding_couples), source=f"<family seed={seed}>")
