"""ALC concepts: expression trees, measures, parsing and rendering."""

from alclearn.concepts.concept import (
    BOTTOM,
    KEYWORDS,
    TOP,
    And,
    Bottom,
    Concept,
    Exists,
    Forall,
    Named,
    Not,
    Or,
    Signature,
    Top,
    canonical_key,
    concept_names,
    ensure_in_signature,
    height,
    length,
    role_names,
    subconcepts,
)
from alclearn.concepts.parser import is_identifier, parse_concept, render_concept

__all__ = [
    "BOTTOM",
    "KEYWORDS",
    "TOP",
    "And",
    "Bottom",
    "Concept",
    "Exists",
    "Forall",
    "Named",
    "Not",
    "Or",
    "Signature",
    "Top",
    "canonical_key",
    "concept_names",
    "ensure_in_signature",
    "height",
    "is_identifier",
    "length",
    "parse_concept",
    "render_concept",
    "role_names",
    "subconcepts",
]
