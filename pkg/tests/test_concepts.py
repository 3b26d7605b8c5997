"""Tests for the concept algebra, parser and renderer."""

from __future__ import annotations

import numpy as np
import pytest

from alclearn.concepts import (
    BOTTOM,
    TOP,
    And,
    Bottom,
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
    parse_concept,
    render_concept,
    role_names,
    subconcepts,
)
from alclearn.errors import ConceptSyntaxError, ConfigurationError, UnknownNameError, UnknownTokenError
from tests.strategies import random_concept

A, B, C = Named("A"), Named("B"), Named("C")


def test_parse_disjunction_and_keywords() -> None:
    """Named concepts, keywords and negated restrictions parse to the expected trees."""
    assert parse_concept("Brother or Sister") == Or(Named("Brother"), Named("Sister"))
    assert parse_concept("Thing") == TOP
    assert parse_concept("Nothing") == BOTTOM
    assert parse_concept("not (hasChild some Male)") == Not(Exists("hasChild", Named("Male")))


def test_parse_precedence_and_associativity() -> None:
    """and binds tighter than or; restrictions take a unary filler; binary operators associate left."""
    assert parse_concept("A and B or C") == Or(And(A, B), C)
    assert parse_concept("A or B and C") == Or(A, And(B, C))
    assert parse_concept("A and B and C") == And(And(A, B), C)
    assert parse_concept("r some A and B") == And(Exists("r", A), B)
    assert parse_concept("r only not A") == Forall("r", Not(A))
    assert parse_concept("not A and B") == And(Not(A), B)


def test_parse_errors_report_positions() -> None:
    """Malformed text raises syntax errors carrying the offending position."""
    with pytest.raises(ConceptSyntaxError) as excinfo:
        parse_concept("A and")
    assert excinfo.value.position == 5
    with pytest.raises(ConceptSyntaxError):
        parse_concept("(A or B")
    with pytest.raises(ConceptSyntaxError):
        parse_concept("")
    with pytest.raises(ConceptSyntaxError):
        parse_concept("A B")
    with pytest.raises(UnknownTokenError) as excinfo:
        parse_concept("A & B")
    assert excinfo.value.position == 2


def test_render_uses_minimal_parentheses() -> None:
    """Rendering follows operator precedence."""
    assert render_concept(Or(Named("Brother"), Named("Sister"))) == "Brother or Sister"
    assert render_concept(TOP) == "Thing"
    assert render_concept(And(A, Or(B, C))) == "A and (B or C)"
    assert render_concept(And(A, And(B, C))) == "A and (B and C)"
    assert render_concept(And(And(A, B), C)) == "A and B and C"
    assert render_concept(Exists("r", And(A, B))) == "r some (A and B)"
    assert render_concept(Not(Exists("r", A))) == "not r some A"


def test_render_parse_round_trip_on_random_concepts() -> None:
    """Rendering and re-parsing returns a structurally equal tree."""
    rng = np.random.default_rng(0)
    sig = Signature.from_names(["A", "B", "C"], ["r", "s"])
    for _ in range(10_000):
        concept = random_concept(rng, sig, 9)
        assert parse_concept(render_concept(concept)) == concept


def test_length_and_height() -> None:
    """Length counts symbols; height counts constructor depth."""
    assert length(Named("Brother")) == 1
    assert length(Or(Named("Brother"), Named("Sister"))) == 3
    assert length(Exists("r", Not(A))) == 4
    assert height(A) == 0
    assert height(Not(A)) == 1
    assert height(And(Exists("r", A), B)) == 2


def test_canonical_key_commutes_but_does_not_simplify() -> None:
    """Conjunction and disjunction are keyed up to operand order only."""
    assert canonical_key(And(B, A)) == canonical_key(And(A, B))
    assert canonical_key(Or(Or(A, B), C)) == canonical_key(Or(C, Or(B, A)))
    assert canonical_key(Or(A, A)) != canonical_key(A)
    assert canonical_key(Forall("r", TOP)) != canonical_key(TOP)
    assert canonical_key(And(A, B)) != canonical_key(Or(A, B))


def test_subconcepts_and_name_sets() -> None:
    """Pre-order walk and the names a concept mentions."""
    concept = And(Exists("r", A), Not(Forall("s", B)))
    walk = list(subconcepts(concept))
    assert walk[0] == concept
    assert walk[1] == Exists("r", A)
    assert len(walk) == 6
    assert concept_names(concept) == {"A", "B"}
    assert role_names(concept) == {"r", "s"}


def test_signature_validation() -> None:
    """Signatures are sorted, unique and free of keywords."""
    sig = Signature.from_names(["B", "A", "A"], ["r"])
    assert sig.named_concepts == ("A", "B")
    assert sig.atoms() == (A, B, TOP, BOTTOM)
    with pytest.raises(ConfigurationError):
        Signature(("B", "A"), ())
    with pytest.raises(ConfigurationError):
        Signature.from_names(["Thing"], [])
    with pytest.raises(ConfigurationError):
        Signature.from_names([], ["r"])


def test_ensure_in_signature_names_the_unknown_symbol() -> None:
    """Unknown concepts and roles are reported by name and kind."""
    sig = Signature.from_names(["A"], ["r"])
    ensure_in_signature(sig, Exists("r", A))
    with pytest.raises(UnknownNameError) as excinfo:
        ensure_in_signature(sig, Exists("r", B))
    assert excinfo.value.kind == "concept"
    with pytest.raises(UnknownNameError) as excinfo:
        ensure_in_signature(sig, Forall("s", A))
    assert excinfo.value.name == "s"


def test_constructors_are_documented() -> None:
    """Every concept constructor carries its own docstring rather than the generated signature."""
    for cls in (Top, Bottom, Named, Not, And, Or, Exists, Forall):
        assert cls.__doc__
        assert not cls.__doc__.startswith(f"{cls.__name__}(")
