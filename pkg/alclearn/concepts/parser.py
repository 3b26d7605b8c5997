"""Recursive-descent parser and minimal-parenthesis renderer for the concept syntax.

Grammar (keywords are case-sensitive)::

    concept   := or_expr
    or_expr   := and_expr { "or" and_expr }
    and_expr  := unary { "and" unary }
    unary     := "not" unary | role_expr | atom
    role_expr := IDENT ("some" | "only") unary
    atom      := "Thing" | "Nothing" | IDENT | "(" concept ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from alclearn.concepts.concept import (
    BOTTOM,
    TOP,
    And,
    Bottom,
    Concept,
    Exists,
    Forall,
    Named,
    Not,
    Or,
    Top,
)
from alclearn.errors import ConceptSyntaxError, UnknownTokenError

IDENT_PATTERN = r"[A-Za-z_][A-Za-z0-9_\-.:#/]*"

_TOKEN_RE = re.compile(rf"\s*(?:(?P<paren>[()])|(?P<word>{IDENT_PATTERN}))")
_IDENT_RE = re.compile(rf"^{IDENT_PATTERN}$")

_RESERVED = {"and", "or", "not", "some", "only", "Thing", "Nothing"}

# binding strength used by the renderer
_PREC_OR = 1
_PREC_AND = 2
_PREC_UNARY = 3


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "(", ")", "word" or "end"
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise UnknownTokenError(f"unexpected character {text[pos]!r}", position=pos)
        if match.group("paren"):
            tokens.append(Token(match.group("paren"), match.group("paren"), match.start("paren")))
        else:
            tokens.append(Token("word", match.group("word"), match.start("word")))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self._tokens = tokenize(text)
        self._index = 0

    def _peek(self, offset: int = 0) -> Token:
        index = min(self._index + offset, len(self._tokens) - 1)
        return self._tokens[index]

    def _advance(self) -> Token:
        token = self._tokens[self._index]
        self._index = min(self._index + 1, len(self._tokens) - 1)
        return token

    def _is_word(self, word: str, offset: int = 0) -> bool:
        token = self._peek(offset)
        return token.kind == "word" and token.text == word

    def parse(self) -> Concept:
        if self._peek().kind == "end":
            raise ConceptSyntaxError("empty concept", position=self._peek().position)
        concept = self._or_expr()
        trailing = self._peek()
        if trailing.kind != "end":
            raise ConceptSyntaxError(f"unexpected token {trailing.text!r}", position=trailing.position)
        return concept

    def _or_expr(self) -> Concept:
        concept = self._and_expr()
        while self._is_word("or"):
            self._advance()
            concept = Or(concept, self._and_expr())
        return concept

    def _and_expr(self) -> Concept:
        concept = self._unary()
        while self._is_word("and"):
            self._advance()
            concept = And(concept, self._unary())
        return concept

    def _unary(self) -> Concept:
        if self._is_word("not"):
            self._advance()
            return Not(self._unary())
        token = self._peek()
        if token.kind == "word" and token.text not in _RESERVED and (
            self._is_word("some", 1) or self._is_word("only", 1)
        ):
            self._advance()
            quantifier = self._advance().text
            filler = self._unary()
            return Exists(token.text, filler) if quantifier == "some" else Forall(token.text, filler)
        return self._atom()

    def _atom(self) -> Concept:
        token = self._advance()
        if token.kind == "(":
            concept = self._or_expr()
            closing = self._advance()
            if closing.kind != ")":
                raise ConceptSyntaxError("expected ')'", position=closing.position)
            return concept
        if token.kind == "word":
            if token.text == "Thing":
                return TOP
            if token.text == "Nothing":
                return BOTTOM
            if token.text in _RESERVED:
                raise ConceptSyntaxError(f"unexpected keyword {token.text!r}", position=token.position)
            return Named(token.text)
        if token.kind == "end":
            raise ConceptSyntaxError("unexpected end of input", position=token.position)
        raise ConceptSyntaxError(f"unexpected token {token.text!r}", position=token.position)


def parse_concept(text: str) -> Concept:
    """Parse concept text into an expression tree."""
    return _Parser(text).parse()


def is_identifier(name: str) -> bool:
    """Return whether a name can appear in concept text."""
    return bool(_IDENT_RE.match(name)) and name not in _RESERVED


def _precedence(c: Concept) -> int:
    if isinstance(c, Or):
        return _PREC_OR
    if isinstance(c, And):
        return _PREC_AND
    return _PREC_UNARY


def _wrap(c: Concept, needs_parens: bool) -> str:
    text = render_concept(c)
    return f"({text})" if needs_parens else text


def render_concept(c: Concept) -> str:
    """Render a concept with the fewest parentheses that re-parse to the same tree."""
    match c:
        case Top():
            return "Thing"
        case Bottom():
            return "Nothing"
        case Named(name):
            return name
        case Not(child):
            return f"not {_wrap(child, _precedence(child) < _PREC_UNARY)}"
        case Exists(role, filler):
            return f"{role} some {_wrap(filler, _precedence(filler) < _PREC_UNARY)}"
        case Forall(role, filler):
            return f"{role} only {_wrap(filler, _precedence(filler) < _PREC_UNARY)}"
        case And(left, right):
            # left-associative: a conjunction on the right needs parentheses
            return (
                f"{_wrap(left, _precedence(left) < _PREC_AND)} and "
                f"{_wrap(right, _precedence(right) <= _PREC_AND)}"
            )
        case Or(left, right):
            return (
                f"{_wrap(left, _precedence(left) < _PREC_OR)} or "
                f"{_wrap(right, _precedence(right) <= _PREC_OR)}"
            )
    raise TypeError(f"not a concept: {c!r}")
