"""ALC concept algebra: expression trees, length, height and canonical keys."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Union

from alclearn.errors import ConfigurationError, UnknownNameError

KEYWORDS = frozenset({"Thing", "Nothing", "and", "or", "not", "some", "only"})


@dataclass(frozen=True, slots=True)
class Top:
    """The universal concept."""


@dataclass(frozen=True, slots=True)
class Bottom:
    """The empty concept."""


@dataclass(frozen=True, slots=True)
class Named:
    """An atomic concept drawn from the signature."""

    name: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("concept name must be nonempty")


@dataclass(frozen=True, slots=True)
class Not:
    """Complement of a concept."""

    child: Concept


@dataclass(frozen=True, slots=True)
class And:
    """Conjunction of two concepts."""

    left: Concept
    right: Concept


@dataclass(frozen=True, slots=True)
class Or:
    """Disjunction of two concepts."""

    left: Concept
    right: Concept


@dataclass(frozen=True, slots=True)
class Exists:
    """Individuals with at least one role successor in the filler."""

    role: str
    filler: Concept

    def __post_init__(self) -> None:
        if not self.role:
            raise ValueError("role name must be nonempty")


@dataclass(frozen=True, slots=True)
class Forall:
    """Individuals whose role successors all lie in the filler."""

    role: str
    filler: Concept

    def __post_init__(self) -> None:
        if not self.role:
            raise ValueError("role name must be nonempty")


Concept = Union[Top, Bottom, Named, Not, And, Or, Exists, Forall]

TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True, slots=True)
class Signature:
    """Named concepts and roles of a knowledge base, both in lexicographic order."""

    named_concepts: tuple[str, ...]
    roles: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.named_concepts:
            raise ConfigurationError("a signature needs at least one named concept")
        if tuple(sorted(set(self.named_concepts))) != self.named_concepts:
            raise ConfigurationError("named concepts must be unique and sorted")
        if tuple(sorted(set(self.roles))) != self.roles:
            raise ConfigurationError("roles must be unique and sorted")
        clashes = KEYWORDS.intersection(self.named_concepts) | KEYWORDS.intersection(self.roles)
        if clashes:
            raise ConfigurationError(f"reserved words used as names: {sorted(clashes)}")

    @classmethod
    def from_names(cls, named_concepts: Iterable[str], roles: Iterable[str] = ()) -> Signature:
        return cls(tuple(sorted(set(named_concepts))), tuple(sorted(set(roles))))

    def atoms(self) -> tuple[Concept, ...]:
        """Return N_C^+: every named concept followed by Top and Bottom."""
        return tuple(Named(name) for name in self.named_concepts) + (TOP, BOTTOM)


@lru_cache(maxsize=1 << 16)
def length(c: Concept) -> int:
    """Number of symbols of a concept."""
    match c:
        case Top() | Bottom() | Named():
            return 1
        case Not(child):
            return length(child) + 1
        case And(left, right) | Or(left, right):
            return length(left) + length(right) + 1
        case Exists(_, filler) | Forall(_, filler):
            return length(filler) + 2
    raise TypeError(f"not a concept: {c!r}")


@lru_cache(maxsize=1 << 16)
def height(c: Concept) -> int:
    """Depth of the constructor tree; atoms have height 0."""
    match c:
        case Top() | Bottom() | Named():
            return 0
        case Not(child):
            return height(child) + 1
        case Exists(_, filler) | Forall(_, filler):
            return height(filler) + 1
        case And(left, right) | Or(left, right):
            return max(height(left), height(right)) + 1
    raise TypeError(f"not a concept: {c!r}")


@lru_cache(maxsize=1 << 17)
def canonical_key(c: Concept) -> str:
    """Key identifying a concept up to commutativity of conjunction and disjunction.

    No other rewriting is applied: ``Or(A, A)`` and ``A`` keep different keys.
    """
    match c:
        case Top():
            return "top"
        case Bottom():
            return "bottom"
        case Named(name):
            return f"named:{name}"
        case Not(child):
            return f"not({canonical_key(child)})"
        case And(left, right):
            first, second = sorted((canonical_key(left), canonical_key(right)))
            return f"and({first},{second})"
        case Or(left, right):
            first, second = sorted((canonical_key(left), canonical_key(right)))
            return f"or({first},{second})"
        case Exists(role, filler):
            return f"some:{role}({canonical_key(filler)})"
        case Forall(role, filler):
            return f"only:{role}({canonical_key(filler)})"
    raise TypeError(f"not a concept: {c!r}")


def subconcepts(c: Concept) -> Iterator[Concept]:
    """Yield the concept and all of its sub-concepts in pre-order."""
    yield c
    match c:
        case Not(child):
            yield from subconcepts(child)
        case And(left, right) | Or(left, right):
            yield from subconcepts(left)
            yield from subconcepts(right)
        case Exists(_, filler) | Forall(_, filler):
            yield from subconcepts(filler)


def concept_names(c: Concept) -> set[str]:
    return {sub.name for sub in subconcepts(c) if isinstance(sub, Named)}


def role_names(c: Concept) -> set[str]:
    return {sub.role for sub in subconcepts(c) if isinstance(sub, (Exists, Forall))}


def ensure_in_signature(sig: Signature, c: Concept) -> None:
    """Raise UnknownNameError when the concept mentions a name outside the signature."""
    known_concepts = set(sig.named_concepts)
    known_roles = set(sig.roles)
    for name in sorted(concept_names(c)):
        if name not in known_concepts:
            raise UnknownNameError(name, "concept")
    for role in sorted(role_names(c)):
        if role not in known_roles:
            raise UnknownNameError(role, "role")
