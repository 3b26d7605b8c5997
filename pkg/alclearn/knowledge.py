"""Knowledge-base ingestion and closed-world retrieval."""

from __future__ import annotations

import threading
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from alclearn.concepts import (
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
    ensure_in_signature,
    is_identifier,
)
from alclearn.errors import (
    ConfigurationError,
    InputFileError,
    KBFormatError,
    SubclassCycleWarning,
    UnknownNameError,
)
from alclearn.logging_utils import get_logger

logger = get_logger(__name__)

RDF_SUFFIXES = {".nt", ".ttl", ".owl", ".rdf", ".xml", ".n3"}
# individual names are written to comma-separated files
_INDIVIDUAL_FORBIDDEN = frozenset(",\"")


class Universe:
    """Fixed, ordered set of individuals addressed by bit position."""

    __slots__ = ("names", "index", "full_mask")

    def __init__(self, names: Iterable[str]) -> None:
        self.names: tuple[str, ...] = tuple(names)
        self.index: dict[str, int] = {name: position for position, name in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise ConfigurationError("individual names must be unique")
        self.full_mask = (1 << len(self.names)) - 1

    def __len__(self) -> int:
        return len(self.names)

    def mask_of(self, names: Iterable[str]) -> int:
        bits = 0
        for name in names:
            try:
                bits |= 1 << self.index[name]
            except KeyError:
                raise UnknownNameError(name, "individual") from None
        return bits


@dataclass(frozen=True, slots=True)
class IndividualSet:
    """Set of individuals over a universe, stored as a bit mask."""

    universe: Universe
    bits: int = 0

    @classmethod
    def empty(cls, universe: Universe) -> IndividualSet:
        return cls(universe, 0)

    @classmethod
    def full(cls, universe: Universe) -> IndividualSet:
        return cls(universe, universe.full_mask)

    @classmethod
    def of(cls, universe: Universe, names: Iterable[str]) -> IndividualSet:
        return cls(universe, universe.mask_of(names))

    def _check(self, other: IndividualSet) -> None:
        if other.universe is not self.universe:
            raise ValueError("individual sets belong to different knowledge bases")

    def __and__(self, other: IndividualSet) -> IndividualSet:
        self._check(other)
        return IndividualSet(self.universe, self.bits & other.bits)

    def __or__(self, other: IndividualSet) -> IndividualSet:
        self._check(other)
        return IndividualSet(self.universe, self.bits | other.bits)

    def __sub__(self, other: IndividualSet) -> IndividualSet:
        self._check(other)
        return IndividualSet(self.universe, self.bits & ~other.bits)

    def complement(self) -> IndividualSet:
        return IndividualSet(self.universe, self.universe.full_mask & ~self.bits)

    def issubset(self, other: IndividualSet) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def isdisjoint(self, other: IndividualSet) -> bool:
        self._check(other)
        return self.bits & other.bits == 0

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, name: object) -> bool:
        position = self.universe.index.get(name)  # type: ignore[arg-type]
        return position is not None and bool(self.bits >> position & 1)

    def __iter__(self) -> Iterator[str]:
        bits = self.bits
        names = self.universe.names
        while bits:
            low = bits & -bits
            yield names[low.bit_length() - 1]
            bits ^= low

    def indices(self) -> list[int]:
        result = []
        bits = self.bits
        while bits:
            low = bits & -bits
            result.append(low.bit_length() - 1)
            bits ^= low
        return result

    def names(self) -> list[str]:
        return list(self)

    def __repr__(self) -> str:
        return f"IndividualSet({self.names()!r})"


class KnowledgeBase:
    """Signature plus materialized assertions; immutable after construction.

    Retrieval results are memoized per canonical key. Readers never take the
    lock; inserts are serialized by it.
    """

    def __init__(
        self,
        *,
        individuals: Iterable[str],
        signature: Signature,
        concept_assertions: dict[str, Iterable[str]],
        role_assertions: dict[str, Iterable[tuple[str, str]]],
        subclass_axioms: Iterable[tuple[str, str]] = (),
        source: str = "<memory>",
    ) -> None:
        self.universe = Universe(individuals)
        self.signature = signature
        self.source = source
        self.subclass_axioms: frozenset[tuple[str, str]] = frozenset(subclass_axioms)
        self.concept_assertions: dict[str, IndividualSet] = {
            name: IndividualSet.of(self.universe, concept_assertions.get(name, ()))
            for name in signature.named_concepts
        }
        self.role_assertions: dict[str, frozenset[tuple[str, str]]] = {
            role: frozenset(role_assertions.get(role, ())) for role in signature.roles
        }
        self._successor_masks: dict[str, tuple[tuple[int, int], ...]] = {}
        self._successors: dict[str, dict[str, tuple[str, ...]]] = {}
        for role, pairs in self.role_assertions.items():
            masks: dict[int, int] = {}
            named: dict[str, list[str]] = {}
            for subject, obj in sorted(pairs):
                masks[self.universe.index[subject]] = masks.get(self.universe.index[subject], 0) | (
                    1 << self.universe.index[obj]
                )
                named.setdefault(subject, []).append(obj)
            self._successor_masks[role] = tuple(sorted(masks.items()))
            self._successors[role] = {subject: tuple(objs) for subject, objs in named.items()}
        self._cache: dict[str, IndividualSet] = {}
        self._lock = threading.Lock()

    @property
    def individuals(self) -> tuple[str, ...]:
        return self.universe.names

    @property
    def cache_size(self) -> int:
        return len(self._cache)

    def all_individuals(self) -> IndividualSet:
        return IndividualSet.full(self.universe)

    def individual_set(self, names: Iterable[str]) -> IndividualSet:
        return IndividualSet.of(self.universe, names)

    def successors(self, role: str, individual: str) -> tuple[str, ...]:
        return self._successors.get(role, {}).get(individual, ())

    def retrieve(self, c: Concept) -> IndividualSet:
        return retrieve(self, c)

    def _retrieve(self, c: Concept) -> IndividualSet:
        key = canonical_key(c)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        result = IndividualSet(self.universe, self._compute(c))
        with self._lock:
            result = self._cache.setdefault(key, result)
        return result

    def _compute(self, c: Concept) -> int:
        match c:
            case Top():
                return self.universe.full_mask
            case Bottom():
                return 0
            case Named(name):
                return self.concept_assertions[name].bits
            case Not(child):
                return self.universe.full_mask & ~self._retrieve(child).bits
            case And(left, right):
                return self._retrieve(left).bits & self._retrieve(right).bits
            case Or(left, right):
                return self._retrieve(left).bits | self._retrieve(right).bits
            case Exists(role, filler):
                return self._exists(role, self._retrieve(filler).bits)
            case Forall(role, filler):
                # x satisfies r only C iff it has no r-successor outside C
                outside = self.universe.full_mask & ~self._retrieve(filler).bits
                return self.universe.full_mask & ~self._exists(role, outside)
        raise TypeError(f"not a concept: {c!r}")

    def _exists(self, role: str, filler_bits: int) -> int:
        bits = 0
        for subject, successor_mask in self._successor_masks[role]:
            if successor_mask & filler_bits:
                bits |= 1 << subject
        return bits

    def __repr__(self) -> str:
        return (
            f"KnowledgeBase(source={self.source!r}, individuals={len(self.universe)}, "
            f"concepts={len(self.signature.named_concepts)}, roles={len(self.signature.roles)})"
        )


def retrieve(kb: KnowledgeBase, c: Concept) -> IndividualSet:
    """Return R(c) under closed-world set semantics."""
    ensure_in_signature(kb.signature, c)
    return kb._retrieve(c)


def instance_check(kb: KnowledgeBase, individual: str, c: Concept) -> bool:
    """Decide membership of one individual by direct recursive evaluation."""
    if individual not in kb.universe.index:
        raise UnknownNameError(individual, "individual")
    ensure_in_signature(kb.signature, c)
    return _holds(kb, individual, c)


def _holds(kb: KnowledgeBase, individual: str, c: Concept) -> bool:
    match c:
        case Top():
            return True
        case Bottom():
            return False
        case Named(name):
            return individual in kb.concept_assertions[name]
        case Not(child):
            return not _holds(kb, individual, child)
        case And(left, right):
            return _holds(kb, individual, left) and _holds(kb, individual, right)
        case Or(left, right):
            return _holds(kb, individual, left) or _holds(kb, individual, right)
        case Exists(role, filler):
            return any(_holds(kb, successor, filler) for successor in kb.successors(role, individual))
        case Forall(role, filler):
            return all(_holds(kb, successor, filler) for successor in kb.successors(role, individual))
    raise TypeError(f"not a concept: {c!r}")


def _subclass_closure(axioms: set[tuple[str, str]]) -> dict[str, set[str]]:
    """Map every concept to the set of its transitive superclasses."""
    direct: dict[str, set[str]] = {}
    for sub, sup in axioms:
        direct.setdefault(sub, set()).add(sup)
    closure: dict[str, set[str]] = {}
    for start in sorted(direct):
        seen: set[str] = set()
        stack = list(direct[start])
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            stack.extend(direct.get(current, ()))
        closure[start] = seen
    return closure


def kb_from_lines(lines: Iterable[str], source: str = "<memory>") -> KnowledgeBase:
    """Build a knowledge base from lines of the text format.

    Recognized statements (``#`` starts a comment line)::

        type <individual> <ConceptName>
        role <subject> <roleName> <object>
        subclass <ConceptName> <ConceptName>
        data <individual> <property> <value...>   (ignored)
    """
    individuals: dict[str, None] = {}
    concepts: set[str] = set()
    roles: set[str] = set()
    asserted: dict[str, set[str]] = {}
    role_pairs: dict[str, set[tuple[str, str]]] = {}
    axioms: set[tuple[str, str]] = set()
    statements = 0
    ignored_data = 0

    def _name(value: str, kind: str, line_number: int) -> str:
        if not is_identifier(value):
            raise KBFormatError(f"invalid {kind} name {value!r}", line=line_number, source=source)
        return value

    def _individual(value: str, line_number: int) -> str:
        if _INDIVIDUAL_FORBIDDEN.intersection(value):
            raise KBFormatError(f"invalid individual name {value!r}", line=line_number, source=source)
        return value

    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        keyword = fields[0]
        if keyword == "type" and len(fields) == 3:
            individual, concept = _individual(fields[1], line_number), _name(fields[2], "concept", line_number)
            individuals.setdefault(individual, None)
            concepts.add(concept)
            asserted.setdefault(concept, set()).add(individual)
        elif keyword == "role" and len(fields) == 4:
            subject = _individual(fields[1], line_number)
            role, obj = _name(fields[2], "role", line_number), _individual(fields[3], line_number)
            individuals.setdefault(subject, None)
            individuals.setdefault(obj, None)
            roles.add(role)
            role_pairs.setdefault(role, set()).add((subject, obj))
        elif keyword == "subclass" and len(fields) == 3:
            sub = _name(fields[1], "concept", line_number)
            sup = _name(fields[2], "concept", line_number)
            concepts.update((sub, sup))
            axioms.add((sub, sup))
        elif keyword == "data" and len(fields) >= 4:
            individuals.setdefault(_individual(fields[1], line_number), None)
            ignored_data += 1
        else:
            raise KBFormatError(f"malformed statement {line!r}", line=line_number, source=source)
        statements += 1

    if statements == 0:
        raise KBFormatError("empty knowledge base", source=source)
    if not concepts:
        raise KBFormatError("knowledge base declares no concept", source=source)
    if ignored_data:
        logger.warning("Data property assertions ignored | source=%s count=%d", source, ignored_data)

    clashes = set(roles) & set(concepts)
    if clashes:
        raise KBFormatError(f"names used both as concept and role: {sorted(clashes)}", source=source)

    closure = _subclass_closure(axioms)
    cyclic = sorted(name for name, supers in closure.items() if name in supers)
    if cyclic:
        warnings.warn(f"subclass cycle among {cyclic} in {source}", SubclassCycleWarning, stacklevel=2)
        logger.warning("Subclass cycle detected | source=%s concepts=%s", source, ",".join(cyclic))

    materialized: dict[str, set[str]] = {name: set(members) for name, members in asserted.items()}
    for sub, supers in closure.items():
        for sup in supers:
            materialized.setdefault(sup, set()).update(asserted.get(sub, ()))

    kb = KnowledgeBase(
        individuals=individuals,
        signature=Signature.from_names(concepts, roles),
        concept_assertions=materialized,
        role_assertions=role_pairs,
        subclass_axioms=axioms,
        source=source,
    )
    logger.info(
        "Knowledge base loaded | source=%s individuals=%d concepts=%d roles=%d axioms=%d",
        source,
        len(kb.individuals),
        len(kb.signature.named_concepts),
        len(kb.signature.roles),
        len(axioms),
    )
    return kb


def load_kb(path: str | Path) -> KnowledgeBase:
    """Load a knowledge base file; RDF serializations go through the rdflib importer."""
    path = Path(path)
    if path.suffix.lower() in RDF_SUFFIXES:
        return load_rdf(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFileError(f"cannot read knowledge base {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise KBFormatError(f"not UTF-8 text: {exc}", source=str(path)) from exc
    return kb_from_lines(text.splitlines(), source=str(path))


def _local_name(term: object) -> str:
    text = str(term)
    for separator in ("#", "/", ":"):
        if separator in text:
            text = text.rsplit(separator, 1)[1]
    return text


def load_rdf(path: str | Path, rdf_format: str | None = None) -> KnowledgeBase:
    """Import an RDF graph: rdf:type, rdfs:subClassOf and object-valued triples."""
    from rdflib import BNode, Graph, Literal
    from rdflib.namespace import OWL, RDF, RDFS

    path = Path(path)
    graph = Graph()
    try:
        graph.parse(str(path), format=rdf_format)
    except FileNotFoundError as exc:
        raise InputFileError(f"cannot read knowledge base {path}: {exc}") from exc
    except Exception as exc:
        raise KBFormatError(f"cannot parse RDF: {exc}", source=str(path)) from exc

    vocabularies = (str(RDF), str(RDFS), str(OWL))
    lines: list[str] = []
    skipped = 0
    for subject, predicate, obj in sorted(graph, key=lambda triple: tuple(str(part) for part in triple)):
        if isinstance(subject, BNode) or isinstance(obj, BNode):
            skipped += 1
            continue
        if predicate == RDF.type:
            if str(obj).startswith(vocabularies):
                continue
            lines.append(f"type {_local_name(subject)} {_local_name(obj)}")
        elif predicate == RDFS.subClassOf:
            if str(obj).startswith(vocabularies):
                continue
            lines.append(f"subclass {_local_name(subject)} {_local_name(obj)}")
        elif str(predicate).startswith(vocabularies):
            continue
        elif isinstance(obj, Literal):
            lines.append(f"data {_local_name(subject)} {_local_name(predicate)} literal")
        else:
            lines.append(f"role {_local_name(subject)} {_local_name(predicate)} {_local_name(obj)}")
    if skipped:
        logger.warning("Blank-node triples ignored | source=%s count=%d", path, skipped)
    return kb_from_lines(lines, source=str(path))
