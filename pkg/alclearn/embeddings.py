"""Individual embeddings and the averaged state matrix fed to the Q-network."""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from alclearn.config import EmbeddingConfig
from alclearn.errors import DimensionMismatchError, EmbeddingError, InputFileError, MissingIndividualError
from alclearn.heuristics import LearningProblem
from alclearn.knowledge import IndividualSet, KnowledgeBase, Universe
from alclearn.logging_utils import get_logger

logger = get_logger(__name__)

STATE_ROWS = 4

# shape (STATE_ROWS, d)
StateMatrix = np.ndarray


@dataclass(frozen=True, slots=True)
class EmbeddingTable:
    """One row per individual, aligned with the knowledge base's individual order."""

    universe: Universe
    vectors: np.ndarray

    def __post_init__(self) -> None:
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.universe):
            raise EmbeddingError(
                f"embedding matrix of shape {self.vectors.shape} does not cover {len(self.universe)} individuals"
            )
        if not np.all(np.isfinite(self.vectors)):
            raise EmbeddingError("embedding values must be finite")
        self.vectors.setflags(write=False)

    @property
    def dimension(self) -> int:
        return int(self.vectors.shape[1])

    def vector(self, individual: str) -> np.ndarray:
        return self.vectors[self.universe.index[individual]]

    def mean(self, members: IndividualSet) -> np.ndarray:
        """Mean vector of a set; the empty set maps to the zero vector."""
        count = len(members)
        if count == 0:
            return np.zeros(self.dimension)
        mask = _bit_mask(members.bits, len(self.universe))
        return self.vectors[mask].sum(axis=0) / count


def _bit_mask(bits: int, size: int) -> np.ndarray:
    raw = np.frombuffer(bits.to_bytes((size + 7) // 8 or 1, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:size].astype(bool)


def load_embeddings(path: str | Path, kb: KnowledgeBase) -> EmbeddingTable:
    """Read ``individual,v1,...,vd`` rows; the first row fixes the dimension."""
    path = Path(path)
    rows: dict[str, list[float]] = {}
    dimension: int | None = None
    try:
        with path.open("r", encoding="utf-8", newline="") as handle:
            for line_number, record in enumerate(csv.reader(handle), start=1):
                if not record or not "".join(record).strip():
                    continue
                name, values = record[0].strip(), record[1:]
                if dimension is None:
                    dimension = len(values)
                    if dimension < 1:
                        raise EmbeddingError(f"line {line_number}: no embedding values")
                elif len(values) != dimension:
                    raise DimensionMismatchError(line_number, dimension, len(values))
                try:
                    rows[name] = [float(value) for value in values]
                except ValueError as exc:
                    raise EmbeddingError(f"line {line_number}: {exc}") from exc
    except OSError as exc:
        raise InputFileError(f"cannot read embeddings {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise EmbeddingError(f"{path}: not UTF-8 text: {exc}") from exc

    if dimension is None:
        raise EmbeddingError(f"{path}: no embedding rows")
    missing = [name for name in kb.individuals if name not in rows]
    if missing:
        raise MissingIndividualError(missing[0])
    vectors = np.array([rows[name] for name in kb.individuals], dtype=np.float64)
    logger.info("Embeddings loaded | source=%s individuals=%d dimension=%d", path, len(kb.individuals), dimension)
    return EmbeddingTable(kb.universe, vectors)


def save_embeddings(table: EmbeddingTable, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        for name, vector in zip(table.universe.names, table.vectors):
            writer.writerow([name, *(repr(float(value)) for value in vector)])


def _feature_vector(feature: str, dimension: int) -> np.ndarray:
    digest = hashlib.blake2b(feature.encode("utf-8"), digest_size=8).digest()
    rng = np.random.default_rng(int.from_bytes(digest, "little"))
    return rng.standard_normal(dimension)


def generate_embeddings(kb: KnowledgeBase, d: int = 32, seed: int = 0, *, noise_scale: float = 0.01) -> EmbeddingTable:
    """Deterministic embeddings from each individual's assertion profile.

    Every named-concept membership and every per-role in/out degree contributes
    a hashed feature vector; the sum is unit-normalized, perturbed with seeded
    Gaussian noise and normalized again.
    """
    EmbeddingConfig(dimension=d, noise_scale=noise_scale, seed=seed)
    size = len(kb.individuals)
    features = np.zeros((size, d))
    for name in kb.signature.named_concepts:
        direction = _feature_vector(f"concept:{name}", d)
        for position in kb.concept_assertions[name].indices():
            features[position] += direction
    for role in kb.signature.roles:
        outgoing = _feature_vector(f"out:{role}", d)
        incoming = _feature_vector(f"in:{role}", d)
        out_degree = np.zeros(size)
        in_degree = np.zeros(size)
        for subject, obj in kb.role_assertions[role]:
            out_degree[kb.universe.index[subject]] += 1
            in_degree[kb.universe.index[obj]] += 1
        features += np.log1p(out_degree)[:, None] * outgoing + np.log1p(in_degree)[:, None] * incoming

    # individuals without any assertion share one fixed direction
    isolated = _feature_vector("isolated", d)
    norms = np.linalg.norm(features, axis=1)
    features[norms == 0] = isolated
    features /= np.linalg.norm(features, axis=1, keepdims=True)

    noise = np.random.default_rng(seed).standard_normal((size, d)) * noise_scale
    vectors = features + noise
    vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
    logger.info("Embeddings generated | individuals=%d dimension=%d seed=%d", size, d, seed)
    return EmbeddingTable(kb.universe, vectors)


def state_matrix(
    table: EmbeddingTable,
    retrieved_parent: IndividualSet,
    retrieved_child: IndividualSet,
    lp: LearningProblem,
) -> StateMatrix:
    """Rows: mean of R(parent), mean of R(child), mean of E+, mean of E-."""
    return np.stack(
        [
            table.mean(retrieved_parent),
            table.mean(retrieved_child),
            table.mean(lp.positives),
            table.mean(lp.negatives),
        ]
    )
