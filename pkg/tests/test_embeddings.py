"""Tests for embedding tables and state matrices."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from alclearn.embeddings import (
    STATE_ROWS,
    EmbeddingTable,
    generate_embeddings,
    load_embeddings,
    save_embeddings,
    state_matrix,
)
from alclearn.errors import ConfigurationError, DimensionMismatchError, EmbeddingError, MissingIndividualError
from alclearn.heuristics import LearningProblem
from alclearn.knowledge import KnowledgeBase, kb_from_lines


def test_load_embeddings_in_kb_order(tmp_path: Path, tiny_kb: KnowledgeBase) -> None:
    """Rows are aligned with the KB's individuals regardless of file order."""
    path = tmp_path / "emb.csv"
    path.write_text("c,0,0,1,0\na,1,0,0,0\nb,0,1,0,0\nextra,9,9,9,9\n", encoding="utf-8")
    table = load_embeddings(path, tiny_kb)
    assert table.dimension == 4
    np.testing.assert_array_equal(table.vector("a"), [1.0, 0.0, 0.0, 0.0])
    np.testing.assert_array_equal(table.vector("c"), [0.0, 0.0, 1.0, 0.0])


def test_missing_individual_is_reported(tmp_path: Path, tiny_kb: KnowledgeBase) -> None:
    """Every KB individual needs a vector."""
    path = tmp_path / "emb.csv"
    path.write_text("a,1,0\nb,0,1\n", encoding="utf-8")
    with pytest.raises(MissingIndividualError) as excinfo:
        load_embeddings(path, tiny_kb)
    assert excinfo.value.name == "c"


def test_inconsistent_dimensions_are_reported(tmp_path: Path, tiny_kb: KnowledgeBase) -> None:
    """The first row fixes the width."""
    path = tmp_path / "emb.csv"
    path.write_text("a,1,0\nb,0,1,5\nc,1,1\n", encoding="utf-8")
    with pytest.raises(DimensionMismatchError) as excinfo:
        load_embeddings(path, tiny_kb)
    assert excinfo.value.line == 2


def test_non_numeric_values_are_rejected(tmp_path: Path, tiny_kb: KnowledgeBase) -> None:
    path = tmp_path / "emb.csv"
    path.write_text("a,1,x\nb,0,1\nc,1,1\n", encoding="utf-8")
    with pytest.raises(EmbeddingError):
        load_embeddings(path, tiny_kb)


def test_generation_is_deterministic_and_normalized(family_kb: KnowledgeBase) -> None:
    """Same seed, same table; every row has unit norm."""
    first = generate_embeddings(family_kb, d=16, seed=4)
    second = generate_embeddings(family_kb, d=16, seed=4)
    np.testing.assert_array_equal(first.vectors, second.vectors)
    np.testing.assert_allclose(np.linalg.norm(first.vectors, axis=1), 1.0, atol=1e-12)
    other = generate_embeddings(family_kb, d=16, seed=5)
    assert not np.array_equal(first.vectors, other.vectors)


def test_identical_profiles_share_a_vector_without_noise() -> None:
    """Individuals with equal assertion profiles coincide when the noise is off."""
    kb = kb_from_lines(["type a A", "type b A", "type c B", "role a r c", "role b r c"])
    table = generate_embeddings(kb, d=8, seed=0, noise_scale=0.0)
    np.testing.assert_allclose(table.vector("a"), table.vector("b"))
    assert not np.allclose(table.vector("a"), table.vector("c"))


def test_generation_validates_its_parameters(tiny_kb: KnowledgeBase) -> None:
    with pytest.raises(ConfigurationError):
        generate_embeddings(tiny_kb, d=1)
    with pytest.raises(ConfigurationError):
        generate_embeddings(tiny_kb, d=4, noise_scale=-1.0)


def test_state_matrix_rows(tiny_kb: KnowledgeBase, tiny_lp: LearningProblem) -> None:
    """Parent mean, child mean, positive mean, negative mean."""
    vectors = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    table = EmbeddingTable(tiny_kb.universe, vectors)
    m = state_matrix(table, tiny_kb.all_individuals(), tiny_kb.individual_set(["a"]), tiny_lp)
    assert m.shape == (STATE_ROWS, 2)
    np.testing.assert_allclose(m[0], [2 / 3, 2 / 3])
    np.testing.assert_allclose(m[1], [1.0, 0.0])
    np.testing.assert_allclose(m[2], [0.5, 0.5])
    np.testing.assert_allclose(m[3], [1.0, 1.0])


def test_empty_retrieval_maps_to_zero_row(tiny_kb: KnowledgeBase, tiny_lp: LearningProblem) -> None:
    """The mean of no individuals is the zero vector."""
    table = generate_embeddings(tiny_kb, d=4, seed=0)
    m = state_matrix(table, tiny_kb.all_individuals(), tiny_kb.individual_set([]), tiny_lp)
    np.testing.assert_array_equal(m[1], np.zeros(4))


def test_table_rejects_bad_matrices(tiny_kb: KnowledgeBase) -> None:
    """Row count must match the universe and values must be finite."""
    with pytest.raises(EmbeddingError):
        EmbeddingTable(tiny_kb.universe, np.zeros((2, 4)))
    with pytest.raises(EmbeddingError):
        EmbeddingTable(tiny_kb.universe, np.full((3, 4), np.nan))


def test_saved_embeddings_load_back(tmp_path: Path, family_kb: KnowledgeBase) -> None:
    """The CSV writer keeps full float precision."""
    table = generate_embeddings(family_kb, d=8, seed=1)
    path = tmp_path / "out" / "emb.csv"
    save_embeddings(table, path)
    loaded = load_embeddings(path, family_kb)
    np.testing.assert_array_equal(loaded.vectors, table.vectors)


def test_state_matrix_ignores_individual_order(tmp_path: Path) -> None:
    """The same named sets give the same state whichever order the KB lists its individuals in."""
    lines = ["type a A", "type b B", "role a r c", "type d A", "role d r b"]
    forward = kb_from_lines(lines)
    backward = kb_from_lines(list(reversed(lines)))
    assert forward.individuals != backward.individuals
    path = tmp_path / "emb.csv"
    save_embeddings(generate_embeddings(forward, d=6, seed=2), path)
    tables = [load_embeddings(path, kb) for kb in (forward, backward)]

    states = []
    for kb, table in zip((forward, backward), tables):
        lp = LearningProblem(kb.individual_set(["a", "d"]), kb.individual_set(["b"]))
        states.append(state_matrix(table, kb.individual_set(["a", "b", "c"]), kb.individual_set(["c", "a"]), lp))
    np.testing.assert_allclose(states[0], states[1], rtol=0, atol=1e-12)


def test_state_rows_are_averages_of_member_vectors(family_kb: KnowledgeBase) -> None:
    """Every row of a nonempty set is the uniform average of its members, inside their convex hull."""
    table = generate_embeddings(family_kb, d=8, seed=5)
    rng = np.random.default_rng(5)
    names = list(family_kb.individuals)
    for _ in range(25):
        sets = [
            family_kb.individual_set(str(name) for name in rng.choice(names, size=int(rng.integers(1, 12)), replace=False))
            for _ in range(4)
        ]
        negatives = sets[3] - sets[2]
        if not negatives:
            continue
        lp = LearningProblem(sets[2], negatives)
        m = state_matrix(table, sets[0], sets[1], lp)
        for row, members in zip(m, (sets[0], sets[1], lp.positives, lp.negatives)):
            member_vectors = np.stack([table.vector(name) for name in members])
            np.testing.assert_allclose(row, member_vectors.mean(axis=0), atol=1e-12)
            assert np.all(row >= member_vectors.min(axis=0) - 1e-12)
            assert np.all(row <= member_vectors.max(axis=0) + 1e-12)


def test_undecodable_embedding_file_is_rejected(tmp_path: Path, tiny_kb: KnowledgeBase) -> None:
    path = tmp_path / "emb.csv"
    path.write_bytes(b"a,\xff\xfe,0\n")
    with pytest.raises(EmbeddingError):
        load_embeddings(path, tiny_kb)
